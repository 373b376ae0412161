#include "intrvfl/config.hpp"

#include "intrvfl/error.hpp"

#include <charconv>
#include <cmath>

namespace intrvfl {

void RunConfig::validate() const {
  if (families.empty()) throw ConfigError("family", "at least one model family is required");
  (void)family_list();
  if (folds < 2) throw ConfigError("folds", "must be >= 2");
  if (seeds < 1) throw ConfigError("seeds", "must be >= 1");
  if (jobs < 1) throw ConfigError("jobs", "must be >= 1");
  if (delimiter.size() != 1) throw ConfigError("delimiter", "must be a single character");
  if (budget && !(*budget > 0.0)) throw ConfigError("budget", "must be > 0");
  const ReadoutMode mode = ReadoutMode::parse(readout);
  if (mode.uses_ga()) ga.validate();
  model_spec().validate();
  grid().validate();
  for (const auto& m : sweep_modes()) {
    if (m.integer() && family_list().size() == 1 && family() == ModelFamily::rvfl) {
      throw ConfigError("readout_sweep", "integer readouts require the intrvfl family");
    }
    if (m.uses_ga()) ga.validate();
  }
  (void)profile();
}

ModelFamily RunConfig::family() const {
  if (families.empty()) throw ConfigError("family", "at least one model family is required");
  return parse_family(families.front());
}

std::vector<ModelFamily> RunConfig::family_list() const {
  std::vector<ModelFamily> out;
  for (const auto& f : families) out.push_back(parse_family(f));
  return out;
}

ReadoutMode RunConfig::readout_mode() const {
  ReadoutMode mode = ReadoutMode::parse(readout);
  if (mode.kind == ReadoutKind::ga_from_quantized && mode.levels() > kGaLevelCutoff && !force_ga) {
    mode.kind = ReadoutKind::quantized;
  }
  return mode;
}

ModelSpec RunConfig::model_spec() const {
  ModelSpec spec;
  spec.family = family();
  spec.n_hidden = n_hidden;
  spec.lambda = lambda;
  spec.kappa = kappa;
  spec.readout = readout_mode();
  return spec;
}

HyperGrid RunConfig::grid() const {
  HyperGrid g = HyperGrid::standard(grid_n_max);
  if (!grid_n.empty()) g.n_values = grid_n;
  if (!grid_lambda_log2.empty()) {
    g.lambda_values.clear();
    for (int k : grid_lambda_log2) g.lambda_values.push_back(std::ldexp(1.0, k));
  }
  if (!grid_kappa.empty()) g.kappa_values = grid_kappa;
  return g;
}

EvalOptions RunConfig::eval_options() const {
  EvalOptions o;
  o.n_folds = folds;
  o.n_seeds = seeds;
  o.base_seed = base_seed;
  o.jobs = jobs;
  o.ga = ga;
  return o;
}

CsvOptions RunConfig::csv_options() const {
  CsvOptions o;
  if (delimiter.size() != 1) throw ConfigError("delimiter", "must be a single character");
  o.delimiter = delimiter.front();
  int idx = 0;
  const auto [ptr, ec] = std::from_chars(label_column.data(), label_column.data() + label_column.size(), idx);
  if (ec == std::errc{} && ptr == label_column.data() + label_column.size()) {
    o.label_column = idx;
  } else {
    o.label_column = label_column;
  }
  return o;
}

std::vector<ReadoutMode> RunConfig::sweep_modes() const {
  std::vector<ReadoutMode> out;
  for (const auto& s : readout_sweep) out.push_back(ReadoutMode::parse(s));
  return out;
}

CostProfile RunConfig::profile() const {
  return cost_profile.empty() ? CostProfile::default_profile() : load_profile(cost_profile);
}

}  // namespace intrvfl
