// intrvfl: train, evaluate and cost density-encoded integer RVFL networks and
// the conventional RVFL baseline.
//
// Exit codes: 0 success, 1 unexpected failure, 2 configuration error,
// 3 data error, 4 benchmark finished with some datasets skipped.

#include "intrvfl/config.hpp"
#include "intrvfl/cost.hpp"
#include "intrvfl/error.hpp"
#include "intrvfl/evaluation.hpp"
#include "intrvfl/kernels.hpp"
#include "intrvfl/model.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

enum ExitCode : int { kOk = 0, kFailure = 1, kConfigError = 2, kDataError = 3, kPartialFailure = 4 };

void write_file(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw intrvfl::ConfigError("output_dir", "cannot write " + path.string());
  out << text;
}

void emit(const json& j) { std::cout << j.dump(2) << '\n'; }

fs::path out_path(const intrvfl::RunConfig& cfg, const std::string& name) { return fs::path(cfg.output_dir) / name; }

const std::string& single_dataset(const intrvfl::RunConfig& cfg) {
  if (cfg.datasets.size() != 1) throw intrvfl::ConfigError("data", "this command takes exactly one dataset file");
  return cfg.datasets.front();
}

void warn_constant_features(const intrvfl::Normalizer& norm, const std::string& dataset) {
  for (auto i : norm.constant_features()) {
    std::cerr << "warning: " << dataset << ": feature " << i << " is constant in the training rows; it maps to 0\n";
  }
}

int cmd_train(const intrvfl::RunConfig& cfg) {
  const auto ds = intrvfl::load_csv(single_dataset(cfg), cfg.csv_options());
  const auto spec = cfg.model_spec();
  if (spec.readout.str() != cfg.readout) {
    std::cerr << "note: readout " << cfg.readout << " runs as " << spec.readout.str()
              << " (GA is off above " << intrvfl::kGaLevelCutoff << " levels; pass --force-ga)\n";
  }
  intrvfl::GaConfig ga = cfg.ga;
  ga.seed = intrvfl::ga_seed(cfg.base_seed, 0);
  const auto model = intrvfl::train_model(spec, ds, intrvfl::projection_seed(cfg.base_seed), ga, cfg.jobs);
  warn_constant_features(model.normalizer, ds.name);
  const fs::path path = cfg.model_path.empty() ? out_path(cfg, ds.name + "." + std::string(intrvfl::to_string(spec.family)) + ".model.json")
                                               : fs::path(cfg.model_path);
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  intrvfl::save_model(model, path);
  emit({{"command", "train"},
        {"dataset", ds.name},
        {"model_file", path.string()},
        {"family", intrvfl::to_string(spec.family)},
        {"n_hidden", spec.n_hidden},
        {"lambda", spec.lambda},
        {"kappa", spec.family == intrvfl::ModelFamily::intrvfl ? json(spec.kappa) : json(nullptr)},
        {"readout", spec.readout.str()},
        {"train_accuracy", model.accuracy(ds)},
        {"kernels", intrvfl::kernels::isa_name(intrvfl::kernels::active().isa)}});
  return kOk;
}

int cmd_eval(const intrvfl::RunConfig& cfg) {
  const auto ds = intrvfl::load_csv(single_dataset(cfg), cfg.csv_options());
  if (!cfg.model_path.empty()) {
    const auto model = intrvfl::load_model(cfg.model_path);
    if (model.n_features != ds.n_features()) throw intrvfl::ValidationError("model expects " + std::to_string(model.n_features) + " features");
    emit({{"command", "eval"}, {"dataset", ds.name}, {"model_file", cfg.model_path}, {"accuracy", model.accuracy(ds)}});
    return kOk;
  }
  const auto opts = cfg.eval_options();
  const auto plan = intrvfl::make_folds(ds, opts.n_folds, intrvfl::fold_seed(opts.base_seed));
  const auto spec = cfg.model_spec();
  const auto cv = intrvfl::cross_validate(spec, ds, plan, opts);
  intrvfl::EvalReport report;
  report.family = spec.family;
  report.base_seed = opts.base_seed;
  intrvfl::DatasetResult row;
  row.dataset = ds.name;
  row.n_samples = ds.n_samples();
  row.n_features = ds.n_features();
  row.n_classes = ds.n_classes;
  row.chosen = spec;
  row.mean_accuracy = cv.mean_accuracy;
  row.detail = cv;
  report.datasets.push_back(row);
  const json j = intrvfl::report_to_json(report);
  write_file(out_path(cfg, "eval_" + ds.name + "_" + std::string(intrvfl::to_string(spec.family)) + ".json"), j.dump(2) + "\n");
  emit(j);
  return kOk;
}

int cmd_grid(const intrvfl::RunConfig& cfg) {
  const auto ds = intrvfl::load_csv(single_dataset(cfg), cfg.csv_options());
  const auto opts = cfg.eval_options();
  const auto plan = intrvfl::make_folds(ds, opts.n_folds, intrvfl::fold_seed(opts.base_seed));
  json out{{"command", "grid"}, {"dataset", ds.name}, {"results", json::array()}};
  for (auto family : cfg.family_list()) {
    const auto result = intrvfl::grid_search(family, ds, cfg.grid(), plan, opts);
    std::string csv = "n_hidden,lambda,kappa,mean_accuracy\n";
    json points = json::array();
    for (const auto& p : result.points) {
      csv += std::to_string(p.n_hidden) + "," + json(p.lambda).dump() + "," + std::to_string(p.kappa) + "," +
             json(p.mean_accuracy).dump() + "\n";
    }
    write_file(out_path(cfg, "grid_" + ds.name + "_" + std::string(intrvfl::to_string(family)) + ".csv"), csv);
    json best{{"family", intrvfl::to_string(family)},
              {"n_hidden", result.best.n_hidden},
              {"lambda", result.best.lambda},
              {"mean_accuracy", result.best_accuracy},
              {"n_points", result.points.size()}};
    if (family == intrvfl::ModelFamily::intrvfl) best["kappa"] = result.best.kappa;
    out["results"].push_back(best);
  }
  write_file(out_path(cfg, "grid_" + ds.name + ".json"), out.dump(2) + "\n");
  emit(out);
  return kOk;
}

int cmd_benchmark(const intrvfl::RunConfig& cfg) {
  std::vector<fs::path> files;
  for (const auto& d : cfg.datasets) {
    if (fs::is_directory(d)) {
      const auto listed = intrvfl::list_datasets(d);
      files.insert(files.end(), listed.begin(), listed.end());
    } else {
      files.emplace_back(d);
    }
  }
  if (files.empty()) throw intrvfl::ConfigError("data", "no dataset files found");

  intrvfl::BenchmarkOptions opts;
  opts.families = cfg.family_list();
  opts.grid = cfg.grid();
  opts.eval = cfg.eval_options();
  opts.readout_sweep = cfg.sweep_modes();
  opts.profile = cfg.profile();
  opts.csv = cfg.csv_options();
  opts.log = [](const std::string& msg) { std::cerr << msg << '\n'; };
  const auto result = intrvfl::run_benchmark(files, opts);

  json summary{{"command", "benchmark"}, {"n_datasets", files.size()}, {"failures", result.failures}};
  for (const auto& report : result.reports) {
    const std::string name(intrvfl::to_string(report.family));
    write_file(out_path(cfg, "report_" + name + ".json"), intrvfl::report_to_json(report).dump(2) + "\n");
    summary["mean_accuracy"][name] = report.mean_accuracy();
  }
  write_file(out_path(cfg, "results.csv"), intrvfl::reports_to_csv(result.reports));
  if (result.comparison) {
    const std::string a(intrvfl::to_string(result.reports[0].family));
    const std::string b(intrvfl::to_string(result.reports[1].family));
    const json cmp = intrvfl::comparison_to_json(*result.comparison, a, b);
    write_file(out_path(cfg, "comparison.json"), cmp.dump(2) + "\n");
    write_file(out_path(cfg, "scatter.csv"), intrvfl::comparison_to_csv(*result.comparison, a, b));
    summary["comparison"] = cmp;
  }
  emit(summary);
  return result.failures.empty() ? kOk : kPartialFailure;
}

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw intrvfl::ValidationError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw intrvfl::ValidationError(path + ": " + e.what());
  }
}

int cmd_compare(const intrvfl::RunConfig& cfg, const std::vector<std::string>& reports) {
  if (reports.size() != 2) throw intrvfl::ConfigError("reports", "compare takes exactly two report files");
  const auto a = intrvfl::report_from_json(read_json(reports[0]));
  const auto b = intrvfl::report_from_json(read_json(reports[1]));
  std::string name_a(intrvfl::to_string(a.family));
  std::string name_b(intrvfl::to_string(b.family));
  if (name_a == name_b) {
    name_a += "_a";
    name_b += "_b";
  }
  const auto cmp = intrvfl::compare_models(a, b);
  const json j = intrvfl::comparison_to_json(cmp, name_a, name_b);
  write_file(out_path(cfg, "comparison.json"), j.dump(2) + "\n");
  write_file(out_path(cfg, "scatter.csv"), intrvfl::comparison_to_csv(cmp, name_a, name_b));
  emit(j);
  return kOk;
}

int cmd_cost(const intrvfl::RunConfig& cfg, std::size_t n_features, std::size_t n_classes, int boundary) {
  const auto profile = cfg.profile();
  std::vector<std::pair<intrvfl::ModelFamily, intrvfl::CostSpec>> specs;
  if (!cfg.model_path.empty()) {
    const auto model = intrvfl::load_model(cfg.model_path);
    int b = 0;
    if (const auto* q = std::get_if<intrvfl::IntReadout>(&model.readout)) b = q->boundary;
    specs.emplace_back(model.spec.family,
                       intrvfl::CostSpec{model.spec.family == intrvfl::ModelFamily::intrvfl, model.n_features,
                                         model.spec.n_hidden, static_cast<std::size_t>(model.n_classes), model.spec.kappa, b});
  } else {
    for (auto family : cfg.family_list()) {
      specs.emplace_back(family, intrvfl::CostSpec{family == intrvfl::ModelFamily::intrvfl, n_features, cfg.n_hidden,
                                                   n_classes, cfg.kappa, boundary});
    }
  }
  json out{{"command", "cost"}, {"profile", intrvfl::profile_to_json(profile)}, {"models", json::object()}};
  std::map<intrvfl::ModelFamily, double> totals;
  for (const auto& [family, spec] : specs) {
    const std::string name(intrvfl::to_string(family));
    json m{{"n_features", spec.n_features},
           {"n_hidden", spec.n_hidden},
           {"n_classes", spec.n_classes},
           {"cost", intrvfl::cost_to_json(intrvfl::count_ops(spec, profile))}};
    if (spec.integer_network) {
      m["kappa"] = spec.kappa;
      m["boundary"] = spec.boundary;
    }
    if (cfg.budget) {
      const auto r = intrvfl::max_hidden_under_budget(spec, profile, *cfg.budget);
      m["budget"] = r.feasible ? json{{"budget", *cfg.budget}, {"max_n_hidden", r.n_hidden}, {"cost_at_max", r.cost}}
                               : json{{"budget", *cfg.budget}, {"max_n_hidden", "infeasible"}};
    }
    totals[family] = intrvfl::count_ops(spec, profile).total;
    out["models"][name] = std::move(m);
  }
  if (totals.count(intrvfl::ModelFamily::rvfl) != 0 && totals.count(intrvfl::ModelFamily::intrvfl) != 0) {
    out["ratio_rvfl_over_intrvfl"] = totals[intrvfl::ModelFamily::rvfl] / totals[intrvfl::ModelFamily::intrvfl];
  }
  write_file(out_path(cfg, "cost.json"), out.dump(2) + "\n");
  emit(out);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Density-encoded integer RVFL classifiers and the conventional RVFL baseline"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config", "", "Config file (INI/TOML keys named like the long flags)");

  intrvfl::RunConfig cfg;
  app.add_option("-d,--data", cfg.datasets, "Dataset CSV file(s); a directory for benchmark");
  app.add_option("-f,--family", cfg.families, "Model family: rvfl, intrvfl (comma separated)")->delimiter(',');
  app.add_option("-N,--hidden", cfg.n_hidden, "Hidden neurons")->capture_default_str();
  app.add_option("--lambda", cfg.lambda, "Ridge regularization")->capture_default_str();
  app.add_option("--kappa", cfg.kappa, "Clipping threshold (intrvfl)")->capture_default_str();
  app.add_option("--readout", cfg.readout, "real | quantized:B | ga:B | ga-from-quantized:B")->capture_default_str();
  app.add_flag("--force-ga", cfg.force_ga, "Keep GA refinement above 13 quantization levels");
  app.add_option("--grid-n", cfg.grid_n, "Explicit N grid")->delimiter(',');
  app.add_option("--grid-n-max", cfg.grid_n_max, "N grid 50..max step 50")->capture_default_str();
  app.add_option("--grid-lambda-log2", cfg.grid_lambda_log2, "Lambda grid as log2 exponents")->delimiter(',');
  app.add_option("--grid-kappa", cfg.grid_kappa, "Kappa grid")->delimiter(',');
  app.add_option("--sweep", cfg.readout_sweep, "Readout modes evaluated at the chosen intrvfl point")->delimiter(',');
  app.add_option("--folds", cfg.folds, "Cross-validation folds")->capture_default_str();
  app.add_option("--seeds", cfg.seeds, "Independent initializations per configuration")->capture_default_str();
  app.add_option("--seed", cfg.base_seed, "Base seed")->capture_default_str();
  app.add_option("-j,--jobs", cfg.jobs, "Worker threads")->envname("INTRVFL_JOBS")->capture_default_str();
  app.add_option("--ga-population", cfg.ga.population)->capture_default_str();
  app.add_option("--ga-generations", cfg.ga.generations)->capture_default_str();
  app.add_option("--ga-mutation-rate", cfg.ga.mutation_rate)->capture_default_str();
  app.add_option("--ga-elite-fraction", cfg.ga.elite_fraction)->capture_default_str();
  app.add_option("--ga-tournament", cfg.ga.tournament_size)->capture_default_str();
  app.add_option("--label-column", cfg.label_column, "Label column index (negative from end) or header name")->capture_default_str();
  app.add_option("--delimiter", cfg.delimiter, "CSV delimiter")->capture_default_str();
  app.add_option("--cost-profile", cfg.cost_profile, "JSON file of per-operation energies");
  app.add_option("--budget", cfg.budget, "Per-inference budget for the hidden-size search");
  app.add_option("-o,--output-dir", cfg.output_dir, "Output directory")->envname("INTRVFL_OUTPUT_DIR")->capture_default_str();
  app.add_option("-m,--model", cfg.model_path, "Model file to write (train) or read (eval, cost)");

  auto* train = app.add_subcommand("train", "Train one model on a whole dataset and save it");
  auto* eval = app.add_subcommand("eval", "Cross-validate fixed hyperparameters, or score a saved model");
  auto* grid = app.add_subcommand("grid", "Grid search over N, lambda and kappa on one dataset");
  auto* bench = app.add_subcommand("benchmark", "Grid search every dataset of a directory for each family");
  auto* compare = app.add_subcommand("compare", "Compare two benchmark reports");
  std::vector<std::string> report_files;
  compare->add_option("reports", report_files, "Two report JSON files")->expected(2);
  auto* cost = app.add_subcommand("cost", "Operation counts and abstract energy per inference");
  std::size_t n_features = 16;
  std::size_t n_classes = 4;
  int boundary = 15;
  cost->add_option("-K,--features", n_features)->capture_default_str();
  cost->add_option("-L,--classes", n_classes)->capture_default_str();
  cost->add_option("-B,--boundary", boundary, "Readout boundary; 0 for a real readout")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kConfigError;
  }

  try {
    if (std::find(cfg.families.begin(), cfg.families.end(), std::string("both")) != cfg.families.end()) {
      cfg.families = {"rvfl", "intrvfl"};
    }
    if (*bench && app.count("--family") == 0) cfg.families = {"rvfl", "intrvfl"};
    if (*cost && app.count("--family") == 0) cfg.families = {"intrvfl", "rvfl"};
    cfg.validate();
    if (*train) return cmd_train(cfg);
    if (*eval) return cmd_eval(cfg);
    if (*grid) return cmd_grid(cfg);
    if (*bench) return cmd_benchmark(cfg);
    if (*compare) return cmd_compare(cfg, report_files);
    if (*cost) return cmd_cost(cfg, n_features, n_classes, boundary);
  } catch (const intrvfl::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const intrvfl::Error& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kDataError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFailure;
  }
  return kFailure;
}
