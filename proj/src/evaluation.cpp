#include "intrvfl/evaluation.hpp"

#include "intrvfl/error.hpp"
#include "intrvfl/kernels.hpp"
#include "intrvfl/parallel.hpp"
#include "intrvfl/seed.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <set>
#include <sstream>

namespace intrvfl {
namespace {

constexpr double kTieTolerance = 1e-12;

// Training state of one (fold, run seed) that several readouts can share.
struct FoldFit {
  Normalizer normalizer;
  HiddenLayer layer;
  RealReadout ridge;
  std::optional<IntHiddenSet> int_hidden;
  Eigen::MatrixXd test_features;  // raw
  std::vector<int> test_labels;
};

Eigen::MatrixXd rows_of(const Eigen::MatrixXd& m, std::span<const std::size_t> rows) {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(rows.size()), m.cols());
  for (std::size_t r = 0; r < rows.size(); ++r) out.row(static_cast<Eigen::Index>(r)) = m.row(static_cast<Eigen::Index>(rows[r]));
  return out;
}

std::vector<int> labels_of(const std::vector<int>& labels, std::span<const std::size_t> rows) {
  std::vector<int> out;
  out.reserve(rows.size());
  for (auto r : rows) out.push_back(labels[r]);
  return out;
}

Eigen::MatrixXd to_real(const IntHiddenSet& set) {
  Eigen::MatrixXd h(static_cast<Eigen::Index>(set.n_samples()), static_cast<Eigen::Index>(set.n_hidden));
  for (Eigen::Index m = 0; m < h.rows(); ++m) {
    for (Eigen::Index n = 0; n < h.cols(); ++n) {
      h(m, n) = set.values[static_cast<std::size_t>(m) * set.n_hidden + static_cast<std::size_t>(n)];
    }
  }
  return h;
}

FoldFit fit_fold(const ModelSpec& spec, const Dataset& ds, const FoldPlan& plan, int fold, std::uint64_t run_seed) {
  const auto train_rows = plan.train_rows(fold);
  const auto test_rows = plan.test_rows(fold);
  if (train_rows.empty() || test_rows.empty()) throw ValidationError("fold " + std::to_string(fold) + " is empty");

  const Eigen::MatrixXd train_x = rows_of(ds.features, train_rows);
  const std::vector<int> train_y = labels_of(ds.labels, train_rows);

  FoldFit fit;
  fit.normalizer = Normalizer::fit(train_x);
  fit.layer = make_hidden_layer(spec, ds.n_features(), projection_seed(run_seed));
  const Eigen::MatrixXd normalized = fit.normalizer.apply(train_x);
  const Eigen::MatrixXd targets = one_hot(train_y, ds.n_classes);
  if (const auto* int_layer = std::get_if<IntHiddenLayer>(&fit.layer)) {
    fit.int_hidden = collect_int_hidden(*int_layer, normalized, train_y, ds.n_classes);
    fit.ridge = RidgeSystem(to_real(*fit.int_hidden), targets).solve(spec.lambda);
  } else {
    fit.ridge = solve_ridge(collect_hidden(fit.layer, normalized), targets, spec.lambda);
  }
  fit.test_features = rows_of(ds.features, test_rows);
  fit.test_labels = labels_of(ds.labels, test_rows);
  return fit;
}

Model assemble(const ModelSpec& spec, const Dataset& ds, const FoldFit& fit, Readout readout, std::uint64_t run_seed) {
  Model m;
  m.spec = spec;
  m.n_features = ds.n_features();
  m.n_classes = ds.n_classes;
  m.seed = projection_seed(run_seed);
  m.class_names = ds.class_names;
  m.normalizer = fit.normalizer;
  m.layer = fit.layer;
  m.readout = std::move(readout);
  return m;
}

double test_accuracy(const Model& model, const FoldFit& fit) {
  const auto predicted = model.predict(fit.test_features);
  std::size_t correct = 0;
  for (std::size_t m = 0; m < predicted.size(); ++m) correct += predicted[m] == fit.test_labels[m] ? 1 : 0;
  return static_cast<double>(correct) / static_cast<double>(predicted.size());
}

std::size_t correct_predictions(const Eigen::MatrixXd& hidden_test, const Eigen::MatrixXd& readout,
                                std::span<const int> labels) {
  const auto predicted = argmax_rows(hidden_test * readout.transpose());
  std::size_t correct = 0;
  for (std::size_t m = 0; m < predicted.size(); ++m) correct += predicted[m] == labels[m] ? 1 : 0;
  return correct;
}

// Pre-clip integer bundles for each row of normalized features.
std::vector<std::int16_t> bundles(const BipolarProjection& proj, const Eigen::MatrixXd& normalized) {
  const std::size_t n_hidden = proj.n_hidden();
  std::vector<std::int16_t> out(static_cast<std::size_t>(normalized.rows()) * n_hidden);
  std::vector<double> row(static_cast<std::size_t>(normalized.cols()));
  for (Eigen::Index m = 0; m < normalized.rows(); ++m) {
    for (Eigen::Index i = 0; i < normalized.cols(); ++i) row[static_cast<std::size_t>(i)] = normalized(m, i);
    const auto levels = encode_features(row, n_hidden);
    kernels::bind_bundle(proj.data(), n_hidden, levels,
                         std::span<std::int16_t>(out.data() + static_cast<std::size_t>(m) * n_hidden, n_hidden));
  }
  return out;
}

Eigen::MatrixXd clipped(const std::vector<std::int16_t>& acc, std::size_t n_hidden, int kappa) {
  const std::size_t rows = acc.size() / n_hidden;
  std::vector<std::int8_t> h(acc.size());
  kernels::clip(acc, kappa, h);
  Eigen::MatrixXd out(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(n_hidden));
  for (std::size_t m = 0; m < rows; ++m) {
    for (std::size_t n = 0; n < n_hidden; ++n) out(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(n)) = h[m * n_hidden + n];
  }
  return out;
}

std::string fmt_double(double v) {
  std::ostringstream os;
  os << std::setprecision(10) << v;
  return os.str();
}

nlohmann::json spec_json(const ModelSpec& s) {
  nlohmann::json j{{"n_hidden", s.n_hidden}, {"lambda", s.lambda}, {"readout", s.readout.str()}};
  if (s.family == ModelFamily::intrvfl) j["kappa"] = s.kappa;
  return j;
}

}  // namespace

HyperGrid HyperGrid::standard(std::size_t n_max) {
  HyperGrid g;
  for (std::size_t n = 50; n <= n_max; n += 50) g.n_values.push_back(n);
  for (int k = -10; k <= 5; ++k) g.lambda_values.push_back(std::ldexp(1.0, k));
  g.kappa_values = {1, 3, 5, 7};
  return g;
}

void HyperGrid::validate() const {
  if (n_values.empty()) throw ConfigError("grid.n_values", "must not be empty");
  if (lambda_values.empty()) throw ConfigError("grid.lambda_values", "must not be empty");
  if (kappa_values.empty()) throw ConfigError("grid.kappa_values", "must not be empty");
  for (auto n : n_values) {
    if (n < 1) throw ConfigError("grid.n_values", "entries must be >= 1");
  }
  for (auto l : lambda_values) {
    if (!(l > 0.0) || !std::isfinite(l)) throw ConfigError("grid.lambda_values", "entries must be finite and > 0");
  }
  for (auto k : kappa_values) {
    if (k < 1 || k > kMaxKappa) throw ConfigError("grid.kappa_values", "entries must be in [1, 127]");
  }
}

void EvalOptions::validate() const {
  if (n_folds < 2) throw ConfigError("folds", "must be >= 2");
  if (n_seeds < 1) throw ConfigError("seeds", "must be >= 1");
}

std::vector<std::uint64_t> run_seeds(const EvalOptions& options) {
  std::vector<std::uint64_t> seeds;
  for (int j = 0; j < options.n_seeds; ++j) seeds.push_back(options.base_seed + static_cast<std::uint64_t>(j));
  return seeds;
}

std::uint64_t fold_seed(std::uint64_t base_seed) { return derive_seed(base_seed, "folds", 0); }
std::uint64_t projection_seed(std::uint64_t run_seed) { return derive_seed(run_seed, "projection", 0); }
std::uint64_t ga_seed(std::uint64_t run_seed, int fold) {
  return derive_seed(run_seed, "ga", static_cast<std::uint64_t>(fold));
}

Model train_fold_model(const ModelSpec& spec, const Dataset& ds, const FoldPlan& plan, int fold,
                       std::uint64_t run_seed, const GaConfig& ga, std::size_t jobs) {
  spec.validate();
  const FoldFit fit = fit_fold(spec, ds, plan, fold, run_seed);
  GaConfig cfg = ga;
  cfg.seed = ga_seed(run_seed, fold);
  Readout readout = make_readout(spec, fit.ridge, fit.int_hidden ? &*fit.int_hidden : nullptr, cfg, jobs);
  return assemble(spec, ds, fit, std::move(readout), run_seed);
}

std::vector<CvResult> cross_validate_readouts(const ModelSpec& spec, std::span<const ReadoutMode> modes,
                                              const Dataset& ds, const FoldPlan& plan, const EvalOptions& options) {
  options.validate();
  if (plan.assignment.size() != ds.n_samples()) throw ValidationError("fold plan does not match the dataset");
  std::vector<ModelSpec> specs;
  for (const auto& mode : modes) {
    ModelSpec s = spec;
    s.readout = mode;
    s.validate();
    if (mode.uses_ga()) options.ga.validate();
    specs.push_back(s);
  }
  const auto seeds = run_seeds(options);
  const auto n_folds = static_cast<std::size_t>(plan.n_folds);
  const std::size_t n_tasks = seeds.size() * n_folds;
  std::vector<std::vector<double>> task_acc(n_tasks);

  parallel_for(n_tasks, options.jobs, [&](std::size_t t) {
    const std::size_t s = t / n_folds;
    const int fold = static_cast<int>(t % n_folds);
    const FoldFit fit = fit_fold(spec, ds, plan, fold, seeds[s]);
    GaConfig cfg = options.ga;
    cfg.seed = ga_seed(seeds[s], fold);
    for (const auto& mode_spec : specs) {
      Readout readout = make_readout(mode_spec, fit.ridge, fit.int_hidden ? &*fit.int_hidden : nullptr, cfg, 1);
      task_acc[t].push_back(test_accuracy(assemble(mode_spec, ds, fit, std::move(readout), seeds[s]), fit));
    }
  });

  std::vector<CvResult> out(specs.size());
  for (std::size_t k = 0; k < specs.size(); ++k) {
    out[k].seeds = seeds;
    out[k].accuracies.assign(seeds.size(), std::vector<double>(n_folds));
    double sum = 0.0;
    for (std::size_t t = 0; t < n_tasks; ++t) {
      out[k].accuracies[t / n_folds][t % n_folds] = task_acc[t][k];
      sum += task_acc[t][k];
    }
    out[k].mean_accuracy = sum / static_cast<double>(n_tasks);
  }
  return out;
}

CvResult cross_validate(const ModelSpec& spec, const Dataset& ds, const FoldPlan& plan, const EvalOptions& options) {
  const ReadoutMode mode = spec.readout;
  return cross_validate_readouts(spec, std::span<const ReadoutMode>(&mode, 1), ds, plan, options).front();
}

std::size_t select_grid_point(std::span<const GridPoint> points) {
  if (points.empty()) throw ValidationError("empty grid");
  std::size_t best = 0;
  for (std::size_t i = 1; i < points.size(); ++i) {
    const GridPoint& a = points[i];
    const GridPoint& b = points[best];
    if (a.mean_accuracy > b.mean_accuracy + kTieTolerance) {
      best = i;
    } else if (std::abs(a.mean_accuracy - b.mean_accuracy) <= kTieTolerance) {
      if (std::tie(a.n_hidden, b.lambda, a.kappa) < std::tie(b.n_hidden, a.lambda, b.kappa)) best = i;
    }
  }
  return best;
}

GridResult grid_search(ModelFamily family, const Dataset& ds, const HyperGrid& grid, const FoldPlan& plan,
                       const EvalOptions& options) {
  grid.validate();
  options.validate();
  if (plan.assignment.size() != ds.n_samples()) throw ValidationError("fold plan does not match the dataset");
  const bool integer = family == ModelFamily::intrvfl;
  const std::vector<int> kappas = integer ? grid.kappa_values : std::vector<int>{0};
  const auto seeds = run_seeds(options);
  const auto n_folds = static_cast<std::size_t>(plan.n_folds);
  const std::size_t n_points = kappas.size() * grid.lambda_values.size();
  const std::size_t per_n = n_folds * seeds.size();
  const std::size_t n_tasks = grid.n_values.size() * per_n;

  // acc[task][kappa_index * n_lambda + lambda_index]
  std::vector<std::vector<double>> task_acc(n_tasks, std::vector<double>(n_points));

  parallel_for(n_tasks, options.jobs, [&](std::size_t t) {
    const std::size_t n_hidden = grid.n_values[t / per_n];
    // Seed-major within each N, the same order cross_validate sums in.
    const std::size_t j = t % per_n;
    const std::uint64_t run_seed = seeds[j / n_folds];
    const int fold = static_cast<int>(j % n_folds);

    const auto train_rows = plan.train_rows(fold);
    const auto test_rows = plan.test_rows(fold);
    const Eigen::MatrixXd train_x = rows_of(ds.features, train_rows);
    const Normalizer norm = Normalizer::fit(train_x);
    const Eigen::MatrixXd train_n = norm.apply(train_x);
    const Eigen::MatrixXd test_n = norm.apply(rows_of(ds.features, test_rows));
    const Eigen::MatrixXd targets = one_hot(labels_of(ds.labels, train_rows), ds.n_classes);
    const std::vector<int> test_y = labels_of(ds.labels, test_rows);
    const double n_test = static_cast<double>(test_rows.size());

    auto sweep_lambda = [&](const Eigen::MatrixXd& h_train, const Eigen::MatrixXd& h_test, std::size_t offset) {
      const RidgeSystem system(h_train, targets);
      for (std::size_t li = 0; li < grid.lambda_values.size(); ++li) {
        const RealReadout r = system.solve(grid.lambda_values[li]);
        task_acc[t][offset + li] = static_cast<double>(correct_predictions(h_test, r.weights, test_y)) / n_test;
      }
    };

    if (integer) {
      const auto proj = BipolarProjection::generate(n_hidden, ds.n_features(), projection_seed(run_seed));
      const auto acc_train = bundles(proj, train_n);
      const auto acc_test = bundles(proj, test_n);
      for (std::size_t ki = 0; ki < kappas.size(); ++ki) {
        sweep_lambda(clipped(acc_train, n_hidden, kappas[ki]), clipped(acc_test, n_hidden, kappas[ki]),
                     ki * grid.lambda_values.size());
      }
    } else {
      const auto proj = generate_real(n_hidden, ds.n_features(), projection_seed(run_seed));
      sweep_lambda(hidden_sigmoid(train_n, proj), hidden_sigmoid(test_n, proj), 0);
    }
  });

  GridResult result;
  for (std::size_t ni = 0; ni < grid.n_values.size(); ++ni) {
    for (std::size_t ki = 0; ki < kappas.size(); ++ki) {
      for (std::size_t li = 0; li < grid.lambda_values.size(); ++li) {
        double sum = 0.0;
        for (std::size_t j = 0; j < per_n; ++j) sum += task_acc[ni * per_n + j][ki * grid.lambda_values.size() + li];
        result.points.push_back({grid.n_values[ni], grid.lambda_values[li], kappas[ki], sum / static_cast<double>(per_n)});
      }
    }
  }
  const GridPoint& best = result.points[select_grid_point(result.points)];
  result.best.family = family;
  result.best.n_hidden = best.n_hidden;
  result.best.lambda = best.lambda;
  result.best.kappa = integer ? best.kappa : 0;
  result.best_accuracy = best.mean_accuracy;
  return result;
}

double EvalReport::mean_accuracy() const {
  if (datasets.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& d : datasets) sum += d.mean_accuracy;
  return sum / static_cast<double>(datasets.size());
}

std::optional<double> pearson(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size() || a.size() < 2) return std::nullopt;
  const double n = static_cast<double>(a.size());
  double ma = 0.0;
  double mb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ma += a[i];
    mb += b[i];
  }
  ma /= n;
  mb /= n;
  double sab = 0.0;
  double saa = 0.0;
  double sbb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  if (saa == 0.0 || sbb == 0.0) return std::nullopt;
  return sab / std::sqrt(saa * sbb);
}

Comparison compare_models(const EvalReport& a, const EvalReport& b) {
  std::vector<std::string> names_a;
  std::vector<std::string> names_b;
  for (const auto& d : a.datasets) names_a.push_back(d.dataset);
  for (const auto& d : b.datasets) names_b.push_back(d.dataset);
  std::sort(names_a.begin(), names_a.end());
  std::sort(names_b.begin(), names_b.end());
  if (names_a != names_b) throw ValidationError("reports cover different dataset lists");

  Comparison cmp;
  std::vector<double> xa;
  std::vector<double> xb;
  for (const auto& da : a.datasets) {
    const auto it = std::find_if(b.datasets.begin(), b.datasets.end(),
                                 [&](const DatasetResult& d) { return d.dataset == da.dataset; });
    cmp.rows.push_back({da.dataset, da.mean_accuracy, it->mean_accuracy});
    xa.push_back(da.mean_accuracy);
    xb.push_back(it->mean_accuracy);
  }
  cmp.mean_a = a.mean_accuracy();
  cmp.mean_b = b.mean_accuracy();
  cmp.pearson = pearson(xa, xb);
  return cmp;
}

nlohmann::json report_to_json(const EvalReport& report) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& d : report.datasets) {
    nlohmann::json row{{"dataset", d.dataset},
                       {"n_samples", d.n_samples},
                       {"n_features", d.n_features},
                       {"n_classes", d.n_classes},
                       {"chosen", spec_json(d.chosen)},
                       {"mean_accuracy", d.mean_accuracy},
                       {"seeds", d.detail.seeds},
                       {"fold_accuracies", d.detail.accuracies}};
    if (!d.readout_sweep.empty()) row["readout_sweep"] = d.readout_sweep;
    if (d.cost) row["cost"] = cost_to_json(*d.cost);
    rows.push_back(std::move(row));
  }
  return {{"family", to_string(report.family)},
          {"base_seed", report.base_seed},
          {"aggregate", {{"mean_accuracy", report.mean_accuracy()}, {"n_datasets", report.datasets.size()}}},
          {"datasets", std::move(rows)}};
}

EvalReport report_from_json(const nlohmann::json& j) {
  try {
    EvalReport r;
    r.family = parse_family(j.at("family").get<std::string>());
    r.base_seed = j.at("base_seed").get<std::uint64_t>();
    for (const auto& row : j.at("datasets")) {
      DatasetResult d;
      d.dataset = row.at("dataset").get<std::string>();
      d.n_samples = row.at("n_samples").get<std::size_t>();
      d.n_features = row.at("n_features").get<std::size_t>();
      d.n_classes = row.at("n_classes").get<int>();
      const auto& c = row.at("chosen");
      d.chosen.family = r.family;
      d.chosen.n_hidden = c.at("n_hidden").get<std::size_t>();
      d.chosen.lambda = c.at("lambda").get<double>();
      d.chosen.kappa = c.value("kappa", 0);
      d.chosen.readout = ReadoutMode::parse(c.at("readout").get<std::string>());
      d.mean_accuracy = row.at("mean_accuracy").get<double>();
      d.detail.mean_accuracy = d.mean_accuracy;
      d.detail.seeds = row.at("seeds").get<std::vector<std::uint64_t>>();
      d.detail.accuracies = row.at("fold_accuracies").get<std::vector<std::vector<double>>>();
      if (row.contains("readout_sweep")) d.readout_sweep = row.at("readout_sweep").get<std::map<std::string, double>>();
      r.datasets.push_back(std::move(d));
    }
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed report: ") + e.what());
  }
}

nlohmann::json comparison_to_json(const Comparison& cmp, std::string_view name_a, std::string_view name_b) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : cmp.rows) rows.push_back({{"dataset", r.dataset}, {name_a, r.accuracy_a}, {name_b, r.accuracy_b}});
  nlohmann::json j{{"models", {name_a, name_b}},
                   {"mean", {{name_a, cmp.mean_a}, {name_b, cmp.mean_b}}},
                   {"rows", std::move(rows)}};
  j["pearson"] = cmp.pearson ? nlohmann::json(*cmp.pearson) : nlohmann::json("n/a");
  return j;
}

std::string reports_to_csv(std::span<const EvalReport> reports) {
  std::set<std::string> sweep_modes;
  for (const auto& r : reports) {
    for (const auto& d : r.datasets) {
      for (const auto& [mode, _] : d.readout_sweep) sweep_modes.insert(mode);
    }
  }
  std::ostringstream os;
  os << "model,dataset,n_samples,n_features,n_classes,n_hidden,lambda,kappa,readout,mean_accuracy,cost_total";
  for (const auto& m : sweep_modes) os << ",acc[" << m << "]";
  os << '\n';
  for (const auto& r : reports) {
    for (const auto& d : r.datasets) {
      os << to_string(r.family) << ',' << d.dataset << ',' << d.n_samples << ',' << d.n_features << ','
         << d.n_classes << ',' << d.chosen.n_hidden << ',' << fmt_double(d.chosen.lambda) << ','
         << (r.family == ModelFamily::intrvfl ? std::to_string(d.chosen.kappa) : "") << ','
         << d.chosen.readout.str() << ',' << fmt_double(d.mean_accuracy) << ','
         << (d.cost ? fmt_double(d.cost->total) : "");
      for (const auto& m : sweep_modes) {
        const auto it = d.readout_sweep.find(m);
        os << ',' << (it != d.readout_sweep.end() ? fmt_double(it->second) : "");
      }
      os << '\n';
    }
  }
  return os.str();
}

std::string comparison_to_csv(const Comparison& cmp, std::string_view name_a, std::string_view name_b) {
  std::ostringstream os;
  os << "dataset," << name_a << ',' << name_b << '\n';
  for (const auto& r : cmp.rows) os << r.dataset << ',' << fmt_double(r.accuracy_a) << ',' << fmt_double(r.accuracy_b) << '\n';
  return os.str();
}

std::vector<std::filesystem::path> list_datasets(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) throw ValidationError(dir.string() + " is not a directory");
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".csv") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  return files;
}

BenchmarkResult run_benchmark(std::span<const std::filesystem::path> files, const BenchmarkOptions& options) {
  options.grid.validate();
  options.eval.validate();
  options.profile.validate();
  auto log = [&](const std::string& msg) {
    if (options.log) options.log(msg);
  };

  BenchmarkResult result;
  for (auto family : options.families) {
    EvalReport r;
    r.family = family;
    r.base_seed = options.eval.base_seed;
    result.reports.push_back(std::move(r));
  }

  for (const auto& file : files) {
    std::vector<DatasetResult> rows;
    try {
      const Dataset ds = load_csv(file, options.csv);
      const FoldPlan plan = make_folds(ds, options.eval.n_folds, fold_seed(options.eval.base_seed));
      for (auto family : options.families) {
        const GridResult grid = grid_search(family, ds, options.grid, plan, options.eval);
        DatasetResult d;
        d.dataset = ds.name;
        d.n_samples = ds.n_samples();
        d.n_features = ds.n_features();
        d.n_classes = ds.n_classes;
        d.chosen = grid.best;
        // Per-fold detail at the chosen point; same folds, seeds and arithmetic as the grid.
        d.detail = cross_validate(grid.best, ds, plan, options.eval);
        d.mean_accuracy = d.detail.mean_accuracy;
        CostSpec cs{family == ModelFamily::intrvfl, ds.n_features(), grid.best.n_hidden,
                    static_cast<std::size_t>(ds.n_classes), grid.best.kappa, 0};
        d.cost = count_ops(cs, options.profile);
        if (family == ModelFamily::intrvfl && !options.readout_sweep.empty()) {
          const auto sweep = cross_validate_readouts(grid.best, options.readout_sweep, ds, plan, options.eval);
          for (std::size_t k = 0; k < sweep.size(); ++k) d.readout_sweep[options.readout_sweep[k].str()] = sweep[k].mean_accuracy;
        }
        log(ds.name + " " + std::string(to_string(family)) + ": N=" + std::to_string(d.chosen.n_hidden) +
            " lambda=" + fmt_double(d.chosen.lambda) +
            (family == ModelFamily::intrvfl ? " kappa=" + std::to_string(d.chosen.kappa) : std::string()) +
            " acc=" + fmt_double(d.mean_accuracy));
        rows.push_back(std::move(d));
      }
    } catch (const Error& e) {
      result.failures.push_back(file.filename().string() + ": " + e.what());
      log("skipped " + file.filename().string() + ": " + e.what());
      continue;
    }
    for (std::size_t f = 0; f < rows.size(); ++f) result.reports[f].datasets.push_back(std::move(rows[f]));
  }
  if (result.reports.size() >= 2) result.comparison = compare_models(result.reports[0], result.reports[1]);
  return result;
}

}  // namespace intrvfl
