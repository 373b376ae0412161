#pragma once

#include "intrvfl/cost.hpp"
#include "intrvfl/data.hpp"
#include "intrvfl/model.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace intrvfl {

struct HyperGrid {
  std::vector<std::size_t> n_values;
  std::vector<double> lambda_values;
  std::vector<int> kappa_values;  // ignored for the baseline

  // N in 50..n_max step 50, lambda = 2^k for k in -10..5, kappa in {1, 3, 5, 7}.
  static HyperGrid standard(std::size_t n_max = 1500);
  // Same with N truncated at 500.
  static HyperGrid desk() { return standard(500); }

  void validate() const;
};

struct EvalOptions {
  int n_folds = 4;
  int n_seeds = 5;
  std::uint64_t base_seed = 1;
  std::size_t jobs = 1;
  GaConfig ga;

  void validate() const;
};

// Run seeds base_seed + {0, ..., n_seeds - 1}.
std::vector<std::uint64_t> run_seeds(const EvalOptions& options);
std::uint64_t fold_seed(std::uint64_t base_seed);
std::uint64_t projection_seed(std::uint64_t run_seed);
std::uint64_t ga_seed(std::uint64_t run_seed, int fold);

struct CvResult {
  double mean_accuracy = 0.0;
  std::vector<std::uint64_t> seeds;
  std::vector<std::vector<double>> accuracies;  // [seed][fold]
};

// Model trained on every row outside `fold`; test rows are never read.
Model train_fold_model(const ModelSpec& spec, const Dataset& ds, const FoldPlan& plan, int fold,
                       std::uint64_t run_seed, const GaConfig& ga, std::size_t jobs = 1);

CvResult cross_validate(const ModelSpec& spec, const Dataset& ds, const FoldPlan& plan, const EvalOptions& options);

// Several readout modes on one (family, N, lambda, kappa) point. Each fold and
// seed shares one hidden layer and ridge solve across the modes.
std::vector<CvResult> cross_validate_readouts(const ModelSpec& spec, std::span<const ReadoutMode> modes,
                                              const Dataset& ds, const FoldPlan& plan, const EvalOptions& options);

struct GridPoint {
  std::size_t n_hidden = 0;
  double lambda = 0.0;
  int kappa = 0;  // 0 for the baseline
  double mean_accuracy = 0.0;
};

struct GridResult {
  ModelSpec best;
  double best_accuracy = 0.0;
  std::vector<GridPoint> points;
};

// Highest mean CV accuracy; ties go to smaller N, then larger lambda, then
// smaller kappa. Real readout throughout.
GridResult grid_search(ModelFamily family, const Dataset& ds, const HyperGrid& grid, const FoldPlan& plan,
                       const EvalOptions& options);

// Applies the selection rule above to a finished table.
std::size_t select_grid_point(std::span<const GridPoint> points);

struct DatasetResult {
  std::string dataset;
  std::size_t n_samples = 0;
  std::size_t n_features = 0;
  int n_classes = 0;
  ModelSpec chosen;
  double mean_accuracy = 0.0;
  CvResult detail;
  std::map<std::string, double> readout_sweep;  // mode -> mean accuracy at `chosen`
  std::optional<InferenceCost> cost;
};

struct EvalReport {
  ModelFamily family = ModelFamily::intrvfl;
  std::uint64_t base_seed = 0;
  std::vector<DatasetResult> datasets;

  [[nodiscard]] double mean_accuracy() const;
};

struct ComparisonRow {
  std::string dataset;
  double accuracy_a = 0.0;
  double accuracy_b = 0.0;
};

struct Comparison {
  std::vector<ComparisonRow> rows;
  double mean_a = 0.0;
  double mean_b = 0.0;
  std::optional<double> pearson;  // undefined for fewer than two datasets or zero variance
};

// Throws ValidationError unless both reports cover the same datasets.
Comparison compare_models(const EvalReport& a, const EvalReport& b);

std::optional<double> pearson(std::span<const double> a, std::span<const double> b);

nlohmann::json report_to_json(const EvalReport& report);
EvalReport report_from_json(const nlohmann::json& j);
nlohmann::json comparison_to_json(const Comparison& cmp, std::string_view name_a, std::string_view name_b);

// One row per dataset per model.
std::string reports_to_csv(std::span<const EvalReport> reports);
std::string comparison_to_csv(const Comparison& cmp, std::string_view name_a, std::string_view name_b);

struct BenchmarkOptions {
  std::vector<ModelFamily> families{ModelFamily::rvfl, ModelFamily::intrvfl};
  HyperGrid grid = HyperGrid::desk();
  EvalOptions eval;
  std::vector<ReadoutMode> readout_sweep;  // evaluated for intrvfl at its chosen point
  CostProfile profile = CostProfile::default_profile();
  CsvOptions csv;
  std::function<void(const std::string&)> log;
};

struct BenchmarkResult {
  std::vector<EvalReport> reports;  // one per family, same order as options.families
  std::optional<Comparison> comparison;  // first two families, when both ran
  std::vector<std::string> failures;     // "dataset: reason"
};

// CSV files of a directory, sorted by name.
std::vector<std::filesystem::path> list_datasets(const std::filesystem::path& dir);

BenchmarkResult run_benchmark(std::span<const std::filesystem::path> files, const BenchmarkOptions& options);

}  // namespace intrvfl
