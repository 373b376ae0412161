#pragma once

#include "intrvfl/cost.hpp"
#include "intrvfl/data.hpp"
#include "intrvfl/evaluation.hpp"
#include "intrvfl/model.hpp"

#include <optional>
#include <string>
#include <vector>

namespace intrvfl {

// Settings shared by every CLI command. The CLI fills it from defaults,
// environment, config file and flags; validation lives here.
struct RunConfig {
  std::vector<std::string> datasets;  // files, or a directory for benchmark
  std::vector<std::string> families{"intrvfl"};
  std::size_t n_hidden = 200;
  double lambda = 1.0 / 32.0;
  int kappa = 3;
  std::string readout = "real";
  bool force_ga = false;  // keep GA for boundaries with more than 13 levels

  std::vector<std::size_t> grid_n;       // empty: 50..grid_n_max step 50
  std::size_t grid_n_max = 500;
  std::vector<int> grid_lambda_log2;     // empty: -10..5
  std::vector<int> grid_kappa;           // empty: 1, 3, 5, 7
  std::vector<std::string> readout_sweep;

  int folds = 4;
  int seeds = 5;
  std::uint64_t base_seed = 1;
  std::size_t jobs = 1;
  GaConfig ga;

  std::string label_column = "-1";  // index (negative from the end) or header name
  std::string delimiter = ",";

  std::string cost_profile;  // JSON file; empty selects the default profile
  std::optional<double> budget;

  std::string output_dir = ".";
  std::string model_path;

  // Throws ConfigError naming the first invalid field.
  void validate() const;

  [[nodiscard]] ModelFamily family() const;  // first entry of `families`
  [[nodiscard]] std::vector<ModelFamily> family_list() const;
  // Readout with the GA cut-off applied: GA refinement of the quantized
  // solution is dropped above 13 levels unless force_ga is set.
  [[nodiscard]] ReadoutMode readout_mode() const;
  [[nodiscard]] ModelSpec model_spec() const;
  [[nodiscard]] HyperGrid grid() const;
  [[nodiscard]] EvalOptions eval_options() const;
  [[nodiscard]] CsvOptions csv_options() const;
  [[nodiscard]] std::vector<ReadoutMode> sweep_modes() const;
  [[nodiscard]] CostProfile profile() const;
};

// Levels above which GA refinement is off by default.
inline constexpr int kGaLevelCutoff = 13;

}  // namespace intrvfl
