#pragma once

// Integer readouts: uniform symmetric quantization of a ridge solution and a
// genetic search over integer matrices scored with a GLVQ-style margin cost.

#include "intrvfl/intrvfl.hpp"
#include "intrvfl/readout_types.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace intrvfl {

// Boundaries above this do not fit the int8 weight storage.
inline constexpr int kMaxBoundary = 127;

// s = max|w| / B, q = clamp(round(w / s), -B, B). An all-zero readout gives
// zeros with s = 1.
IntReadout quantize_readout(const RealReadout& real, int boundary);

inline constexpr double kGlvqEpsilon = 1e-9;

// Relative margin of one sample, mu = (runner - true) / (|true| + |runner| + eps),
// where runner is the best competing class score.
double glvq_margin(std::span<const double> scores, int label);

// Sum over samples of logistic(mu). `scores` is row-major M x L. Lower is better.
double glvq_cost(std::span<const double> scores, std::span<const int> labels, std::size_t n_classes);
double glvq_cost(std::span<const std::int32_t> scores, std::span<const int> labels, std::size_t n_classes);

struct GaConfig {
  int population = 50;
  int generations = 100;
  double mutation_rate = 0.05;  // per-gene probability of a +-1 step
  double elite_fraction = 0.1;
  int tournament_size = 3;
  std::uint64_t seed = 0;

  // Throws ConfigError naming the offending field.
  void validate() const;
};

// Integer hidden states of a labeled training set, the GA fitness data.
struct IntHiddenSet {
  std::size_t n_hidden = 0;
  int kappa = 1;
  int n_classes = 0;
  std::vector<std::int8_t> values;  // row-major M x N
  std::vector<int> labels;

  [[nodiscard]] std::size_t n_samples() const noexcept { return labels.size(); }
  [[nodiscard]] std::span<const std::int8_t> row(std::size_t m) const noexcept {
    return {values.data() + m * n_hidden, n_hidden};
  }
};

// Integer scores of every sample under `readout` (row-major M x L).
std::vector<std::int32_t> score_all(const IntHiddenSet& data, const IntReadout& readout);
double readout_cost(const IntHiddenSet& data, const IntReadout& readout);
double readout_accuracy(const IntHiddenSet& data, const IntReadout& readout);

struct GaResult {
  IntReadout readout;
  double initial_cost = 0.0;                // cost of init, or of the best random individual
  std::vector<double> best_cost_history;    // best-so-far after each generation
};

// Elitist GA with tournament selection, uniform crossover and clamped +-1
// mutations. With `init` the first individual is `init` and the rest are its
// mutants; without it every individual is uniform random in [-B, B].
// Fitness is evaluated on `train` only; `jobs` parallelizes evaluation
// without affecting the result.
GaResult ga_refine(const std::optional<IntReadout>& init, const IntHiddenSet& train, int boundary,
                   const GaConfig& cfg, std::size_t jobs = 1);

}  // namespace intrvfl
