#pragma once

// Hidden layer of the density-encoded integer network: bipolar random
// projection, binding of each feature's code with its projection row,
// bundling over features, then clipping to [-kappa, kappa].

#include "intrvfl/density.hpp"
#include "intrvfl/readout_types.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace intrvfl {

// Fixed N x K matrix with entries drawn equiprobably from {-1, +1}. Stored
// feature-major: each feature owns one contiguous N-dimensional bipolar vector.
class BipolarProjection {
 public:
  BipolarProjection() = default;
  static BipolarProjection generate(std::size_t n_hidden, std::size_t n_features, std::uint64_t seed);

  // Builds from explicit feature-major entries (tests, worked examples).
  BipolarProjection(std::size_t n_hidden, std::size_t n_features, std::vector<std::int8_t> feature_major);

  [[nodiscard]] std::size_t n_hidden() const noexcept { return n_hidden_; }
  [[nodiscard]] std::size_t n_features() const noexcept { return n_features_; }
  [[nodiscard]] std::uint64_t seed() const noexcept { return seed_; }

  // Entry W_in[n, i].
  [[nodiscard]] std::int8_t at(std::size_t n, std::size_t i) const noexcept {
    return weights_[i * n_hidden_ + n];
  }
  [[nodiscard]] std::span<const std::int8_t> feature_vector(std::size_t i) const noexcept {
    return {weights_.data() + i * n_hidden_, n_hidden_};
  }
  [[nodiscard]] std::span<const std::int8_t> data() const noexcept { return weights_; }

 private:
  std::size_t n_hidden_ = 0;
  std::size_t n_features_ = 0;
  std::uint64_t seed_ = 0;
  std::vector<std::int8_t> weights_;
};

constexpr int clip(int x, int kappa) noexcept {
  if (x <= -kappa) return -kappa;
  if (x >= kappa) return kappa;
  return x;
}

// Bits needed to store every integer in [-bound, bound].
int bits_for_symmetric_range(std::int64_t bound);

struct HiddenState {
  int kappa = 1;
  std::vector<std::int8_t> values;

  [[nodiscard]] std::size_t size() const noexcept { return values.size(); }
  [[nodiscard]] int bits_per_neuron() const { return bits_for_symmetric_range(kappa); }
};

// Largest kappa whose hidden values fit the int8 storage of HiddenState.
inline constexpr int kMaxKappa = 127;

// Reference path: realizes every density code, multiplies with W_in entry by
// entry and sums the K bound terms per hidden neuron. Returns pre-clip sums.
std::vector<std::int32_t> bundle_explicit(std::span<const Level> levels, const BipolarProjection& proj);
HiddenState hidden_explicit(std::span<const Level> levels, const BipolarProjection& proj, int kappa);

// Production path: each level says how many leading entries of the feature's
// projection row change sign; no code vectors are formed.
std::vector<std::int16_t> bundle_shortcut(std::span<const Level> levels, const BipolarProjection& proj);
HiddenState hidden_shortcut(std::span<const Level> levels, const BipolarProjection& proj, int kappa);

// Accumulator sizing for integer readout scores, fixed when the model is built.
struct AccumulatorPlan {
  std::int64_t max_abs_score = 0;  // N * kappa * max|W_out|
  int bits_required = 0;
  int accumulator_bits = 0;  // 16 or 32
};

// Throws ConfigError if the bound needs more than 32 bits.
AccumulatorPlan plan_accumulator(std::size_t n_hidden, int kappa, int max_abs_weight);

// Hidden layer bundle used by models and trainers.
struct IntHiddenLayer {
  BipolarProjection projection;
  int kappa = 1;

  [[nodiscard]] std::size_t n_hidden() const noexcept { return projection.n_hidden(); }
  // x must be normalized to [0, 1].
  [[nodiscard]] HiddenState operator()(std::span<const double> x) const;
};

// Integer forward pass: exact int32 scores W_out * h and their argmax.
Prediction<std::int32_t> forward_int(std::span<const Level> levels, const BipolarProjection& proj, int kappa,
                                     const IntReadout& readout);
Prediction<std::int32_t> forward_int(const HiddenState& h, const IntReadout& readout);

}  // namespace intrvfl
