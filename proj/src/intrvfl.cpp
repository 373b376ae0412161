#include "intrvfl/intrvfl.hpp"

#include "intrvfl/error.hpp"
#include "intrvfl/kernels.hpp"

#include <limits>
#include <random>
#include <string>

namespace intrvfl {
namespace {

void check_levels(std::span<const Level> levels, const BipolarProjection& proj) {
  if (levels.size() != proj.n_features()) {
    throw ValidationError("expected " + std::to_string(proj.n_features()) + " levels, got " +
                          std::to_string(levels.size()));
  }
  for (Level v : levels) {
    if (v < 0 || static_cast<std::size_t>(v) > proj.n_hidden()) {
      throw ValidationError("level " + std::to_string(v) + " not in [0, " + std::to_string(proj.n_hidden()) + "]");
    }
  }
}

void check_kappa(int kappa) {
  if (kappa < 1 || kappa > kMaxKappa) {
    throw ConfigError("kappa", "must be in [1, " + std::to_string(kMaxKappa) + "], got " + std::to_string(kappa));
  }
}

}  // namespace

BipolarProjection BipolarProjection::generate(std::size_t n_hidden, std::size_t n_features, std::uint64_t seed) {
  if (n_hidden < 1 || n_features < 1) throw ConfigError("n_hidden", "projection needs N >= 1 and K >= 1");
  BipolarProjection p;
  p.n_hidden_ = n_hidden;
  p.n_features_ = n_features;
  p.seed_ = seed;
  p.weights_.resize(n_hidden * n_features);
  std::mt19937_64 rng(seed);
  std::uint64_t bits = 0;
  int left = 0;
  for (auto& w : p.weights_) {
    if (left == 0) {
      bits = rng();
      left = 64;
    }
    w = (bits & 1U) != 0 ? std::int8_t{1} : std::int8_t{-1};
    bits >>= 1U;
    --left;
  }
  return p;
}

BipolarProjection::BipolarProjection(std::size_t n_hidden, std::size_t n_features,
                                     std::vector<std::int8_t> feature_major)
    : n_hidden_(n_hidden), n_features_(n_features), weights_(std::move(feature_major)) {
  if (weights_.size() != n_hidden * n_features) throw ValidationError("projection entry count mismatch");
  for (auto w : weights_) {
    if (w != 1 && w != -1) throw ValidationError("bipolar projection entries must be -1 or +1");
  }
}

int bits_for_symmetric_range(std::int64_t bound) {
  const std::uint64_t distinct = 2 * static_cast<std::uint64_t>(bound) + 1;
  int bits = 0;
  while ((std::uint64_t{1} << bits) < distinct) ++bits;
  return bits;
}

std::vector<std::int32_t> bundle_explicit(std::span<const Level> levels, const BipolarProjection& proj) {
  check_levels(levels, proj);
  const std::size_t n_hidden = proj.n_hidden();
  const std::size_t n_features = proj.n_features();
  // F: N x K, column i is the density code of feature i
  std::vector<std::int8_t> codes(n_hidden * n_features);
  for (std::size_t i = 0; i < n_features; ++i) {
    const auto column = encode(levels[i], n_hidden).materialize();
    for (std::size_t n = 0; n < n_hidden; ++n) codes[n * n_features + i] = column[n];
  }
  std::vector<std::int32_t> sums(n_hidden, 0);
  for (std::size_t n = 0; n < n_hidden; ++n) {
    for (std::size_t i = 0; i < n_features; ++i) {
      sums[n] += std::int32_t{codes[n * n_features + i]} * std::int32_t{proj.at(n, i)};
    }
  }
  return sums;
}

HiddenState hidden_explicit(std::span<const Level> levels, const BipolarProjection& proj, int kappa) {
  check_kappa(kappa);
  const auto sums = bundle_explicit(levels, proj);
  HiddenState h{kappa, std::vector<std::int8_t>(sums.size())};
  for (std::size_t n = 0; n < sums.size(); ++n) h.values[n] = static_cast<std::int8_t>(clip(sums[n], kappa));
  return h;
}

std::vector<std::int16_t> bundle_shortcut(std::span<const Level> levels, const BipolarProjection& proj) {
  check_levels(levels, proj);
  if (proj.n_features() > static_cast<std::size_t>(std::numeric_limits<std::int16_t>::max())) {
    throw ConfigError("n_features", "more than 32767 features overflows the int16 bundle");
  }
  std::vector<std::int16_t> acc(proj.n_hidden());
  kernels::bind_bundle(proj.data(), proj.n_hidden(), levels, acc);
  return acc;
}

HiddenState hidden_shortcut(std::span<const Level> levels, const BipolarProjection& proj, int kappa) {
  check_kappa(kappa);
  const auto acc = bundle_shortcut(levels, proj);
  HiddenState h{kappa, std::vector<std::int8_t>(acc.size())};
  kernels::clip(acc, kappa, h.values);
  return h;
}

AccumulatorPlan plan_accumulator(std::size_t n_hidden, int kappa, int max_abs_weight) {
  AccumulatorPlan plan;
  plan.max_abs_score = static_cast<std::int64_t>(n_hidden) * kappa * max_abs_weight;
  plan.bits_required = bits_for_symmetric_range(plan.max_abs_score);
  if (plan.bits_required > 32) {
    throw ConfigError("readout", "score bound " + std::to_string(plan.max_abs_score) +
                                     " needs " + std::to_string(plan.bits_required) +
                                     " bits; the integer kernels accumulate in 32");
  }
  // The integer kernels only implement 32-bit accumulation.
  plan.accumulator_bits = 32;
  return plan;
}

HiddenState IntHiddenLayer::operator()(std::span<const double> x) const {
  const auto levels = encode_features(x, projection.n_hidden());
  return hidden_shortcut(levels, projection, kappa);
}

Prediction<std::int32_t> forward_int(const HiddenState& h, const IntReadout& readout) {
  if (h.size() != readout.n_hidden) throw ValidationError("readout width does not match the hidden layer");
  plan_accumulator(readout.n_hidden, h.kappa, readout.boundary);
  Prediction<std::int32_t> out;
  out.scores.resize(readout.n_out);
  kernels::int_scores(readout.weights, readout.n_out, h.values, out.scores);
  out.label = argmax<std::int32_t>(out.scores);
  return out;
}

Prediction<std::int32_t> forward_int(std::span<const Level> levels, const BipolarProjection& proj, int kappa,
                                     const IntReadout& readout) {
  return forward_int(hidden_shortcut(levels, proj, kappa), readout);
}

}  // namespace intrvfl
