#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace intrvfl {

using Level = std::int32_t;

// Closest grid level round(x * n_dim), ties away from zero. x must already be
// in [0, 1]; anything else is a ValidationError.
Level quantize(double x, std::size_t n_dim);

// Bipolar thermometer code: the first `level` positions are -1, the rest +1.
// Only the level is stored; positions are computed on demand.
class DensityCode {
 public:
  DensityCode(Level level, std::size_t n_dim);

  [[nodiscard]] Level level() const noexcept { return level_; }
  [[nodiscard]] std::size_t size() const noexcept { return n_dim_; }
  [[nodiscard]] std::int8_t operator[](std::size_t i) const noexcept {
    return static_cast<std::size_t>(level_) > i ? std::int8_t{-1} : std::int8_t{1};
  }
  [[nodiscard]] std::vector<std::int8_t> materialize() const;

  friend bool operator==(const DensityCode&, const DensityCode&) = default;

 private:
  std::size_t n_dim_;
  Level level_;
};

DensityCode encode(Level level, std::size_t n_dim);

// One level per feature; the N x K code matrix stays implicit.
std::vector<Level> encode_features(std::span<const double> x, std::size_t n_dim);

}  // namespace intrvfl
