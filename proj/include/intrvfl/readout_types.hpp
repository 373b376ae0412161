#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace intrvfl {

// Trained real-valued readout, L x N (rows are output classes).
struct RealReadout {
  Eigen::MatrixXd weights;
  double lambda = 0.0;
};

// Integer readout with entries in [-boundary, boundary]. `scale` maps the
// integers back to the real solution they approximate (s * q ~ w).
struct IntReadout {
  std::size_t n_out = 0;
  std::size_t n_hidden = 0;
  int boundary = 1;
  double scale = 1.0;
  std::vector<std::int8_t> weights;  // row-major L x N

  [[nodiscard]] int levels() const noexcept { return 2 * boundary + 1; }
  [[nodiscard]] int bits_per_weight() const noexcept {
    return static_cast<int>(std::ceil(std::log2(static_cast<double>(levels()))));
  }
  [[nodiscard]] std::int8_t at(std::size_t l, std::size_t n) const { return weights[l * n_hidden + n]; }
  [[nodiscard]] int max_abs() const noexcept;
  [[nodiscard]] Eigen::MatrixXd dequantized() const;
};

template <typename T>
struct Prediction {
  std::vector<T> scores;
  int label = 0;
};

// Index of the largest score; ties go to the lowest index.
template <typename T>
int argmax(std::span<const T> scores) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < scores.size(); ++i) {
    if (scores[i] > scores[best]) best = i;
  }
  return static_cast<int>(best);
}

inline int IntReadout::max_abs() const noexcept {
  int m = 0;
  for (auto w : weights) m = std::max(m, std::abs(int{w}));
  return m;
}

inline Eigen::MatrixXd IntReadout::dequantized() const {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(n_out), static_cast<Eigen::Index>(n_hidden));
  for (std::size_t l = 0; l < n_out; ++l) {
    for (std::size_t n = 0; n < n_hidden; ++n) {
      out(static_cast<Eigen::Index>(l), static_cast<Eigen::Index>(n)) = scale * at(l, n);
    }
  }
  return out;
}

}  // namespace intrvfl
