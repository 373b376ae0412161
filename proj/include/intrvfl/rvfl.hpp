#pragma once

// Conventional RVFL hidden layer: h = sigmoid(W_in x + b) with a real uniform
// projection, and the real-valued readout y = W_out h.

#include "intrvfl/readout_types.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <span>

namespace intrvfl {

struct RealProjection {
  Eigen::MatrixXd weights;  // N x K, entries in [-1, 1]
  Eigen::VectorXd bias;     // N, entries in [-0.1, 0.1]
  std::uint64_t seed = 0;

  [[nodiscard]] std::size_t n_hidden() const noexcept { return static_cast<std::size_t>(weights.rows()); }
  [[nodiscard]] std::size_t n_features() const noexcept { return static_cast<std::size_t>(weights.cols()); }
};

inline constexpr double kInputWeightRange = 1.0;
inline constexpr double kBiasRange = 0.1;

RealProjection generate_real(std::size_t n_hidden, std::size_t n_features, std::uint64_t seed);

Eigen::VectorXd hidden_sigmoid(std::span<const double> x, const RealProjection& proj);

// Row-wise hidden activations for a batch of samples (M x K -> M x N).
Eigen::MatrixXd hidden_sigmoid(const Eigen::MatrixXd& x, const RealProjection& proj);

Prediction<double> forward_real(std::span<const double> x, const RealProjection& proj, const RealReadout& readout);

// Scores for an already computed hidden state, real or integer valued.
Prediction<double> readout_scores(const Eigen::VectorXd& h, const Eigen::MatrixXd& weights);

struct SigmoidHiddenLayer {
  RealProjection projection;

  [[nodiscard]] std::size_t n_hidden() const noexcept { return projection.n_hidden(); }
  [[nodiscard]] Eigen::VectorXd operator()(std::span<const double> x) const { return hidden_sigmoid(x, projection); }
};

}  // namespace intrvfl
