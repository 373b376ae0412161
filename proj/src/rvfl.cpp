#include "intrvfl/rvfl.hpp"

#include "intrvfl/error.hpp"

#include <random>
#include <string>

namespace intrvfl {

RealProjection generate_real(std::size_t n_hidden, std::size_t n_features, std::uint64_t seed) {
  if (n_hidden < 1 || n_features < 1) throw ConfigError("n_hidden", "projection needs N >= 1 and K >= 1");
  const auto rows = static_cast<Eigen::Index>(n_hidden);
  const auto cols = static_cast<Eigen::Index>(n_features);
  RealProjection p{Eigen::MatrixXd(rows, cols), Eigen::VectorXd(rows), seed};
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> w_dist(-kInputWeightRange, kInputWeightRange);
  std::uniform_real_distribution<double> b_dist(-kBiasRange, kBiasRange);
  for (Eigen::Index n = 0; n < rows; ++n) {
    for (Eigen::Index i = 0; i < cols; ++i) p.weights(n, i) = w_dist(rng);
  }
  for (Eigen::Index n = 0; n < rows; ++n) p.bias(n) = b_dist(rng);
  return p;
}

Eigen::VectorXd hidden_sigmoid(std::span<const double> x, const RealProjection& proj) {
  if (x.size() != proj.n_features()) {
    throw ValidationError("expected " + std::to_string(proj.n_features()) + " features, got " + std::to_string(x.size()));
  }
  const Eigen::Map<const Eigen::VectorXd> xv(x.data(), static_cast<Eigen::Index>(x.size()));
  const Eigen::VectorXd pre = proj.weights * xv + proj.bias;
  return (1.0 + (-pre.array()).exp()).inverse().matrix();
}

Eigen::MatrixXd hidden_sigmoid(const Eigen::MatrixXd& x, const RealProjection& proj) {
  if (static_cast<std::size_t>(x.cols()) != proj.n_features()) {
    throw ValidationError("expected " + std::to_string(proj.n_features()) + " feature columns");
  }
  Eigen::MatrixXd pre = x * proj.weights.transpose();
  pre.rowwise() += proj.bias.transpose();
  return (1.0 + (-pre.array()).exp()).inverse().matrix();
}

Prediction<double> readout_scores(const Eigen::VectorXd& h, const Eigen::MatrixXd& weights) {
  if (weights.cols() != h.size()) throw ValidationError("readout width does not match the hidden layer");
  const Eigen::VectorXd y = weights * h;
  Prediction<double> out{std::vector<double>(y.data(), y.data() + y.size()), 0};
  out.label = argmax<double>(out.scores);
  return out;
}

Prediction<double> forward_real(std::span<const double> x, const RealProjection& proj, const RealReadout& readout) {
  return readout_scores(hidden_sigmoid(x, proj), readout.weights);
}

}  // namespace intrvfl
