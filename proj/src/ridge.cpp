#include "intrvfl/ridge.hpp"

#include "intrvfl/error.hpp"

#include <cmath>
#include <string>

namespace intrvfl {

std::size_t n_hidden(const HiddenLayer& layer) {
  return std::visit([](const auto& l) { return l.n_hidden(); }, layer);
}

HiddenMatrix collect_hidden(const HiddenLayer& layer, const Eigen::MatrixXd& features) {
  HiddenMatrix out;
  const Eigen::Index rows = features.rows();
  const auto width = static_cast<Eigen::Index>(n_hidden(layer));
  if (const auto* sig = std::get_if<SigmoidHiddenLayer>(&layer)) {
    out.values = hidden_sigmoid(features, sig->projection);
    return out;
  }
  const auto& int_layer = std::get<IntHiddenLayer>(layer);
  out.integer_valued = true;
  out.values.resize(rows, width);
  std::vector<double> row(static_cast<std::size_t>(features.cols()));
  for (Eigen::Index m = 0; m < rows; ++m) {
    for (Eigen::Index i = 0; i < features.cols(); ++i) row[static_cast<std::size_t>(i)] = features(m, i);
    const HiddenState h = int_layer(row);
    for (Eigen::Index n = 0; n < width; ++n) out.values(m, n) = h.values[static_cast<std::size_t>(n)];
  }
  return out;
}

RidgeSystem::RidgeSystem(const Eigen::MatrixXd& hidden, const Eigen::MatrixXd& targets) {
  if (hidden.rows() != targets.rows()) throw ValidationError("hidden and target row counts differ");
  if (!hidden.allFinite()) throw ValidationError("hidden matrix has non-finite entries");
  if (!targets.allFinite()) throw ValidationError("target matrix has non-finite entries");
  dual_ = hidden.rows() < hidden.cols();
  if (dual_) {
    gram_ = Eigen::MatrixXd::Zero(hidden.rows(), hidden.rows());
    gram_.selfadjointView<Eigen::Lower>().rankUpdate(hidden);
    hidden_ = hidden;
    rhs_ = targets;
  } else {
    gram_ = Eigen::MatrixXd::Zero(hidden.cols(), hidden.cols());
    gram_.selfadjointView<Eigen::Lower>().rankUpdate(hidden.transpose());
    rhs_ = hidden.transpose() * targets;
  }
}

RealReadout RidgeSystem::solve(double lambda) const {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw ConfigError("lambda", "must be finite and > 0, got " + std::to_string(lambda));
  }
  Eigen::MatrixXd system = gram_;
  system.diagonal().array() += lambda;
  const Eigen::LLT<Eigen::MatrixXd, Eigen::Lower> llt(system);
  if (llt.info() != Eigen::Success) throw ValidationError("ridge system is not positive definite");
  if (dual_) return RealReadout{(hidden_.transpose() * llt.solve(rhs_)).transpose(), lambda};
  return RealReadout{llt.solve(rhs_).transpose(), lambda};
}

RealReadout solve_ridge(const HiddenMatrix& hidden, const Eigen::MatrixXd& targets, double lambda) {
  return RidgeSystem(hidden.values, targets).solve(lambda);
}

}  // namespace intrvfl
