#pragma once

#include "intrvfl/intrvfl.hpp"
#include "intrvfl/readout_types.hpp"
#include "intrvfl/rvfl.hpp"

#include <Eigen/Dense>

#include <variant>

namespace intrvfl {

using HiddenLayer = std::variant<IntHiddenLayer, SigmoidHiddenLayer>;

std::size_t n_hidden(const HiddenLayer& layer);

// Hidden states of every training sample, one row each. Integer layers
// produce small integers stored as doubles for the solve.
struct HiddenMatrix {
  Eigen::MatrixXd values;  // M x N
  bool integer_valued = false;
};

// `features` must already be normalized to [0, 1] for the integer layer.
HiddenMatrix collect_hidden(const HiddenLayer& layer, const Eigen::MatrixXd& features);

// Normal equations of the ridge problem, prepared once so that several
// regularization strengths can be solved from the same Gram matrix.
// With fewer samples than neurons the equivalent M x M form
// W^T = H^T (H H^T + lambda I)^-1 Y is used instead.
class RidgeSystem {
 public:
  RidgeSystem(const Eigen::MatrixXd& hidden, const Eigen::MatrixXd& targets);

  // Returns the readout as L x N.
  [[nodiscard]] RealReadout solve(double lambda) const;

  [[nodiscard]] bool dual() const noexcept { return dual_; }

 private:
  bool dual_ = false;
  Eigen::MatrixXd gram_;     // N x N (H^T H), or M x M (H H^T) when dual
  Eigen::MatrixXd rhs_;      // N x L (H^T Y), or M x L (Y) when dual
  Eigen::MatrixXd hidden_;   // kept only when dual
};

RealReadout solve_ridge(const HiddenMatrix& hidden, const Eigen::MatrixXd& targets, double lambda);

}  // namespace intrvfl
