#include "intrvfl/error.hpp"
#include "intrvfl/ridge.hpp"

#include <doctest.h>

#include <random>

using namespace intrvfl;

namespace {

// Gaussian elimination with partial pivoting on (H^T H + lambda I) X = H^T Y,
// written without any library linear algebra.
std::vector<std::vector<double>> oracle_solve(const Eigen::MatrixXd& h, const Eigen::MatrixXd& y, double lambda) {
  const auto m = static_cast<std::size_t>(h.rows());
  const auto n = static_cast<std::size_t>(h.cols());
  const auto l = static_cast<std::size_t>(y.cols());
  std::vector<std::vector<double>> a(n, std::vector<double>(n + l, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      double s = 0.0;
      for (std::size_t r = 0; r < m; ++r) s += h(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(i)) * h(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(j));
      a[i][j] = s + (i == j ? lambda : 0.0);
    }
    for (std::size_t c = 0; c < l; ++c) {
      double s = 0.0;
      for (std::size_t r = 0; r < m; ++r) s += h(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(i)) * y(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
      a[i][n + c] = s;
    }
  }
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
    std::swap(a[col], a[piv]);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col) continue;
      const double f = a[r][col] / a[col][col];
      for (std::size_t c = col; c < n + l; ++c) a[r][c] -= f * a[col][c];
    }
  }
  std::vector<std::vector<double>> x(l, std::vector<double>(n));  // L x N
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t c = 0; c < l; ++c) x[c][i] = a[i][n + c] / a[i][i];
  return x;
}

Eigen::MatrixXd random_one_hot(std::size_t m, std::size_t l, std::mt19937_64& rng) {
  Eigen::MatrixXd y = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(l));
  for (std::size_t r = 0; r < m; ++r) y(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(rng() % l)) = 1.0;
  return y;
}

}  // namespace

TEST_CASE("ridge matches an elimination oracle on random systems") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t m = 1 + rng() % 50;
    const std::size_t n = 1 + rng() % 20;
    const std::size_t l = 1 + rng() % 5;
    const double lambda = std::ldexp(1.0, static_cast<int>(rng() % 16) - 10);
    Eigen::MatrixXd h(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(n));
    for (Eigen::Index i = 0; i < h.size(); ++i) h.data()[i] = u(rng);
    if (trial % 3 == 0) h = h.array().round();  // integer-valued hidden states too
    const auto y = random_one_hot(m, l, rng);
    const auto w = solve_ridge(HiddenMatrix{h, false}, y, lambda).weights;
    const auto expected = oracle_solve(h, y, lambda);
    double num = 0.0;
    double den = 0.0;
    for (std::size_t c = 0; c < l; ++c)
      for (std::size_t i = 0; i < n; ++i) {
        const double d = w(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(i)) - expected[c][i];
        num += d * d;
        den += expected[c][i] * expected[c][i];
      }
    REQUIRE(std::sqrt(num) <= 1e-8 * std::max(std::sqrt(den), 1e-300));
  }
}

TEST_CASE("identity hidden matrix gives Y / (1 + lambda)") {
  std::mt19937_64 rng(1);
  const auto y = random_one_hot(6, 3, rng);
  const auto w = solve_ridge(HiddenMatrix{Eigen::MatrixXd::Identity(6, 6), false}, y, 0.5).weights;
  CHECK((w.transpose() - y / 1.5).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("normal equations hold in both the primal and the sample-space form") {
  std::mt19937_64 rng(3);
  for (auto [m, n] : {std::pair{40, 10}, std::pair{10, 40}}) {
    const Eigen::MatrixXd h = Eigen::MatrixXd::Random(m, n);
    const auto y = random_one_hot(static_cast<std::size_t>(m), 3, rng);
    const RidgeSystem sys(h, y);
    CHECK(sys.dual() == (m < n));
    const auto w = sys.solve(0.25).weights;
    const Eigen::MatrixXd residual =
        (h.transpose() * h + 0.25 * Eigen::MatrixXd::Identity(n, n)) * w.transpose() - h.transpose() * y;
    CHECK(residual.cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("shrinkage is monotone in lambda and vanishes for huge lambda") {
  std::mt19937_64 rng(9);
  const Eigen::MatrixXd h = Eigen::MatrixXd::Random(30, 12);
  const auto y = random_one_hot(30, 4, rng);
  const RidgeSystem sys(h, y);
  double prev = std::numeric_limits<double>::infinity();
  for (int k = -10; k <= 12; ++k) {
    const double norm = sys.solve(std::ldexp(1.0, k)).weights.norm();
    CHECK(norm <= prev);
    prev = norm;
  }
  const double scale = (h.transpose() * y).cwiseAbs().maxCoeff();
  CHECK(sys.solve(1e9).weights.cwiseAbs().maxCoeff() < 1e-3 * scale);
}

TEST_CASE("invalid ridge inputs") {
  const Eigen::MatrixXd h = Eigen::MatrixXd::Ones(3, 2);
  const Eigen::MatrixXd y = Eigen::MatrixXd::Ones(3, 2);
  CHECK_THROWS_AS(RidgeSystem(h, y).solve(0.0), ConfigError);
  CHECK_THROWS_AS(RidgeSystem(h, y).solve(-1.0), ConfigError);
  CHECK_THROWS_AS(RidgeSystem(h, Eigen::MatrixXd::Ones(2, 2)), ValidationError);
  Eigen::MatrixXd bad = h;
  bad(0, 0) = std::nan("");
  CHECK_THROWS_AS(RidgeSystem(bad, y), ValidationError);
}

TEST_CASE("collect_hidden: integer rows, permutation") {
  IntHiddenLayer layer{BipolarProjection::generate(16, 3, 5), 2};
  Eigen::MatrixXd x(4, 3);
  x << 0.1, 0.5, 0.9, 1.0, 0.0, 0.3, 0.25, 0.75, 0.5, 0.6, 0.6, 0.6;
  const auto h = collect_hidden(layer, x);
  CHECK(h.integer_valued);
  CHECK(h.values.cwiseAbs().maxCoeff() <= 2.0);
  CHECK((h.values.array() == h.values.array().round()).all());
  Eigen::MatrixXd perm(4, 3);
  perm << x.row(2), x.row(0), x.row(3), x.row(1);
  const auto hp = collect_hidden(layer, perm);
  CHECK(hp.values.row(0) == h.values.row(2));
  CHECK(hp.values.row(3) == h.values.row(1));
  const auto one = collect_hidden(layer, Eigen::MatrixXd(x.row(1)));
  CHECK(one.values.rows() == 1);
  CHECK(one.values.row(0) == h.values.row(1));
}
