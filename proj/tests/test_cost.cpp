#include "intrvfl/cost.hpp"
#include "intrvfl/error.hpp"

#include <doctest.h>

#include <random>

using namespace intrvfl;

namespace {

CostProfile random_profile(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 10.0);
  CostProfile p;
  for (auto& e : p.energy) e = u(rng);
  return p;
}

std::size_t scan(const CostSpec& spec, const CostProfile& p, double budget, std::size_t limit) {
  std::size_t best = 0;
  for (std::size_t n = 1; n <= limit; ++n) {
    CostSpec s = spec;
    s.n_hidden = n;
    if (count_ops(s, p).total <= budget) best = n;
  }
  return best;
}

}  // namespace

TEST_CASE("operation counts for the median-sized network") {
  const auto c = count_ops(CostSpec{true, 16, 512, 4, 3, 15}, CostProfile::default_profile());
  CHECK(c.readout[Op::int_mac] == 2048);
  CHECK(c.hidden[Op::sign_flip] == 8192);
  CHECK(c.hidden[Op::int_add] == 512 * 15);
  CHECK(c.hidden[Op::int_compare] == 512);
  CHECK(c.encoding[Op::quantize] == 16);
  CHECK(c.neuron_bits == 3);
  CHECK(c.hidden_accumulator_bits == 6);  // [-16, 16]
  CHECK(c.readout_accumulator_bits == 16);  // |score| <= 23040
  CHECK(c.hidden[Op::real_mac] == 0);

  const auto b = count_ops(CostSpec{false, 16, 512, 4, 3, 0}, CostProfile::default_profile());
  CHECK(b.hidden[Op::real_mac] == 8192);
  CHECK(b.hidden[Op::real_add] == 512);
  CHECK(b.hidden[Op::sigmoid_eval] == 512);
  CHECK(b.readout[Op::real_mac] == 2048);
  CHECK(b.total / c.total >= 5.0);
}

TEST_CASE("smallest network") {
  const auto c = count_ops(CostSpec{true, 1, 1, 1, 1, 1}, CostProfile::default_profile());
  CHECK(c.hidden[Op::sign_flip] == 1);
  CHECK(c.hidden[Op::int_add] == 0);
  CHECK(c.hidden[Op::int_compare] == 1);
  CHECK(c.readout[Op::int_mac] == 1);
}

TEST_CASE("totals are the profile-weighted sum of counts") {
  std::mt19937_64 rng(1);
  const auto p = random_profile(rng);
  const auto c = count_ops(CostSpec{true, 7, 33, 3, 2, 4}, p);
  double expect = 0.0;
  for (const auto* stage : {&c.encoding, &c.hidden, &c.readout})
    for (std::size_t i = 0; i < kOpCount; ++i) expect += static_cast<double>(stage->counts[i]) * p.energy[i];
  CHECK(c.total == doctest::Approx(expect));
  CHECK(count_ops(CostSpec{true, 7, 33, 3, 2, 4}, p).total == c.total);
}

TEST_CASE("cost is monotone in N, K and L for both models") {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 50; ++trial) {
    const auto p = random_profile(rng);
    for (bool integer : {true, false}) {
      const CostSpec base{integer, 1 + rng() % 30, 1 + rng() % 300, 1 + rng() % 8, 3, integer ? 15 : 0};
      const double t = count_ops(base, p).total;
      CostSpec s = base;
      ++s.n_hidden;
      CHECK(count_ops(s, p).total >= t);
      s = base;
      ++s.n_features;
      CHECK(count_ops(s, p).total >= t);
      s = base;
      ++s.n_classes;
      CHECK(count_ops(s, p).total >= t);
    }
  }
}

TEST_CASE("budget solver matches an exhaustive scan") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    auto p = random_profile(rng);
    p[Op::sign_flip] += 0.01;  // keep every hidden neuron priced
    p[Op::real_mac] += 0.01;
    for (bool integer : {true, false}) {
      const CostSpec spec{integer, 16, 0, 4, 3, integer ? 15 : 0};
      CostSpec at = spec;
      at.n_hidden = 1 + rng() % 400;
      const double budget = count_ops(at, p).total * std::uniform_real_distribution<double>(0.5, 1.5)(rng);
      const auto r = max_hidden_under_budget(spec, p, budget);
      const auto expect = scan(spec, p, budget, 2000);
      CHECK(r.feasible == (expect > 0));
      CHECK(r.n_hidden == expect);
    }
  }
}

TEST_CASE("budget boundary, infeasibility and free neurons") {
  const auto p = CostProfile::default_profile();
  CostSpec spec{true, 16, 100, 4, 3, 15};
  const double at100 = count_ops(spec, p).total;
  CHECK(max_hidden_under_budget(spec, p, at100).n_hidden == 100);
  CHECK_FALSE(max_hidden_under_budget(spec, p, 1e-6).feasible);

  CostSpec base{false, 16, 0, 4, 3, 0};
  CHECK(max_hidden_under_budget(spec, p, 5000.0).n_hidden > max_hidden_under_budget(base, p, 5000.0).n_hidden);

  CostProfile zero;
  CHECK_THROWS_AS(max_hidden_under_budget(spec, zero, 10.0), ConfigError);
}

TEST_CASE("profile validation and JSON") {
  CostProfile p = CostProfile::default_profile();
  p[Op::int_add] = -1.0;
  CHECK_THROWS_AS(p.validate(), ConfigError);
  const auto d = CostProfile::default_profile();
  CHECK(profile_from_json(profile_to_json(d)).energy == d.energy);
  CHECK_THROWS_AS(profile_from_json(nlohmann::json{{"teleport", 1.0}}), ConfigError);
  // partial profiles override only the listed operations
  const auto partial = profile_from_json(nlohmann::json{{"int_mac", 2.0}});
  CHECK(partial[Op::int_mac] == 2.0);
}
