#include "intrvfl/density.hpp"
#include "intrvfl/error.hpp"
#include "intrvfl/intrvfl.hpp"

#include <doctest.h>

#include <cmath>
#include <random>
#include <set>

using namespace intrvfl;

namespace {

// Binding and bundling spelled out from the definitions: build F, multiply
// with W_in entry by entry, sum the K terms of each neuron, clip.
std::vector<int> brute_force_hidden(const std::vector<Level>& levels, const BipolarProjection& p, int kappa,
                                    std::vector<int>* pre_clip = nullptr) {
  const std::size_t n_dim = p.n_hidden();
  std::vector<std::vector<int>> f(n_dim, std::vector<int>(levels.size()));
  for (std::size_t n = 0; n < n_dim; ++n)
    for (std::size_t i = 0; i < levels.size(); ++i) f[n][i] = static_cast<Level>(n) < levels[i] ? -1 : 1;
  std::vector<int> h(n_dim);
  if (pre_clip) pre_clip->assign(n_dim, 0);
  for (std::size_t n = 0; n < n_dim; ++n) {
    int s = 0;
    for (std::size_t i = 0; i < levels.size(); ++i) s += f[n][i] * p.at(n, i);
    if (pre_clip) (*pre_clip)[n] = s;
    h[n] = s >= kappa ? kappa : (s <= -kappa ? -kappa : s);
  }
  return h;
}

std::vector<int> as_ints(const HiddenState& h) { return {h.values.begin(), h.values.end()}; }

}  // namespace

TEST_CASE("clip branches") {
  CHECK(intrvfl::clip(5, 2) == 2);
  CHECK(intrvfl::clip(-3, 2) == -2);
  CHECK(intrvfl::clip(1, 2) == 1);
}

TEST_CASE("worked K=5, N=10, kappa=2 instance") {
  // Fixed projection; the third feature sits at 1.0 and flips its whole row.
  const std::vector<std::int8_t> feature_major{
      -1, -1, 1,  -1, -1, 1,  1,  -1, 1, -1, -1, 1,  1,  1,  1,  1, -1, 1,  1,  1,  1,  1,  1, -1, -1,
      1,  -1, 1,  1,  -1, 1,  -1, -1, -1, 1, 1,  -1, 1,  -1, 1,  -1, -1, -1, -1, 1, -1, 1,  1, 1,  -1};
  const BipolarProjection p(10, 5, feature_major);
  const std::vector<double> x{0.3, 0.7, 1.0, 0.0, 0.52};
  const auto levels = encode_features(x, 10);
  CHECK(levels == std::vector<Level>{3, 7, 10, 0, 5});
  CHECK(bundle_explicit(levels, p) == std::vector<std::int32_t>{3, -1, -3, -1, -1, -1, 3, 1, 1, 1});
  CHECK(as_ints(hidden_explicit(levels, p, 2)) == std::vector<int>{2, -1, -2, -1, -1, -1, 2, 1, 1, 1});
  CHECK(as_ints(hidden_shortcut(levels, p, 2)) == std::vector<int>{2, -1, -2, -1, -1, -1, 2, 1, 1, 1});
}

TEST_CASE("bipolar projection: entries, determinism, balance") {
  const auto a = BipolarProjection::generate(4, 3, 11);
  const auto b = BipolarProjection::generate(4, 3, 11);
  CHECK(std::equal(a.data().begin(), a.data().end(), b.data().begin(), b.data().end()));
  const auto big = BipolarProjection::generate(1000, 100, 5);
  long sum = 0;
  for (auto w : big.data()) {
    REQUIRE((w == 1 || w == -1));
    sum += w;
  }
  CHECK(std::abs(static_cast<double>(sum) / 1e5) < 0.02);
  CHECK_THROWS_AS(BipolarProjection(2, 1, std::vector<std::int8_t>{1, 0}), ValidationError);
}

TEST_CASE("shortcut equals explicit and the brute force on random instances") {
  std::mt19937_64 rng(123);
  for (int trial = 0; trial < 10000; ++trial) {
    const std::size_t n = 1 + rng() % 64;
    const std::size_t k = 1 + rng() % 16;
    const int kappa = 1 + static_cast<int>(rng() % 8);
    const auto p = BipolarProjection::generate(n, k, rng());
    std::vector<Level> levels(k);
    for (auto& v : levels) v = static_cast<Level>(rng() % (n + 1));
    const auto shortcut = hidden_shortcut(levels, p, kappa);
    REQUIRE(shortcut.values == hidden_explicit(levels, p, kappa).values);
    REQUIRE(as_ints(shortcut) == brute_force_hidden(levels, p, kappa));
  }
}

TEST_CASE("levels at the ends: no flips or every sign flipped") {
  const auto p = BipolarProjection::generate(32, 6, 4);
  const std::vector<Level> zeros(6, 0);
  const std::vector<Level> full(6, 32);
  const auto h0 = hidden_shortcut(zeros, p, 3);
  const auto h1 = hidden_shortcut(full, p, 3);
  for (std::size_t n = 0; n < 32; ++n) {
    int s = 0;
    for (std::size_t i = 0; i < 6; ++i) s += p.at(n, i);
    CHECK(h0.values[n] == intrvfl::clip(s, 3));
    CHECK(h1.values[n] == intrvfl::clip(-s, 3));
  }
  CHECK(h1.values == hidden_explicit(full, p, 3).values);
}

TEST_CASE("single feature at level 0 with an all +1 row") {
  const BipolarProjection p(5, 1, std::vector<std::int8_t>(5, 1));
  const std::vector<Level> lv{0};
  CHECK(as_ints(hidden_shortcut(lv, p, 3)) == std::vector<int>(5, 1));
}

TEST_CASE("range and parity: exhaustive over small shapes") {
  for (std::size_t k = 1; k <= 4; ++k) {
    for (std::size_t n = 1; n <= 4; ++n) {
      // every projection of this shape
      const std::size_t entries = n * k;
      if (entries > 12) continue;
      for (std::uint32_t bits = 0; bits < (1U << entries); ++bits) {
        std::vector<std::int8_t> w(entries);
        for (std::size_t e = 0; e < entries; ++e) w[e] = ((bits >> e) & 1U) != 0U ? 1 : -1;
        const BipolarProjection p(n, k, w);
        std::vector<Level> levels(k, 0);
        for (;;) {
          const auto pre = bundle_shortcut(levels, p);
          for (auto s : pre) {
            REQUIRE(std::abs(int{s}) <= static_cast<int>(k));
            REQUIRE(((int{s} + static_cast<int>(k)) % 2) == 0);
          }
          for (int kappa = 1; kappa <= 3; ++kappa) {
            for (auto v : hidden_shortcut(levels, p, kappa).values) REQUIRE(std::abs(int{v}) <= kappa);
          }
          std::size_t i = 0;
          while (i < k && levels[i] == static_cast<Level>(n)) levels[i++] = 0;
          if (i == k) break;
          ++levels[i];
        }
      }
    }
  }
}

TEST_CASE("range and parity: randomized larger shapes") {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 2000; ++trial) {
    const std::size_t n = 1 + rng() % 256;
    const std::size_t k = 1 + rng() % 64;
    const int kappa = 1 + static_cast<int>(rng() % 20);
    const auto p = BipolarProjection::generate(n, k, rng());
    std::vector<Level> levels(k);
    for (auto& v : levels) v = static_cast<Level>(rng() % (n + 1));
    std::vector<int> pre;
    brute_force_hidden(levels, p, kappa, &pre);
    const auto fast = bundle_shortcut(levels, p);
    for (std::size_t j = 0; j < n; ++j) {
      REQUIRE(fast[j] == pre[j]);
      REQUIRE(std::abs(pre[j]) <= static_cast<int>(k));
      REQUIRE((pre[j] + static_cast<int>(k)) % 2 == 0);
    }
    const auto h = hidden_shortcut(levels, p, kappa);
    for (auto v : h.values) REQUIRE(std::abs(int{v}) <= kappa);
  }
}

TEST_CASE("neuron storage bits") {
  CHECK(HiddenState{3, {}}.bits_per_neuron() == 3);
  CHECK(HiddenState{1, {}}.bits_per_neuron() == 2);
  CHECK(HiddenState{7, {}}.bits_per_neuron() == 4);
  for (int kappa = 1; kappa <= kMaxKappa; ++kappa) {
    const int bits = bits_for_symmetric_range(kappa);
    // two's complement range of `bits` covers [-kappa, kappa], one bit less does not
    REQUIRE((1 << (bits - 1)) - 1 >= kappa);
    REQUIRE((1 << (bits - 2)) - 1 < kappa);
    REQUIRE(bits == static_cast<int>(std::ceil(std::log2(2.0 * kappa + 1.0))));
  }
}

TEST_CASE("number of distinct clipped values") {
  // with K features the pre-clip sums take K+1 values of one parity
  for (int k = 1; k <= 9; ++k) {
    for (int kappa = 1; kappa <= 6; ++kappa) {
      std::set<int> values;
      for (int s = -k; s <= k; s += 2) values.insert(intrvfl::clip(s, kappa));
      std::set<int> expected;
      for (int s = -k; s <= k; s += 2) expected.insert(std::max(-kappa, std::min(kappa, s)));
      CHECK(values == expected);
      CHECK(values.size() <= static_cast<std::size_t>(2 * kappa + 1));
    }
  }
}

TEST_CASE("accumulator plan for integer readouts") {
  const auto plan = plan_accumulator(512, 3, 15);
  CHECK(plan.max_abs_score == 23040);
  CHECK(plan.bits_required == 16);  // 23040 < 2^15
  CHECK(plan.accumulator_bits == 32);
  CHECK(plan_accumulator(512, 3, 22).bits_required == 17);  // 33792 > 32767
  CHECK_THROWS_AS(plan_accumulator(std::size_t{1} << 40, 127, 127), ConfigError);
}

TEST_CASE("integer forward pass") {
  const auto p = BipolarProjection::generate(8, 3, 2);
  const std::vector<Level> levels{1, 5, 8};
  const auto h = hidden_shortcut(levels, p, 2);
  IntReadout r;
  r.n_out = 3;
  r.n_hidden = 8;
  r.boundary = 1;
  r.weights.assign(24, 0);
  for (std::size_t l = 0; l < 3; ++l) r.weights[l * 8 + l] = 1;  // rows select neurons 0..2
  const auto pred = forward_int(levels, p, 2, r);
  for (std::size_t l = 0; l < 3; ++l) CHECK(pred.scores[l] == h.values[l]);

  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    IntReadout q{4, 8, 5, 1.0, std::vector<std::int8_t>(32)};
    for (auto& w : q.weights) w = static_cast<std::int8_t>(static_cast<int>(rng() % 11) - 5);
    IntReadout scaled = q;
    scaled.boundary = 20;
    for (auto& w : scaled.weights) w = static_cast<std::int8_t>(4 * w);
    CHECK(forward_int(h, q).label == forward_int(h, scaled).label);
  }
}

TEST_CASE("quasi-orthogonality of random bipolar vectors and their binding") {
  const std::size_t n = 10000;
  const auto p = BipolarProjection::generate(n, 3, 99);
  auto dot = [&](auto a, auto b) {
    long s = 0;
    for (std::size_t i = 0; i < n; ++i) s += long{a[i]} * long{b[i]};
    return static_cast<double>(s) / static_cast<double>(n);
  };
  const auto a = p.feature_vector(0);
  const auto b = p.feature_vector(1);
  CHECK(std::abs(dot(a, b)) < 0.05);
  std::vector<std::int8_t> bound(n);
  for (std::size_t i = 0; i < n; ++i) bound[i] = static_cast<std::int8_t>(a[i] * b[i]);
  CHECK(std::abs(dot(bound, a)) < 0.05);
  CHECK(std::abs(dot(bound, b)) < 0.05);
  CHECK(std::abs(dot(bound, p.feature_vector(2))) < 0.05);
}

TEST_CASE("hidden state is deterministic in (levels, seed, kappa)") {
  const std::vector<Level> levels{3, 0, 17, 20};
  const auto a = hidden_shortcut(levels, BipolarProjection::generate(20, 4, 8), 2);
  const auto b = hidden_shortcut(levels, BipolarProjection::generate(20, 4, 8), 2);
  CHECK(a.values == b.values);
}
