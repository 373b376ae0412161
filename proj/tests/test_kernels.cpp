#include "intrvfl/kernels.hpp"

#include <doctest.h>

#include <random>
#include <vector>

using namespace intrvfl;

namespace {

std::vector<std::int8_t> random_bipolar(std::size_t n, std::mt19937_64& rng) {
  std::vector<std::int8_t> w(n);
  for (auto& x : w) x = (rng() & 1U) != 0U ? 1 : -1;
  return w;
}

// Straight from the definition, for both table variants to agree with.
std::vector<std::int16_t> bundle_oracle(const std::vector<std::int8_t>& w, std::size_t n_hidden,
                                        const std::vector<std::int32_t>& levels) {
  std::vector<std::int16_t> acc(n_hidden, 0);
  for (std::size_t i = 0; i < levels.size(); ++i)
    for (std::size_t n = 0; n < n_hidden; ++n) {
      const int code = static_cast<std::int32_t>(n) < levels[i] ? -1 : 1;
      acc[n] = static_cast<std::int16_t>(acc[n] + code * w[i * n_hidden + n]);
    }
  return acc;
}

std::vector<const kernels::KernelTable*> tables() {
  std::vector<const kernels::KernelTable*> t{&kernels::scalar_table()};
  if (const auto* avx = kernels::avx2_table()) t.push_back(avx);
  return t;
}

}  // namespace

TEST_CASE("bind_bundle variants agree with the definition, including ragged tails") {
  std::mt19937_64 rng(7);
  if (kernels::avx2_table() == nullptr) MESSAGE("AVX2 variant unavailable; checking scalar only");
  for (int trial = 0; trial < 2000; ++trial) {
    const std::size_t n_hidden = 1 + rng() % 97;
    const std::size_t k = 1 + rng() % 20;
    const auto w = random_bipolar(n_hidden * k, rng);
    std::vector<std::int32_t> levels(k);
    for (auto& v : levels) v = static_cast<std::int32_t>(rng() % (n_hidden + 1));
    const auto expected = bundle_oracle(w, n_hidden, levels);
    for (const auto* t : tables()) {
      std::vector<std::int16_t> acc(n_hidden, 99);
      t->bind_bundle(w.data(), n_hidden, k, levels.data(), acc.data());
      REQUIRE_MESSAGE(acc == expected, kernels::isa_name(t->isa));
    }
  }
}

TEST_CASE("clip variants agree") {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = rng() % 200;
    const auto kappa = static_cast<std::int16_t>(1 + rng() % 127);
    std::vector<std::int16_t> acc(n);
    for (auto& a : acc) a = static_cast<std::int16_t>(static_cast<int>(rng() % 2001) - 1000);
    std::vector<std::int8_t> expected(n);
    for (std::size_t i = 0; i < n; ++i) expected[i] = static_cast<std::int8_t>(std::clamp<int>(acc[i], -kappa, kappa));
    for (const auto* t : tables()) {
      std::vector<std::int8_t> out(n, 0);
      t->clip(acc.data(), n, kappa, out.data());
      REQUIRE_MESSAGE(out == expected, kernels::isa_name(t->isa));
    }
  }
}

TEST_CASE("int_scores variants agree at the int8 extremes") {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n_hidden = 1 + rng() % 300;
    const std::size_t n_out = 1 + rng() % 6;
    std::vector<std::int8_t> w(n_out * n_hidden);
    std::vector<std::int8_t> h(n_hidden);
    const bool extreme = trial % 4 == 0;
    for (auto& x : w) x = extreme ? std::int8_t{-127} : static_cast<std::int8_t>(static_cast<int>(rng() % 255) - 127);
    for (auto& x : h) x = extreme ? std::int8_t{127} : static_cast<std::int8_t>(static_cast<int>(rng() % 255) - 127);
    std::vector<std::int32_t> expected(n_out, 0);
    for (std::size_t l = 0; l < n_out; ++l)
      for (std::size_t n = 0; n < n_hidden; ++n) expected[l] += int{w[l * n_hidden + n]} * int{h[n]};
    for (const auto* t : tables()) {
      std::vector<std::int32_t> scores(n_out, -1);
      t->int_scores(w.data(), n_out, h.data(), n_hidden, scores.data());
      REQUIRE_MESSAGE(scores == expected, kernels::isa_name(t->isa));
    }
  }
}

TEST_CASE("active table is one of the compiled variants") {
  const auto& a = kernels::active();
  CHECK((a.isa == kernels::Isa::scalar || a.isa == kernels::Isa::avx2));
}
