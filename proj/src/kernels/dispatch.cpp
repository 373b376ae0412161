#include "intrvfl/kernels.hpp"

#include <cassert>
#include <cstdlib>
#include <string>

namespace intrvfl::kernels {

#if defined(INTRVFL_HAVE_AVX2)
const KernelTable* avx2_table_impl() noexcept;
#endif

std::string_view isa_name(Isa isa) noexcept {
  switch (isa) {
    case Isa::scalar: return "scalar";
    case Isa::avx2: return "avx2";
  }
  return "unknown";
}

const KernelTable* avx2_table() noexcept {
#if defined(INTRVFL_HAVE_AVX2)
  static const bool supported = __builtin_cpu_supports("avx2");
  return supported ? avx2_table_impl() : nullptr;
#else
  return nullptr;
#endif
}

const KernelTable& active() noexcept {
  static const KernelTable* table = [] {
    const char* forced = std::getenv("INTRVFL_ISA");
    if (forced != nullptr && std::string(forced) == "scalar") return &scalar_table();
    if (const KernelTable* t = avx2_table()) return t;
    return &scalar_table();
  }();
  return *table;
}

void bind_bundle(std::span<const std::int8_t> w, std::size_t n_hidden,
                 std::span<const std::int32_t> levels, std::span<std::int16_t> acc) {
  assert(w.size() == n_hidden * levels.size());
  assert(acc.size() == n_hidden);
  active().bind_bundle(w.data(), n_hidden, levels.size(), levels.data(), acc.data());
}

void clip(std::span<const std::int16_t> acc, int kappa, std::span<std::int8_t> out) {
  assert(acc.size() == out.size());
  assert(kappa >= 0 && kappa <= 127);
  active().clip(acc.data(), acc.size(), static_cast<std::int16_t>(kappa), out.data());
}

void int_scores(std::span<const std::int8_t> weights, std::size_t n_out,
                std::span<const std::int8_t> h, std::span<std::int32_t> scores) {
  assert(weights.size() == n_out * h.size());
  assert(scores.size() == n_out);
  active().int_scores(weights.data(), n_out, h.data(), h.size(), scores.data());
}

}  // namespace intrvfl::kernels
