#pragma once

// Integer inner loops of the density-encoded network. Every kernel has a
// portable scalar reference; wider variants are compiled per ISA and picked
// at runtime. All variants must agree bit-for-bit with the scalar one.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

namespace intrvfl::kernels {

enum class Isa { scalar, avx2 };

std::string_view isa_name(Isa isa) noexcept;

struct KernelTable {
  Isa isa;

  // acc[n] = sum_i s(i, n) * w[i * n_hidden + n], where s = -1 for n < levels[i]
  // and +1 otherwise. `w` is feature-major (one bipolar row per feature).
  void (*bind_bundle)(const std::int8_t* w, std::size_t n_hidden, std::size_t n_features,
                      const std::int32_t* levels, std::int16_t* acc);

  // out[n] = clamp(acc[n], -kappa, kappa); kappa <= 127.
  void (*clip)(const std::int16_t* acc, std::size_t n, std::int16_t kappa, std::int8_t* out);

  // scores[l] = sum_n weights[l * n_hidden + n] * h[n]
  void (*int_scores)(const std::int8_t* weights, std::size_t n_out, const std::int8_t* h,
                     std::size_t n_hidden, std::int32_t* scores);
};

const KernelTable& scalar_table() noexcept;

// nullptr when the variant is not compiled in or the CPU lacks the ISA.
const KernelTable* avx2_table() noexcept;

// Widest supported table, unless INTRVFL_ISA=scalar is set in the environment.
const KernelTable& active() noexcept;

// Span wrappers over active(). Sizes are checked with assertions only; the
// callers in this library own the shapes.
void bind_bundle(std::span<const std::int8_t> w, std::size_t n_hidden,
                 std::span<const std::int32_t> levels, std::span<std::int16_t> acc);
void clip(std::span<const std::int16_t> acc, int kappa, std::span<std::int8_t> out);
void int_scores(std::span<const std::int8_t> weights, std::size_t n_out,
                std::span<const std::int8_t> h, std::span<std::int32_t> scores);

}  // namespace intrvfl::kernels
