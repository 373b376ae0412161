#include "intrvfl/kernels.hpp"

#include <algorithm>

namespace intrvfl::kernels {
namespace {

void bind_bundle_scalar(const std::int8_t* w, std::size_t n_hidden, std::size_t n_features,
                        const std::int32_t* levels, std::int16_t* acc) {
  std::fill(acc, acc + n_hidden, std::int16_t{0});
  for (std::size_t i = 0; i < n_features; ++i) {
    const std::int8_t* row = w + i * n_hidden;
    const auto flip = std::min<std::size_t>(static_cast<std::size_t>(levels[i]), n_hidden);
    for (std::size_t n = 0; n < flip; ++n) acc[n] = static_cast<std::int16_t>(acc[n] - row[n]);
    for (std::size_t n = flip; n < n_hidden; ++n) acc[n] = static_cast<std::int16_t>(acc[n] + row[n]);
  }
}

void clip_scalar(const std::int16_t* acc, std::size_t n, std::int16_t kappa, std::int8_t* out) {
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = static_cast<std::int8_t>(std::clamp<std::int16_t>(acc[i], -kappa, kappa));
  }
}

void int_scores_scalar(const std::int8_t* weights, std::size_t n_out, const std::int8_t* h,
                       std::size_t n_hidden, std::int32_t* scores) {
  for (std::size_t l = 0; l < n_out; ++l) {
    const std::int8_t* row = weights + l * n_hidden;
    std::int32_t s = 0;
    for (std::size_t n = 0; n < n_hidden; ++n) s += std::int32_t{row[n]} * std::int32_t{h[n]};
    scores[l] = s;
  }
}

constexpr KernelTable kScalar{Isa::scalar, bind_bundle_scalar, clip_scalar, int_scores_scalar};

}  // namespace

const KernelTable& scalar_table() noexcept { return kScalar; }

}  // namespace intrvfl::kernels
