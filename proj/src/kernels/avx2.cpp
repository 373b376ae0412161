#include "intrvfl/kernels.hpp"

#include <immintrin.h>

#include <algorithm>

namespace intrvfl::kernels {
namespace {

// 16 hidden neurons per iteration, int16 lanes. The sign mask for lane j of
// block n0 is (j < levels[i] - n0), so no absolute index ever leaves int16.
void bind_bundle_avx2(const std::int8_t* w, std::size_t n_hidden, std::size_t n_features,
                      const std::int32_t* levels, std::int16_t* acc) {
  const __m256i lane = _mm256_setr_epi16(0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15);
  std::size_t n0 = 0;
  for (; n0 + 16 <= n_hidden; n0 += 16) {
    __m256i sum = _mm256_setzero_si256();
    for (std::size_t i = 0; i < n_features; ++i) {
      const auto* src = reinterpret_cast<const __m128i*>(w + i * n_hidden + n0);
      const __m256i wv = _mm256_cvtepi8_epi16(_mm_loadu_si128(src));
      const std::int64_t rel = std::clamp<std::int64_t>(std::int64_t{levels[i]} - static_cast<std::int64_t>(n0), 0, 16);
      const __m256i mask = _mm256_cmpgt_epi16(_mm256_set1_epi16(static_cast<std::int16_t>(rel)), lane);
      // (w ^ mask) - mask negates exactly the masked lanes
      sum = _mm256_add_epi16(sum, _mm256_sub_epi16(_mm256_xor_si256(wv, mask), mask));
    }
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(acc + n0), sum);
  }
  for (std::size_t n = n0; n < n_hidden; ++n) {
    std::int16_t s = 0;
    for (std::size_t i = 0; i < n_features; ++i) {
      const std::int8_t v = w[i * n_hidden + n];
      s = static_cast<std::int16_t>(static_cast<std::int64_t>(n) < levels[i] ? s - v : s + v);
    }
    acc[n] = s;
  }
}

void clip_avx2(const std::int16_t* acc, std::size_t n, std::int16_t kappa, std::int8_t* out) {
  const __m256i hi = _mm256_set1_epi16(kappa);
  const __m256i lo = _mm256_set1_epi16(static_cast<std::int16_t>(-kappa));
  std::size_t i = 0;
  for (; i + 16 <= n; i += 16) {
    __m256i v = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(acc + i));
    v = _mm256_min_epi16(_mm256_max_epi16(v, lo), hi);
    const __m256i packed = _mm256_permute4x64_epi64(_mm256_packs_epi16(v, v), 0b1000);
    _mm_storeu_si128(reinterpret_cast<__m128i*>(out + i), _mm256_castsi256_si128(packed));
  }
  for (; i < n; ++i) out[i] = static_cast<std::int8_t>(std::clamp<std::int16_t>(acc[i], -kappa, kappa));
}

std::int32_t hsum_epi32(__m256i v) {
  __m128i s = _mm_add_epi32(_mm256_castsi256_si128(v), _mm256_extracti128_si256(v, 1));
  s = _mm_add_epi32(s, _mm_shuffle_epi32(s, 0b01001110));
  s = _mm_add_epi32(s, _mm_shuffle_epi32(s, 0b10110001));
  return _mm_cvtsi128_si32(s);
}

void int_scores_avx2(const std::int8_t* weights, std::size_t n_out, const std::int8_t* h,
                     std::size_t n_hidden, std::int32_t* scores) {
  for (std::size_t l = 0; l < n_out; ++l) {
    const std::int8_t* row = weights + l * n_hidden;
    __m256i sum = _mm256_setzero_si256();
    std::size_t n = 0;
    for (; n + 16 <= n_hidden; n += 16) {
      const __m256i a = _mm256_cvtepi8_epi16(_mm_loadu_si128(reinterpret_cast<const __m128i*>(row + n)));
      const __m256i b = _mm256_cvtepi8_epi16(_mm_loadu_si128(reinterpret_cast<const __m128i*>(h + n)));
      sum = _mm256_add_epi32(sum, _mm256_madd_epi16(a, b));
    }
    std::int32_t s = hsum_epi32(sum);
    for (; n < n_hidden; ++n) s += std::int32_t{row[n]} * std::int32_t{h[n]};
    scores[l] = s;
  }
}

constexpr KernelTable kAvx2{Isa::avx2, bind_bundle_avx2, clip_avx2, int_scores_avx2};

}  // namespace

const KernelTable* avx2_table_impl() noexcept { return &kAvx2; }

}  // namespace intrvfl::kernels
