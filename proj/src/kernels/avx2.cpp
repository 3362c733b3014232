// Compiled with -mavx2 only (no -mfma) so that floating-point kernels keep the
// scalar rounding sequence.
#include <immintrin.h>

#include <cstddef>

#include "kernels_internal.hpp"

namespace semcomm::kernels::detail {

namespace {

inline __m256i popcount_bytes(__m256i v) {
  const __m256i lut = _mm256_setr_epi8(0, 1, 1, 2, 1, 2, 2, 3, 1, 2, 2, 3, 2, 3, 3, 4,  //
                                       0, 1, 1, 2, 1, 2, 2, 3, 1, 2, 2, 3, 2, 3, 3, 4);
  const __m256i low_mask = _mm256_set1_epi8(0x0f);
  const __m256i lo = _mm256_and_si256(v, low_mask);
  const __m256i hi = _mm256_and_si256(_mm256_srli_epi16(v, 4), low_mask);
  return _mm256_add_epi8(_mm256_shuffle_epi8(lut, lo), _mm256_shuffle_epi8(lut, hi));
}

void hamming_batch_avx2(const std::uint64_t* query, std::span<const std::uint64_t> db,
                        std::span<std::uint16_t> out) {
  const __m256i q = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(query));
  const __m256i zero = _mm256_setzero_si256();
  for (std::size_t i = 0; i < out.size(); ++i) {
    const __m256i d = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(db.data() + i * 4));
    const __m256i sums = _mm256_sad_epu8(popcount_bytes(_mm256_xor_si256(q, d)), zero);
    const __m128i s = _mm_add_epi64(_mm256_castsi256_si128(sums), _mm256_extracti128_si256(sums, 1));
    const auto total = _mm_cvtsi128_si64(s) + _mm_extract_epi64(s, 1);
    out[i] = static_cast<std::uint16_t>(total);
  }
}

std::uint64_t sum_squared_diff_avx2(std::span<const std::uint8_t> a,
                                    std::span<const std::uint8_t> b) {
  const std::size_t n = a.size();
  std::size_t i = 0;
  __m256i acc64 = _mm256_setzero_si256();
  // Each 32-bit lane of madd holds at most 2 * 255^2; flush to 64-bit every
  // iteration so no intermediate can overflow.
  for (; i + 16 <= n; i += 16) {
    const __m256i va = _mm256_cvtepu8_epi16(_mm_loadu_si128(reinterpret_cast<const __m128i*>(a.data() + i)));
    const __m256i vb = _mm256_cvtepu8_epi16(_mm_loadu_si128(reinterpret_cast<const __m128i*>(b.data() + i)));
    const __m256i d = _mm256_sub_epi16(va, vb);
    const __m256i sq = _mm256_madd_epi16(d, d);
    acc64 = _mm256_add_epi64(acc64, _mm256_cvtepu32_epi64(_mm256_castsi256_si128(sq)));
    acc64 = _mm256_add_epi64(acc64, _mm256_cvtepu32_epi64(_mm256_extracti128_si256(sq, 1)));
  }
  alignas(32) std::uint64_t lanes[4];
  _mm256_store_si256(reinterpret_cast<__m256i*>(lanes), acc64);
  std::uint64_t acc = lanes[0] + lanes[1] + lanes[2] + lanes[3];
  for (; i < n; ++i) {
    const int d = static_cast<int>(a[i]) - static_cast<int>(b[i]);
    acc += static_cast<std::uint64_t>(d * d);
  }
  return acc;
}

void matmul_square_avx2(const double* a, const double* b, double* c, int n) {
  for (int i = 0; i < n; ++i) {
    int j = 0;
    for (; j + 4 <= n; j += 4) {
      __m256d acc = _mm256_setzero_pd();
      for (int k = 0; k < n; ++k) {
        const __m256d av = _mm256_set1_pd(a[i * n + k]);
        const __m256d bv = _mm256_loadu_pd(b + k * n + j);
        acc = _mm256_add_pd(acc, _mm256_mul_pd(av, bv));
      }
      _mm256_storeu_pd(c + i * n + j, acc);
    }
    for (; j < n; ++j) {
      double acc = 0.0;
      for (int k = 0; k < n; ++k) acc += a[i * n + k] * b[k * n + j];
      c[i * n + j] = acc;
    }
  }
}

}  // namespace

const KernelTable kAvx2Table{"avx2", hamming_batch_avx2, sum_squared_diff_avx2,
                             matmul_square_avx2};

}  // namespace semcomm::kernels::detail
