#include <bit>
#include <cstddef>

#include "kernels_internal.hpp"

namespace semcomm::kernels::detail {

namespace {

void hamming_batch_scalar(const std::uint64_t* query, std::span<const std::uint64_t> db,
                          std::span<std::uint16_t> out) {
  for (std::size_t i = 0; i < out.size(); ++i) {
    const std::uint64_t* d = db.data() + i * 4;
    int bits = 0;
    for (int w = 0; w < 4; ++w) bits += std::popcount(query[w] ^ d[w]);
    out[i] = static_cast<std::uint16_t>(bits);
  }
}

std::uint64_t sum_squared_diff_scalar(std::span<const std::uint8_t> a,
                                      std::span<const std::uint8_t> b) {
  std::uint64_t acc = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const int d = static_cast<int>(a[i]) - static_cast<int>(b[i]);
    acc += static_cast<std::uint64_t>(d * d);
  }
  return acc;
}

void matmul_square_scalar(const double* a, const double* b, double* c, int n) {
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      double acc = 0.0;
      for (int k = 0; k < n; ++k) acc += a[i * n + k] * b[k * n + j];
      c[i * n + j] = acc;
    }
  }
}

}  // namespace

const KernelTable kScalarTable{"scalar", hamming_batch_scalar, sum_squared_diff_scalar,
                               matmul_square_scalar};

}  // namespace semcomm::kernels::detail
