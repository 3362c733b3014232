#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string_view>

namespace semcomm::kernels {

// Data-parallel inner loops. Every implementation in a table must produce
// bit-identical results to the scalar reference; the AVX2 variants only
// reorganise work across lanes, never the per-element operation order.
struct KernelTable {
  std::string_view name;

  // out[i] = popcount(query ^ db[i]) for 256-bit descriptors stored as four
  // little-endian 64-bit words each. out.size() must equal db.size() / 4.
  void (*hamming_batch)(const std::uint64_t* query, std::span<const std::uint64_t> db,
                        std::span<std::uint16_t> out);

  // Sum of squared differences of two equally sized byte arrays.
  std::uint64_t (*sum_squared_diff)(std::span<const std::uint8_t> a,
                                    std::span<const std::uint8_t> b);

  // c = a * b for row-major n x n matrices; c[i][j] accumulates k in order.
  void (*matmul_square)(const double* a, const double* b, double* c, int n);
};

enum class Isa { kScalar, kAvx2 };

const KernelTable& scalar_kernels();
// nullptr when the binary was built without AVX2 support or the CPU lacks it.
const KernelTable* avx2_kernels();

// Table chosen at first use from CPU features.
const KernelTable& active();

// Forces a specific implementation; returns false when unavailable.
bool select(Isa isa);

}  // namespace semcomm::kernels
