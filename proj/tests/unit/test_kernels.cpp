#include <gtest/gtest.h>

#include <bit>
#include <random>
#include <vector>

#include "semcomm/kernels.hpp"

namespace semcomm::kernels {
namespace {

class KernelEquivalence : public ::testing::Test {
 protected:
  void SetUp() override {
    avx2_ = avx2_kernels();
    if (avx2_ == nullptr) GTEST_SKIP() << "AVX2 kernels unavailable on this machine";
  }
  const KernelTable* avx2_ = nullptr;
};

TEST(ScalarKernels, HammingMatchesPopcount) {
  std::mt19937_64 rng(1);
  std::vector<std::uint64_t> db(4 * 37);
  for (auto& w : db) w = rng();
  std::uint64_t q[4] = {rng(), rng(), rng(), rng()};
  std::vector<std::uint16_t> out(37);
  scalar_kernels().hamming_batch(q, db, out);
  for (std::size_t i = 0; i < 37; ++i) {
    int want = 0;
    for (int w = 0; w < 4; ++w) want += std::popcount(q[w] ^ db[4 * i + w]);
    EXPECT_EQ(out[i], want);
  }
}

TEST(ScalarKernels, SumSquaredDiffMatchesLoop) {
  std::mt19937 rng(2);
  std::vector<std::uint8_t> a(1001), b(1001);
  for (auto& v : a) v = static_cast<std::uint8_t>(rng());
  for (auto& v : b) v = static_cast<std::uint8_t>(rng());
  std::uint64_t want = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const long d = static_cast<long>(a[i]) - b[i];
    want += static_cast<std::uint64_t>(d * d);
  }
  EXPECT_EQ(scalar_kernels().sum_squared_diff(a, b), want);
}

TEST(ScalarKernels, MatmulAgainstTripleLoop) {
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int n : {1, 3, 8, 13}) {
    std::vector<double> a(n * n), b(n * n), c(n * n);
    for (auto& v : a) v = u(rng);
    for (auto& v : b) v = u(rng);
    scalar_kernels().matmul_square(a.data(), b.data(), c.data(), n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double s = 0.0;
        for (int k = 0; k < n; ++k) s += a[i * n + k] * b[k * n + j];
        EXPECT_NEAR(c[i * n + j], s, 1e-12);
      }
  }
}

TEST_F(KernelEquivalence, HammingBitIdentical) {
  std::mt19937_64 rng(4);
  for (std::size_t count : {0u, 1u, 3u, 4u, 7u, 64u, 501u}) {
    std::vector<std::uint64_t> db(4 * count);
    for (auto& w : db) w = rng();
    std::uint64_t q[4] = {rng(), rng(), rng(), rng()};
    std::vector<std::uint16_t> a(count), b(count);
    scalar_kernels().hamming_batch(q, db, a);
    avx2_->hamming_batch(q, db, b);
    EXPECT_EQ(a, b) << "count " << count;
  }
}

TEST_F(KernelEquivalence, SumSquaredDiffBitIdentical) {
  std::mt19937 rng(5);
  for (std::size_t len : {0u, 1u, 15u, 16u, 31u, 32u, 33u, 1000u, 230400u}) {
    std::vector<std::uint8_t> a(len), b(len);
    for (auto& v : a) v = static_cast<std::uint8_t>(rng());
    for (auto& v : b) v = static_cast<std::uint8_t>(rng());
    EXPECT_EQ(scalar_kernels().sum_squared_diff(a, b), avx2_->sum_squared_diff(a, b)) << "len " << len;
  }
  // Extreme differences everywhere.
  std::vector<std::uint8_t> zeros(4099, 0), full(4099, 255);
  EXPECT_EQ(avx2_->sum_squared_diff(zeros, full), 4099ull * 255 * 255);
}

TEST_F(KernelEquivalence, MatmulBitIdentical) {
  std::mt19937 rng(6);
  std::normal_distribution<double> g;
  for (int n : {1, 2, 3, 4, 5, 8, 9, 16, 17}) {
    std::vector<double> a(n * n), b(n * n), c1(n * n), c2(n * n);
    for (auto& v : a) v = g(rng);
    for (auto& v : b) v = g(rng);
    scalar_kernels().matmul_square(a.data(), b.data(), c1.data(), n);
    avx2_->matmul_square(a.data(), b.data(), c2.data(), n);
    for (int i = 0; i < n * n; ++i) EXPECT_EQ(c1[i], c2[i]) << "n " << n << " index " << i;
  }
}

TEST(Dispatch, SelectScalarAlwaysWorks) {
  EXPECT_TRUE(select(Isa::kScalar));
  EXPECT_EQ(active().name, scalar_kernels().name);
  const bool have_avx2 = avx2_kernels() != nullptr;
  EXPECT_EQ(select(Isa::kAvx2), have_avx2);
  if (have_avx2) EXPECT_EQ(active().name, avx2_kernels()->name);
}

}  // namespace
}  // namespace semcomm::kernels
