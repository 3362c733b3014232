#pragma once

#include <cstdint>
#include <vector>

#include "semcomm/imaging.hpp"

namespace semcomm {

struct ChannelConfig {
  double snr_db = 10.0;
  double mu = 1.0 / 3.0;  // channel symbols per source sample
  int block = 8;
  std::uint64_t seed = 0;
};

// Real-valued channel symbols plus the header the receiver needs to invert
// the normalisation.
struct SymbolPayload {
  std::vector<float> symbols;
  int width = 0;
  int height = 0;
  int channels = ImageBuf::kChannels;
  // Pre-normalisation RMS of the kept coefficients; symbols = coeff / gain.
  float gain = 1.0f;

  bool operator==(const SymbolPayload&) const = default;
};

struct TransmitResult {
  ImageBuf image;
  std::size_t symbols_sent = 0;
};

// ceil(mu * width * height * channels), robust to mu values like 1/3.
std::size_t symbol_budget(double mu, int width, int height, int channels = ImageBuf::kChannels);

// Coefficients kept per block when `budget` symbols are spread over `blocks`
// blocks of block*block coefficients: floor/ceil of the average, in order.
std::vector<int> coefficients_per_block(std::size_t budget, std::size_t blocks, int block);

// Zig-zag scan order for an n x n block: order[k] = row * n + col.
std::vector<int> zigzag_order(int n);

// Orthonormal DCT-II basis, row-major: basis[k * n + i].
std::vector<double> dct_basis(int n);

// 2D orthonormal DCT and its inverse on a row-major n x n block, using the
// active kernel table.
void dct2d_forward(const std::vector<double>& basis, int n, const double* in, double* out);
void dct2d_inverse(const std::vector<double>& basis, int n, const double* in, double* out);

// Noise variance for unit signal power at the given SNR.
double noise_variance(double snr_db);

// Block-DCT analog encoder at compression ratio mu with unit average power.
SymbolPayload encode(const ImageBuf& img, const ChannelConfig& cfg);

// Adds N(0, 10^(-snr/10)) per symbol. The i-th noise sample comes from the
// SplitMix64 stream seeded with `seed`: outputs 2j and 2j+1 feed one
// Box-Muller pair, cosine branch for even i, sine branch for odd i.
SymbolPayload awgn(const SymbolPayload& payload, double snr_db, std::uint64_t seed);

// Linear estimate 1/(1 + sigma^2), de-normalise, zero-fill, inverse DCT.
ImageBuf decode(const SymbolPayload& payload, const ChannelConfig& cfg);

TransmitResult transmit(const ImageBuf& img, const ChannelConfig& cfg);

// The k-th output of SplitMix64 started from `seed` (k counts from 0).
std::uint64_t splitmix64_at(std::uint64_t seed, std::uint64_t k);

// Standard normal sample i of the stream described for awgn().
double gaussian_at(std::uint64_t seed, std::uint64_t i);

}  // namespace semcomm
