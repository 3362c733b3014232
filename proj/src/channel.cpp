#include "semcomm/channel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "semcomm/error.hpp"
#include "semcomm/kernels.hpp"

namespace semcomm {

namespace {

constexpr double kCenter = 128.0;

void validate(const ChannelConfig& cfg) {
  if (!(cfg.mu > 0.0 && cfg.mu <= 1.0)) throw ParameterError("mu must be in (0, 1]");
  if (cfg.block < 2) throw ParameterError("block size must be >= 2");
  if (!std::isfinite(cfg.snr_db)) throw ParameterError("snr_db must be finite");
}

struct BlockGrid {
  int n;
  int blocks_x;
  int blocks_y;
  std::size_t per_channel() const { return static_cast<std::size_t>(blocks_x) * blocks_y; }
};

BlockGrid grid_for(int width, int height, int n) {
  return {n, (width + n - 1) / n, (height + n - 1) / n};
}

// Reads a block of zero-centred samples with edge replication past the image.
void load_block(const ImageBuf& img, int c, int bx, int by, int n, double* out) {
  for (int y = 0; y < n; ++y) {
    const int sy = std::min(by * n + y, img.height() - 1);
    for (int x = 0; x < n; ++x) {
      const int sx = std::min(bx * n + x, img.width() - 1);
      out[y * n + x] = img.at(sx, sy, c) - kCenter;
    }
  }
}

}  // namespace

std::size_t symbol_budget(double mu, int width, int height, int channels) {
  if (!(mu > 0.0 && mu <= 1.0)) throw ParameterError("mu must lie in (0, 1]");
  const double samples = static_cast<double>(width) * height * channels;
  const double raw = mu * samples;
  // 1/3 * 3072 evaluates to 1024.0000000000001 in binary; snap near-integers.
  const double nearest = std::round(raw);
  if (std::abs(raw - nearest) <= 1e-9 * std::max(1.0, raw)) return static_cast<std::size_t>(nearest);
  return static_cast<std::size_t>(std::ceil(raw));
}

std::vector<int> coefficients_per_block(std::size_t budget, std::size_t blocks, int block) {
  const std::size_t cap = static_cast<std::size_t>(block) * block;
  if (budget > blocks * cap) throw ShapeError("symbol budget exceeds available coefficients");
  std::vector<int> counts(blocks);
  for (std::size_t b = 0; b < blocks; ++b) {
    counts[b] = static_cast<int>((b + 1) * budget / blocks - b * budget / blocks);
  }
  return counts;
}

std::vector<int> zigzag_order(int n) {
  std::vector<int> order;
  order.reserve(static_cast<std::size_t>(n) * n);
  for (int s = 0; s < 2 * n - 1; ++s) {
    if (s % 2 == 0) {
      // up-right: row decreasing
      for (int row = std::min(s, n - 1); row >= 0 && s - row < n; --row) order.push_back(row * n + (s - row));
    } else {
      for (int col = std::min(s, n - 1); col >= 0 && s - col < n; --col) order.push_back((s - col) * n + col);
    }
  }
  return order;
}

std::vector<double> dct_basis(int n) {
  std::vector<double> basis(static_cast<std::size_t>(n) * n);
  for (int k = 0; k < n; ++k) {
    const double scale = k == 0 ? std::sqrt(1.0 / n) : std::sqrt(2.0 / n);
    for (int i = 0; i < n; ++i) {
      basis[static_cast<std::size_t>(k) * n + i] =
          scale * std::cos(std::numbers::pi * (2 * i + 1) * k / (2.0 * n));
    }
  }
  return basis;
}

void dct2d_forward(const std::vector<double>& basis, int n, const double* in, double* out) {
  // out = C * X * C^T
  std::vector<double> basis_t(basis.size());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) basis_t[j * n + i] = basis[i * n + j];
  std::vector<double> tmp(basis.size());
  const auto& k = kernels::active();
  k.matmul_square(basis.data(), in, tmp.data(), n);
  k.matmul_square(tmp.data(), basis_t.data(), out, n);
}

void dct2d_inverse(const std::vector<double>& basis, int n, const double* in, double* out) {
  // out = C^T * Y * C
  std::vector<double> basis_t(basis.size());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) basis_t[j * n + i] = basis[i * n + j];
  std::vector<double> tmp(basis.size());
  const auto& k = kernels::active();
  k.matmul_square(basis_t.data(), in, tmp.data(), n);
  k.matmul_square(tmp.data(), basis.data(), out, n);
}

double noise_variance(double snr_db) { return std::pow(10.0, -snr_db / 10.0); }

SymbolPayload encode(const ImageBuf& img, const ChannelConfig& cfg) {
  validate(cfg);
  if (img.empty()) throw ShapeError("cannot encode an empty image");

  const int n = cfg.block;
  const BlockGrid grid = grid_for(img.width(), img.height(), n);
  const std::size_t blocks = grid.per_channel() * ImageBuf::kChannels;
  const std::size_t budget = symbol_budget(cfg.mu, img.width(), img.height());
  const auto counts = coefficients_per_block(budget, blocks, n);
  const auto order = zigzag_order(n);
  const auto basis = dct_basis(n);

  std::vector<double> coeffs;
  coeffs.reserve(budget);
  std::vector<double> block(static_cast<std::size_t>(n) * n);
  std::vector<double> freq(block.size());
  std::size_t b = 0;
  for (int c = 0; c < ImageBuf::kChannels; ++c) {
    for (int by = 0; by < grid.blocks_y; ++by) {
      for (int bx = 0; bx < grid.blocks_x; ++bx, ++b) {
        load_block(img, c, bx, by, n, block.data());
        dct2d_forward(basis, n, block.data(), freq.data());
        for (int k = 0; k < counts[b]; ++k) coeffs.push_back(freq[order[k]]);
      }
    }
  }

  double energy = 0.0;
  for (double v : coeffs) energy += v * v;
  SymbolPayload payload;
  payload.width = img.width();
  payload.height = img.height();
  // The gain travels as a float, so normalise by the float value itself.
  payload.gain = energy > 0.0 ? static_cast<float>(std::sqrt(energy / coeffs.size())) : 1.0f;
  if (payload.gain == 0.0f) payload.gain = 1.0f;
  payload.symbols.reserve(coeffs.size());
  for (double v : coeffs) payload.symbols.push_back(static_cast<float>(v / payload.gain));
  return payload;
}

std::uint64_t splitmix64_at(std::uint64_t seed, std::uint64_t k) {
  std::uint64_t z = seed + (k + 1) * 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

double gaussian_at(std::uint64_t seed, std::uint64_t i) {
  const std::uint64_t pair = i / 2;
  // u1 in (0, 1], u2 in [0, 1), each from the top 53 bits.
  const double u1 = (static_cast<double>(splitmix64_at(seed, 2 * pair) >> 11) + 1.0) * 0x1.0p-53;
  const double u2 = static_cast<double>(splitmix64_at(seed, 2 * pair + 1) >> 11) * 0x1.0p-53;
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * std::numbers::pi * u2;
  return i % 2 == 0 ? r * std::cos(theta) : r * std::sin(theta);
}

SymbolPayload awgn(const SymbolPayload& payload, double snr_db, std::uint64_t seed) {
  if (!std::isfinite(snr_db)) throw ParameterError("snr_db must be finite");
  const double sigma = std::sqrt(noise_variance(snr_db));
  SymbolPayload out = payload;
  for (std::size_t i = 0; i < out.symbols.size(); ++i) {
    out.symbols[i] = static_cast<float>(out.symbols[i] + sigma * gaussian_at(seed, i));
  }
  return out;
}

ImageBuf decode(const SymbolPayload& payload, const ChannelConfig& cfg) {
  validate(cfg);
  if (payload.width < 1 || payload.height < 1 || payload.channels != ImageBuf::kChannels) {
    throw FormatError("payload has invalid dimensions");
  }
  const int n = cfg.block;
  const BlockGrid grid = grid_for(payload.width, payload.height, n);
  const std::size_t blocks = grid.per_channel() * ImageBuf::kChannels;
  const std::size_t budget = symbol_budget(cfg.mu, payload.width, payload.height);
  if (payload.symbols.size() != budget) {
    throw FormatError("payload symbol count does not match the budget for its dimensions");
  }
  const auto counts = coefficients_per_block(budget, blocks, n);
  const auto order = zigzag_order(n);
  const auto basis = dct_basis(n);
  const double estimator = 1.0 / (1.0 + noise_variance(cfg.snr_db));
  const double scale = estimator * payload.gain;

  ImageBuf out(payload.width, payload.height);
  std::vector<double> freq(static_cast<std::size_t>(n) * n);
  std::vector<double> block(freq.size());
  std::size_t b = 0;
  std::size_t s = 0;
  for (int c = 0; c < ImageBuf::kChannels; ++c) {
    for (int by = 0; by < grid.blocks_y; ++by) {
      for (int bx = 0; bx < grid.blocks_x; ++bx, ++b) {
        std::fill(freq.begin(), freq.end(), 0.0);
        for (int k = 0; k < counts[b]; ++k) freq[order[k]] = payload.symbols[s++] * scale;
        dct2d_inverse(basis, n, freq.data(), block.data());
        for (int y = 0; y < n; ++y) {
          const int py = by * n + y;
          if (py >= payload.height) break;
          for (int x = 0; x < n; ++x) {
            const int px = bx * n + x;
            if (px >= payload.width) break;
            const long v = std::lround(block[y * n + x] + kCenter);
            out.at(px, py, c) = static_cast<std::uint8_t>(std::clamp(v, 0L, 255L));
          }
        }
      }
    }
  }
  return out;
}

TransmitResult transmit(const ImageBuf& img, const ChannelConfig& cfg) {
  const SymbolPayload sent = encode(img, cfg);
  const SymbolPayload received = awgn(sent, cfg.snr_db, cfg.seed);
  return {decode(received, cfg), sent.symbols.size()};
}

}  // namespace semcomm
