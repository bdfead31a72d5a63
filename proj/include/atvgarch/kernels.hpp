#pragma once

// Inner loops of the truncated variance filter.
//
// Every kernel exists as a scalar reference implementation plus SIMD variants
// (AVX2+FMA on x86-64, NEON on AArch64). The variant is picked once at startup
// from the CPU feature bits; ATVGARCH_SIMD=scalar in the environment forces the
// reference path. Variants differ from the reference only by FMA rounding.

#include <cstddef>
#include <span>
#include <string_view>

namespace atvgarch::kernels {

enum class Backend { scalar, avx2, neon };

std::string_view to_string(Backend b) noexcept;

/// Truncated causal convolution:
///   out[t] = sum_{k=0}^{min(m-1, t-shift)} coef[k] * series[t - shift - k]
/// where m = coef.size(). Entries with t < shift are zero. out.size() must
/// equal series.size().
using LaggedConvFn = void (*)(std::span<const double> coef, std::span<const double> series,
                              std::size_t shift, std::span<double> out);

/// sum_i a[i] * b[i]
using DotFn = double (*)(std::span<const double> a, std::span<const double> b);

struct KernelTable {
  Backend backend;
  LaggedConvFn lagged_conv;
  DotFn dot;
};

/// The table selected for this process.
const KernelTable& active() noexcept;

/// Table for a specific backend; nullptr when not compiled in or not
/// supported by the running CPU.
const KernelTable* table_for(Backend b) noexcept;

/// Override the process-wide selection (tests, benchmarks). Returns false if
/// the backend is unavailable.
bool select(Backend b) noexcept;

inline void lagged_conv(std::span<const double> coef, std::span<const double> series,
                        std::size_t shift, std::span<double> out) {
  active().lagged_conv(coef, series, shift, out);
}

inline double dot(std::span<const double> a, std::span<const double> b) {
  return active().dot(a, b);
}

namespace scalar {
void lagged_conv(std::span<const double> coef, std::span<const double> series, std::size_t shift,
                 std::span<double> out);
double dot(std::span<const double> a, std::span<const double> b);
}  // namespace scalar

namespace avx2 {
void lagged_conv(std::span<const double> coef, std::span<const double> series, std::size_t shift,
                 std::span<double> out);
double dot(std::span<const double> a, std::span<const double> b);
}  // namespace avx2

namespace neon {
void lagged_conv(std::span<const double> coef, std::span<const double> series, std::size_t shift,
                 std::span<double> out);
double dot(std::span<const double> a, std::span<const double> b);
}  // namespace neon

}  // namespace atvgarch::kernels
