#include <immintrin.h>

#include <algorithm>

#include "atvgarch/kernels.hpp"

namespace atvgarch::kernels::avx2 {

namespace {

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  __m128d sh = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_add_sd(lo, sh));
}

}  // namespace

// Vectorized over t: each lane owns one output and walks k in the same order
// as the scalar reference, so lanes only differ from it by FMA rounding.
void lagged_conv(std::span<const double> coef, std::span<const double> series, std::size_t shift,
                 std::span<double> out) {
  const std::size_t n = series.size();
  const std::size_t m = coef.size();
  if (m == 0) {
    std::fill(out.begin(), out.end(), 0.0);
    return;
  }
  // Outputs with a full window start at t = shift + m - 1.
  const std::size_t full = std::min(n, shift + m - 1);
  scalar::lagged_conv(coef, series.first(full), shift, out.first(full));

  const double* x = series.data();
  const double* c = coef.data();
  std::size_t t = full;
  for (; t + 16 <= n; t += 16) {
    __m256d a0 = _mm256_setzero_pd();
    __m256d a1 = _mm256_setzero_pd();
    __m256d a2 = _mm256_setzero_pd();
    __m256d a3 = _mm256_setzero_pd();
    const double* base = x + (t - shift);
    for (std::size_t k = 0; k < m; ++k) {
      const __m256d ck = _mm256_broadcast_sd(c + k);
      const double* p = base - k;
      a0 = _mm256_fmadd_pd(ck, _mm256_loadu_pd(p), a0);
      a1 = _mm256_fmadd_pd(ck, _mm256_loadu_pd(p + 4), a1);
      a2 = _mm256_fmadd_pd(ck, _mm256_loadu_pd(p + 8), a2);
      a3 = _mm256_fmadd_pd(ck, _mm256_loadu_pd(p + 12), a3);
    }
    _mm256_storeu_pd(out.data() + t, a0);
    _mm256_storeu_pd(out.data() + t + 4, a1);
    _mm256_storeu_pd(out.data() + t + 8, a2);
    _mm256_storeu_pd(out.data() + t + 12, a3);
  }
  for (; t + 4 <= n; t += 4) {
    __m256d a0 = _mm256_setzero_pd();
    const double* base = x + (t - shift);
    for (std::size_t k = 0; k < m; ++k)
      a0 = _mm256_fmadd_pd(_mm256_broadcast_sd(c + k), _mm256_loadu_pd(base - k), a0);
    _mm256_storeu_pd(out.data() + t, a0);
  }
  for (; t < n; ++t) {
    const double* base = x + (t - shift);
    double acc = 0.0;
    for (std::size_t k = 0; k < m; ++k) acc += c[k] * base[-static_cast<std::ptrdiff_t>(k)];
    out[t] = acc;
  }
}

double dot(std::span<const double> a, std::span<const double> b) {
  const std::size_t n = a.size();
  __m256d s0 = _mm256_setzero_pd();
  __m256d s1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    s0 = _mm256_fmadd_pd(_mm256_loadu_pd(a.data() + i), _mm256_loadu_pd(b.data() + i), s0);
    s1 = _mm256_fmadd_pd(_mm256_loadu_pd(a.data() + i + 4), _mm256_loadu_pd(b.data() + i + 4), s1);
  }
  double acc = hsum(_mm256_add_pd(s0, s1));
  for (; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

}  // namespace atvgarch::kernels::avx2
