#include <arm_neon.h>

#include <algorithm>

#include "atvgarch/kernels.hpp"

namespace atvgarch::kernels::neon {

void lagged_conv(std::span<const double> coef, std::span<const double> series, std::size_t shift,
                 std::span<double> out) {
  const std::size_t n = series.size();
  const std::size_t m = coef.size();
  if (m == 0) {
    std::fill(out.begin(), out.end(), 0.0);
    return;
  }
  const std::size_t full = std::min(n, shift + m - 1);
  scalar::lagged_conv(coef, series.first(full), shift, out.first(full));

  const double* x = series.data();
  const double* c = coef.data();
  std::size_t t = full;
  for (; t + 8 <= n; t += 8) {
    float64x2_t a0 = vdupq_n_f64(0.0);
    float64x2_t a1 = vdupq_n_f64(0.0);
    float64x2_t a2 = vdupq_n_f64(0.0);
    float64x2_t a3 = vdupq_n_f64(0.0);
    const double* base = x + (t - shift);
    for (std::size_t k = 0; k < m; ++k) {
      const float64x2_t ck = vdupq_n_f64(c[k]);
      const double* p = base - k;
      a0 = vfmaq_f64(a0, ck, vld1q_f64(p));
      a1 = vfmaq_f64(a1, ck, vld1q_f64(p + 2));
      a2 = vfmaq_f64(a2, ck, vld1q_f64(p + 4));
      a3 = vfmaq_f64(a3, ck, vld1q_f64(p + 6));
    }
    vst1q_f64(out.data() + t, a0);
    vst1q_f64(out.data() + t + 2, a1);
    vst1q_f64(out.data() + t + 4, a2);
    vst1q_f64(out.data() + t + 6, a3);
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
  float64x2_t s0 = vdupq_n_f64(0.0);
  float64x2_t s1 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    s0 = vfmaq_f64(s0, vld1q_f64(a.data() + i), vld1q_f64(b.data() + i));
    s1 = vfmaq_f64(s1, vld1q_f64(a.data() + i + 2), vld1q_f64(b.data() + i + 2));
  }
  double acc = vaddvq_f64(vaddq_f64(s0, s1));
  for (; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

}  // namespace atvgarch::kernels::neon
