#include "atvgarch/kernels.hpp"

#include <algorithm>

namespace atvgarch::kernels::scalar {

void lagged_conv(std::span<const double> coef, std::span<const double> series, std::size_t shift,
                 std::span<double> out) {
  const std::size_t n = series.size();
  const std::size_t m = coef.size();
  for (std::size_t t = 0; t < n; ++t) {
    double acc = 0.0;
    if (t >= shift) {
      const std::size_t base = t - shift;
      const std::size_t kmax = std::min(m, base + 1);
      for (std::size_t k = 0; k < kmax; ++k) acc += coef[k] * series[base - k];
    }
    out[t] = acc;
  }
}

double dot(std::span<const double> a, std::span<const double> b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

}  // namespace atvgarch::kernels::scalar
