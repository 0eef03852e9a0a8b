#include <algorithm>

#include "tcg/kernels.hpp"

namespace tcg::kernels {

double dot_scalar(std::span<const double> a, std::span<const double> b) noexcept {
  const std::size_t n = std::min(a.size(), b.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) sum += a[i] * b[i];
  return sum;
}

}  // namespace tcg::kernels
