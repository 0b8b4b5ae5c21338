#include <algorithm>
#include <cmath>

#include "rdjoint/simd.hpp"

namespace rdjoint::simd {
namespace {

void side_weights_scalar(const double* x, std::size_t n, double h, bool right, int kernel,
                         double* u, double* w) {
  const double inv_h = 1.0 / h;
  for (std::size_t i = 0; i < n; ++i) {
    const bool on_side = right ? (x[i] >= 0.0) : (x[i] < 0.0);
    const double ui = x[i] * inv_h;
    const double a = std::fabs(ui);
    double k = 0.0;
    if (kernel == 0) {
      k = std::max(1.0 - a, 0.0);
    } else {
      k = a <= 1.0 ? 0.5 : 0.0;
    }
    const double wi = on_side ? k * inv_h : 0.0;
    w[i] = wi;
    u[i] = wi > 0.0 ? ui : 0.0;
  }
}

void weighted_moments_scalar(const double* u, const double* w, const double* y, std::size_t n,
                             int q, double* pow_sums, double* cross_sums) {
  const int top = 2 * q;
  std::fill(pow_sums, pow_sums + top + 1, 0.0);
  if (y != nullptr) std::fill(cross_sums, cross_sums + q + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    if (w[i] == 0.0) continue;
    double p = w[i];
    for (int m = 0; m <= top; ++m) {
      pow_sums[m] += p;
      if (y != nullptr && m <= q) cross_sums[m] += p * y[i];
      p *= u[i];
    }
  }
}

void mc_block_max_scalar(const double* root, std::size_t k, const double* xi, std::size_t count,
                         const double* inv_var, double* max_sq, double* max_stud, double* scratch) {
  std::fill(max_sq, max_sq + count, 0.0);
  std::fill(max_stud, max_stud + count, 0.0);
  for (std::size_t j = 0; j < k; ++j) {
    std::fill(scratch, scratch + count, 0.0);
    for (std::size_t m = 0; m < k; ++m) {
      const double s = root[j * k + m];
      if (s == 0.0) continue;
      const double* row = xi + m * count;
      for (std::size_t b = 0; b < count; ++b) scratch[b] += s * row[b];
    }
    const double iv = inv_var[j];
    for (std::size_t b = 0; b < count; ++b) {
      const double sq = scratch[b] * scratch[b];
      max_sq[b] = std::max(max_sq[b], sq);
      max_stud[b] = std::max(max_stud[b], sq * iv);
    }
  }
}

}  // namespace

namespace detail {
const Kernels scalar_kernels{&side_weights_scalar, &weighted_moments_scalar, &mc_block_max_scalar};
}  // namespace detail

}  // namespace rdjoint::simd
