// Compiled with -mavx2 -mfma; only reached after a runtime CPU check.
#include <immintrin.h>

#include <algorithm>
#include <cmath>

#include "rdjoint/simd.hpp"

namespace rdjoint::simd {
namespace {

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  __m128d sh = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_add_sd(lo, sh));
}

void side_weights_avx2(const double* x, std::size_t n, double h, bool right, int kernel,
                       double* u, double* w) {
  const double inv_h = 1.0 / h;
  const __m256d vinv = _mm256_set1_pd(inv_h);
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d half = _mm256_set1_pd(0.5);
  const __m256d zero = _mm256_setzero_pd();
  const __m256d sign_mask = _mm256_set1_pd(-0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d xv = _mm256_loadu_pd(x + i);
    const __m256d side = right ? _mm256_cmp_pd(xv, zero, _CMP_GE_OQ) : _mm256_cmp_pd(xv, zero, _CMP_LT_OQ);
    const __m256d uv = _mm256_mul_pd(xv, vinv);
    const __m256d a = _mm256_andnot_pd(sign_mask, uv);
    __m256d k;
    if (kernel == 0) {
      k = _mm256_max_pd(_mm256_sub_pd(one, a), zero);
    } else {
      k = _mm256_and_pd(_mm256_cmp_pd(a, one, _CMP_LE_OQ), half);
    }
    const __m256d wv = _mm256_and_pd(side, _mm256_mul_pd(k, vinv));
    const __m256d pos = _mm256_cmp_pd(wv, zero, _CMP_GT_OQ);
    _mm256_storeu_pd(w + i, wv);
    _mm256_storeu_pd(u + i, _mm256_and_pd(pos, uv));
  }
  for (; i < n; ++i) {
    const bool on_side = right ? (x[i] >= 0.0) : (x[i] < 0.0);
    const double ui = x[i] * inv_h;
    const double a = std::fabs(ui);
    const double kk = kernel == 0 ? std::max(1.0 - a, 0.0) : (a <= 1.0 ? 0.5 : 0.0);
    const double wi = on_side ? kk * inv_h : 0.0;
    w[i] = wi;
    u[i] = wi > 0.0 ? ui : 0.0;
  }
}

void weighted_moments_avx2(const double* u, const double* w, const double* y, std::size_t n,
                           int q, double* pow_sums, double* cross_sums) {
  const int top = 2 * q;
  __m256d acc[2 * kMaxOrder + 1];
  __m256d cacc[kMaxOrder + 1];
  for (int m = 0; m <= top; ++m) acc[m] = _mm256_setzero_pd();
  for (int m = 0; m <= q; ++m) cacc[m] = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d uv = _mm256_loadu_pd(u + i);
    __m256d p = _mm256_loadu_pd(w + i);
    if (y != nullptr) {
      const __m256d yv = _mm256_loadu_pd(y + i);
      for (int m = 0; m <= q; ++m) {
        acc[m] = _mm256_add_pd(acc[m], p);
        cacc[m] = _mm256_fmadd_pd(p, yv, cacc[m]);
        p = _mm256_mul_pd(p, uv);
      }
      for (int m = q + 1; m <= top; ++m) {
        acc[m] = _mm256_add_pd(acc[m], p);
        p = _mm256_mul_pd(p, uv);
      }
    } else {
      for (int m = 0; m <= top; ++m) {
        acc[m] = _mm256_add_pd(acc[m], p);
        p = _mm256_mul_pd(p, uv);
      }
    }
  }
  for (int m = 0; m <= top; ++m) pow_sums[m] = hsum(acc[m]);
  if (y != nullptr) {
    for (int m = 0; m <= q; ++m) cross_sums[m] = hsum(cacc[m]);
  }
  for (; i < n; ++i) {
    if (w[i] == 0.0) continue;
    double p = w[i];
    for (int m = 0; m <= top; ++m) {
      pow_sums[m] += p;
      if (y != nullptr && m <= q) cross_sums[m] += p * y[i];
      p *= u[i];
    }
  }
}

void mc_block_max_avx2(const double* root, std::size_t k, const double* xi, std::size_t count,
                       const double* inv_var, double* max_sq, double* max_stud, double* scratch) {
  std::fill(max_sq, max_sq + count, 0.0);
  std::fill(max_stud, max_stud + count, 0.0);
  for (std::size_t j = 0; j < k; ++j) {
    std::fill(scratch, scratch + count, 0.0);
    for (std::size_t m = 0; m < k; ++m) {
      const double s = root[j * k + m];
      if (s == 0.0) continue;
      const __m256d sv = _mm256_set1_pd(s);
      const double* row = xi + m * count;
      std::size_t b = 0;
      for (; b + 4 <= count; b += 4) {
        _mm256_storeu_pd(scratch + b,
                         _mm256_fmadd_pd(sv, _mm256_loadu_pd(row + b), _mm256_loadu_pd(scratch + b)));
      }
      for (; b < count; ++b) scratch[b] = std::fma(s, row[b], scratch[b]);
    }
    const __m256d iv = _mm256_set1_pd(inv_var[j]);
    std::size_t b = 0;
    for (; b + 4 <= count; b += 4) {
      const __m256d g = _mm256_loadu_pd(scratch + b);
      const __m256d sq = _mm256_mul_pd(g, g);
      _mm256_storeu_pd(max_sq + b, _mm256_max_pd(_mm256_loadu_pd(max_sq + b), sq));
      _mm256_storeu_pd(max_stud + b,
                       _mm256_max_pd(_mm256_loadu_pd(max_stud + b), _mm256_mul_pd(sq, iv)));
    }
    for (; b < count; ++b) {
      const double sq = scratch[b] * scratch[b];
      max_sq[b] = std::max(max_sq[b], sq);
      max_stud[b] = std::max(max_stud[b], sq * inv_var[j]);
    }
  }
}

}  // namespace

namespace detail {
const Kernels avx2_kernels{&side_weights_avx2, &weighted_moments_avx2, &mc_block_max_avx2};
}  // namespace detail

}  // namespace rdjoint::simd
