#pragma once

// Data-parallel inner loops behind the estimators. Every kernel has a scalar
// reference implementation; an AVX2+FMA variant is selected at runtime when
// the CPU supports it. RDJOINT_SIMD=scalar forces the reference path.

#include <cstddef>
#include <string_view>

namespace rdjoint::simd {

enum class Isa { Scalar, Avx2 };

inline constexpr int kMaxOrder = 8;

struct Kernels {
  /// u[i] = x[i]/h and w[i] = K(u[i])/h restricted to the side
  /// (right: x >= 0, left: x < 0); w is zero off-side or outside |u| <= 1.
  /// kernel: 0 triangular, 1 uniform.
  void (*side_weights)(const double* x, std::size_t n, double h, bool right, int kernel,
                       double* u, double* w);

  /// pow_sums[m] = sum_i w[i] u[i]^m for m = 0..2q.
  /// If y != nullptr, cross_sums[m] = sum_i w[i] u[i]^m y[i] for m = 0..q.
  void (*weighted_moments)(const double* u, const double* w, const double* y, std::size_t n,
                           int q, double* pow_sums, double* cross_sums);

  /// Monte Carlo block for max-type statistics. xi holds k rows of `count`
  /// standard normals (row-major, row stride `count`); g = root * xi.
  /// max_sq[b] = max_j g[j][b]^2, max_stud[b] = max_j g[j][b]^2 * inv_var[j].
  /// scratch must hold `count` doubles.
  void (*mc_block_max)(const double* root, std::size_t k, const double* xi, std::size_t count,
                       const double* inv_var, double* max_sq, double* max_stud, double* scratch);
};

bool isa_available(Isa isa);
const Kernels& kernels_for(Isa isa);

/// Kernels chosen once per process: best available ISA unless overridden
/// by RDJOINT_SIMD.
const Kernels& kernels();
Isa active_isa();
std::string_view isa_name(Isa isa);

namespace detail {
extern const Kernels scalar_kernels;
#if defined(RDJOINT_HAVE_AVX2)
extern const Kernels avx2_kernels;
#endif
}  // namespace detail

}  // namespace rdjoint::simd
