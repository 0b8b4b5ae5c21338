#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace rdjoint {

enum class KernelKind { Triangular, Uniform };
enum class Side { Right, Left };

std::string_view to_string(KernelKind kind);
std::string_view to_string(Side side);
KernelKind parse_kernel(std::string_view name);

/// Unit-support kernel weight; zero for |u| > 1.
double kernel_eval(KernelKind kind, double u);

inline bool on_side(Side side, double x) { return side == Side::Right ? x >= 0.0 : x < 0.0; }

/// Reciprocal condition number below which a Gram matrix counts as singular.
inline constexpr double kSingularRcond = 1e-12;

/// Weighted polynomial moments of one side of the cutoff, in the rescaled
/// coordinate u = x/h:  gamma(r,s) = n^-1 sum_i 1{side} u^r u^s K(u)/h.
struct SideGram {
  Eigen::MatrixXd gamma;
  Side side = Side::Right;
  int order = 1;
  double bandwidth = 0.0;
  std::size_t effective_n = 0;
  std::size_t n = 0;
  double rcond = 0.0;

  bool singular() const { return effective_n < static_cast<std::size_t>(order) + 1 || rcond < kSingularRcond; }
};

/// Scaled regressors and kernel weights for one side and bandwidth. Off-side
/// and out-of-support observations carry w = 0 and u = 0.
struct OneSidedDesign {
  std::vector<double> u;
  std::vector<double> w;  // K(x/h)/h on the side, else 0
  SideGram gram;

  /// Natural-unit WLS coefficients of y on (1, x, ..., x^q). Requires a
  /// non-singular gram.
  Eigen::VectorXd solve(std::span<const double> y) const;

  /// e_row' gamma^-1, the row of the inverse Gram matrix used by the
  /// equivalent-kernel weights.
  Eigen::VectorXd inverse_row(int row) const;

 private:
  friend OneSidedDesign make_design(std::span<const double>, double, Side, int, KernelKind, bool);
  Eigen::LDLT<Eigen::MatrixXd> factor_;
};

/// Builds the design without validating it.
OneSidedDesign make_design(std::span<const double> x, double h, Side side, int order,
                           KernelKind kind, bool validate);

/// Gram matrix without the singularity check.
SideGram accumulate_side_gram(std::span<const double> x, double h, Side side, int order,
                              KernelKind kind);

/// Gram matrix; throws SingularDesign if effective_n < order + 1 or the
/// reciprocal condition number falls below kSingularRcond.
SideGram side_gram(std::span<const double> x, double h, Side side, int order, KernelKind kind);

}  // namespace rdjoint
