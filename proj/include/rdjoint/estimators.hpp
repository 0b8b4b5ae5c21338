#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "rdjoint/kernel.hpp"

namespace rdjoint {

enum class Target { Mean, Density };

/// One-sided local polynomial fit. beta is in natural units: beta[s] is the
/// coefficient on x^s. For means beta[0] is the boundary mean; for the
/// density beta[1] is the boundary density and beta[0] the CDF level
/// (relative to F(0-) on the right side, absolute on the left).
struct BoundaryFit {
  Eigen::VectorXd beta;
  Side side = Side::Right;
  Target target = Target::Mean;
  SideGram gram;
  double bandwidth = 0.0;
  bool negative_density = false;
};

struct JumpEstimate {
  double tau = 0.0;
  BoundaryFit plus_fit;
  BoundaryFit minus_fit;
};

/// Empirical distribution function over the full sample, F(t) = #{x_j <= t}/n.
/// Immutable after construction.
class EmpiricalCdf {
 public:
  explicit EmpiricalCdf(std::span<const double> x);

  double operator()(double t) const;
  /// #{x_j < 0} / n
  double below_zero() const { return below_zero_; }
  std::size_t n() const { return sorted_.size(); }
  const std::vector<double>& sorted() const { return sorted_; }

  /// Regression responses for the density fit on one side: F(x_i) - F(0-)
  /// on the right, F(x_i) on the left, zero off-side. These are the levels
  /// the jackknife pair terms are centered on.
  std::vector<double> side_response(std::span<const double> x, Side side) const;

 private:
  std::vector<double> sorted_;
  double below_zero_ = 0.0;
};

BoundaryFit fit_mean_boundary(std::span<const double> x, std::span<const double> z, double h,
                              int order, Side side, KernelKind kind);

BoundaryFit fit_density_boundary(std::span<const double> x, double h_f, int order, Side side,
                                 KernelKind kind);
BoundaryFit fit_density_boundary(std::span<const double> x, const EmpiricalCdf& cdf, double h_f,
                                 int order, Side side, KernelKind kind);

/// Fit sharing a prebuilt design (many covariates at one bandwidth).
BoundaryFit fit_mean_boundary(const OneSidedDesign& design, std::span<const double> z);

JumpEstimate tau_z(std::span<const double> x, std::span<const double> z, double h, int order,
                   KernelKind kind);
JumpEstimate tau_f(std::span<const double> x, double h_f, int order, KernelKind kind);

inline constexpr int kDefaultMeanOrder = 2;
inline constexpr int kDefaultDensityOrder = 3;
inline constexpr double kRuleOfThumbConstant = 2.5;

/// Rule-of-thumb bandwidth c * sd(x) * n^(-1/(2*order+3)) * n^(-0.05) for
/// mean fits of the given order. The extra n^(-0.05) undersmooths so that
/// n*h^(2*order+3) -> 0.
double rule_of_thumb_mean_bandwidth(std::span<const double> x, int order,
                                    double constant = kRuleOfThumbConstant);

/// Density analogue with rate n^(-1/(2*order+1)) * n^(-0.05).
double rule_of_thumb_density_bandwidth(std::span<const double> x, int order,
                                       double constant = kRuleOfThumbConstant);

}  // namespace rdjoint
