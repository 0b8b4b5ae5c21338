#pragma once
// Independent reference computations used by the unit and acceptance tests.
// Nothing here calls the library's estimators.
#include <cstddef>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "rdjoint/kernel.hpp"

namespace oracle {

/// Weighted least squares of y on (1, x, ..., x^q) with weights K(x/h)/h on
/// one side, solved in natural coordinates with a full-pivot LU.
Eigen::VectorXd wls(const std::vector<double>& x, const std::vector<double>& y, double h,
                    int q, rdjoint::Side side, rdjoint::KernelKind kind);

/// Closed-form straight-line WLS (intercept, slope).
std::pair<double, double> wls_line(const std::vector<double>& x, const std::vector<double>& y,
                                   const std::vector<double>& w);

/// Gram entry (r, s) by direct summation: n^-1 sum 1{side} u^(r+s) K(u)/h.
double gram_entry(const std::vector<double>& x, double h, rdjoint::Side side,
                  rdjoint::KernelKind kind, int r, int s);

/// Sorts every same-side unit by (|x_i - x_m|, m) and applies the
/// nearest-neighbor formula to the first M.
double nn_sigma(const std::vector<double>& x, const std::vector<double>& zj,
                const std::vector<double>& zk, std::size_t i, rdjoint::Side side, int m);

/// e1' G^-1 Psi G^-1 e1 for one side with Psi built from the pairwise terms
/// U_ij by explicit double loops. beta is the natural-unit CDF fit.
double jackknife_raw(const std::vector<double>& x, double h, int p, rdjoint::Side side,
                     rdjoint::KernelKind kind, const Eigen::VectorXd& beta);

/// sum_k c[k] x^(k+1) with explicit powers.
double poly(const std::vector<double>& c, double x);

/// Quantile of max of k independent chi2_1 variables.
double max_chi2_quantile(int k, double alpha);

/// Kolmogorov-Smirnov distance between the sample and a continuous CDF.
double ks_distance(std::vector<double> sample, const std::function<double(double)>& cdf);

}  // namespace oracle
