#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "rdjoint/estimators.hpp"
#include "rdjoint/kernel.hpp"

namespace rdjoint {

inline constexpr int kDefaultNeighbors = 3;

/// Joint covariance of the scaled statistic vector, block-diagonal with the
/// covariate block on top and the density variance in the last slot.
struct CovarianceEstimate {
  Eigen::MatrixXd v;
  Eigen::MatrixXd vz;
  double vf = 0.0;
  int neighbors_m = kDefaultNeighbors;
  int mean_order = kDefaultMeanOrder;
  int density_order = kDefaultDensityOrder;
  std::vector<double> bandwidths;  // h_1..h_d
  double density_bandwidth = 0.0;
};

/// Indices of the M nearest same-side units to unit i (excluding i), by
/// |x_i - x_m| with ties broken by lower index. Throws InsufficientNeighbors.
std::vector<std::size_t> nearest_neighbors(std::span<const double> x, std::size_t i, Side side,
                                           int m);

/// Nearest-neighbor estimate of the conditional covariance of (zj, zk) at x_i.
double nn_sigma_pair(std::span<const double> x, std::span<const double> zj,
                     std::span<const double> zk, std::size_t i, Side side, int m);

/// Nearest-neighbor residuals z_i - mean(z over the M neighbors of i) for every
/// unit on the side; zero for off-side units. Neighbor search is done once
/// for all columns. Units with `needed[i] == false` are skipped (residual 0).
std::vector<std::vector<double>> nn_residuals(std::span<const double> x,
                                              const std::vector<std::vector<double>>& z,
                                              Side side, int m, const std::vector<bool>& needed);

/// d x d covariance block of sqrt(n h_k) * tau_z_k.
Eigen::MatrixXd covariance_block_z(std::span<const double> x,
                                   const std::vector<std::vector<double>>& z,
                                   std::span<const double> h, int order, int m, KernelKind kind);

/// Jackknife variance of sqrt(n h_f) * tau_f, summed over both sides.
double jackknife_variance_f(std::span<const double> x, double h_f, int order, KernelKind kind,
                            const BoundaryFit& fit_plus, const BoundaryFit& fit_minus);

/// One side's e1' gamma^-1 psi gamma^-1 e1 exactly as the jackknife display
/// defines it, before conversion to the scale of sqrt(n h_f) * f_hat.
double jackknife_side_raw(std::span<const double> x, const BoundaryFit& fit, KernelKind kind);

CovarianceEstimate assemble_v(const Eigen::MatrixXd& vz, double vf);

}  // namespace rdjoint
