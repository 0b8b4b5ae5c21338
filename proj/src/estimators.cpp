#include "rdjoint/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "rdjoint/error.hpp"

namespace rdjoint {

EmpiricalCdf::EmpiricalCdf(std::span<const double> x) : sorted_(x.begin(), x.end()) {
  std::sort(sorted_.begin(), sorted_.end());
  const auto first_nonneg = std::lower_bound(sorted_.begin(), sorted_.end(), 0.0);
  if (!sorted_.empty()) {
    below_zero_ = static_cast<double>(first_nonneg - sorted_.begin()) / static_cast<double>(sorted_.size());
  }
}

double EmpiricalCdf::operator()(double t) const {
  if (sorted_.empty()) return 0.0;
  const auto it = std::upper_bound(sorted_.begin(), sorted_.end(), t);
  return static_cast<double>(it - sorted_.begin()) / static_cast<double>(sorted_.size());
}

std::vector<double> EmpiricalCdf::side_response(std::span<const double> x, Side side) const {
  std::vector<double> y(x.size(), 0.0);
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!on_side(side, x[i])) continue;
    y[i] = side == Side::Right ? (*this)(x[i]) - below_zero_ : (*this)(x[i]);
  }
  return y;
}

namespace {

void require_same_length(std::span<const double> x, std::span<const double> z) {
  if (x.size() != z.size()) {
    throw Error(ErrorCode::LengthMismatch, "x has " + std::to_string(x.size()) +
                                               " observations but z has " + std::to_string(z.size()));
  }
}

BoundaryFit density_from_design(const OneSidedDesign& design, const EmpiricalCdf& cdf,
                                std::span<const double> x) {
  const int order = design.gram.order;
  if (design.gram.effective_n < static_cast<std::size_t>(order) + 2) {
    throw Error(ErrorCode::DegenerateSample,
                std::string(to_string(design.gram.side)) + " side has " +
                    std::to_string(design.gram.effective_n) + " observations in the density window; need at least " +
                    std::to_string(order + 2));
  }
  const auto y = cdf.side_response(x, design.gram.side);
  BoundaryFit fit;
  fit.beta = design.solve(y);
  fit.side = design.gram.side;
  fit.target = Target::Density;
  fit.gram = design.gram;
  fit.bandwidth = design.gram.bandwidth;
  fit.negative_density = fit.beta(1) < 0.0;
  return fit;
}

double sample_sd(std::span<const double> x) {
  if (x.size() < 2) throw Error(ErrorCode::DegenerateSample, "need at least two observations for a bandwidth");
  const auto [lo, hi] = std::minmax_element(x.begin(), x.end());
  if (*lo == *hi) throw Error(ErrorCode::DegenerateSample, "running variable has zero spread");
  const double mean = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
  double ss = 0.0;
  for (double v : x) ss += (v - mean) * (v - mean);
  const double sd = std::sqrt(ss / static_cast<double>(x.size() - 1));
  if (!(sd > 0.0)) throw Error(ErrorCode::DegenerateSample, "running variable has zero spread");
  return sd;
}

}  // namespace

BoundaryFit fit_mean_boundary(const OneSidedDesign& design, std::span<const double> z) {
  BoundaryFit fit;
  fit.beta = design.solve(z);
  fit.side = design.gram.side;
  fit.target = Target::Mean;
  fit.gram = design.gram;
  fit.bandwidth = design.gram.bandwidth;
  return fit;
}

BoundaryFit fit_mean_boundary(std::span<const double> x, std::span<const double> z, double h,
                              int order, Side side, KernelKind kind) {
  require_same_length(x, z);
  const auto design = make_design(x, h, side, order, kind, true);
  return fit_mean_boundary(design, z);
}

BoundaryFit fit_density_boundary(std::span<const double> x, const EmpiricalCdf& cdf, double h_f,
                                 int order, Side side, KernelKind kind) {
  const auto design = make_design(x, h_f, side, order, kind, true);
  return density_from_design(design, cdf, x);
}

BoundaryFit fit_density_boundary(std::span<const double> x, double h_f, int order, Side side,
                                 KernelKind kind) {
  const EmpiricalCdf cdf(x);
  return fit_density_boundary(x, cdf, h_f, order, side, kind);
}

JumpEstimate tau_z(std::span<const double> x, std::span<const double> z, double h, int order,
                   KernelKind kind) {
  JumpEstimate j;
  j.plus_fit = fit_mean_boundary(x, z, h, order, Side::Right, kind);
  j.minus_fit = fit_mean_boundary(x, z, h, order, Side::Left, kind);
  j.tau = j.plus_fit.beta(0) - j.minus_fit.beta(0);
  return j;
}

JumpEstimate tau_f(std::span<const double> x, double h_f, int order, KernelKind kind) {
  const EmpiricalCdf cdf(x);
  JumpEstimate j;
  j.plus_fit = fit_density_boundary(x, cdf, h_f, order, Side::Right, kind);
  j.minus_fit = fit_density_boundary(x, cdf, h_f, order, Side::Left, kind);
  j.tau = j.plus_fit.beta(1) - j.minus_fit.beta(1);
  return j;
}

double rule_of_thumb_mean_bandwidth(std::span<const double> x, int order, double constant) {
  const double n = static_cast<double>(x.size());
  return constant * sample_sd(x) * std::pow(n, -1.0 / (2.0 * order + 3.0)) * std::pow(n, -0.05);
}

double rule_of_thumb_density_bandwidth(std::span<const double> x, int order, double constant) {
  const double n = static_cast<double>(x.size());
  return constant * sample_sd(x) * std::pow(n, -1.0 / (2.0 * order + 1.0)) * std::pow(n, -0.05);
}

}  // namespace rdjoint
