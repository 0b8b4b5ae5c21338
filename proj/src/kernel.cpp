#include "rdjoint/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "rdjoint/error.hpp"
#include "rdjoint/simd.hpp"

namespace rdjoint {

std::string_view to_string(KernelKind kind) {
  return kind == KernelKind::Triangular ? "triangular" : "uniform";
}

std::string_view to_string(Side side) { return side == Side::Right ? "right" : "left"; }

KernelKind parse_kernel(std::string_view name) {
  if (name == "triangular") return KernelKind::Triangular;
  if (name == "uniform") return KernelKind::Uniform;
  throw Error(ErrorCode::InvalidConfig, "kernel: unknown kernel '" + std::string(name) + "'");
}

double kernel_eval(KernelKind kind, double u) {
  const double a = std::fabs(u);
  if (kind == KernelKind::Triangular) return std::max(1.0 - a, 0.0);
  return a <= 1.0 ? 0.5 : 0.0;
}

namespace {

void check_args(double h, int order) {
  if (!(h > 0.0) || !std::isfinite(h)) {
    throw Error(ErrorCode::InvalidConfig, "bandwidth must be positive and finite");
  }
  if (order < 1 || order > simd::kMaxOrder) {
    throw Error(ErrorCode::InvalidConfig,
                "polynomial order must lie in [1, " + std::to_string(simd::kMaxOrder) + "]");
  }
}

double reciprocal_condition(const Eigen::MatrixXd& g) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(g, Eigen::EigenvaluesOnly);
  const auto& ev = eig.eigenvalues();
  const double hi = ev.cwiseAbs().maxCoeff();
  if (!(hi > 0.0)) return 0.0;
  return std::max(ev.minCoeff(), 0.0) / hi;
}

[[noreturn]] void throw_singular(const SideGram& g) {
  std::ostringstream os;
  os << to_string(g.side) << " side: order " << g.order << " fit at bandwidth " << g.bandwidth
     << " has " << g.effective_n << " observations with positive weight (rcond " << g.rcond
     << ")";
  throw Error(ErrorCode::SingularDesign, os.str());
}

}  // namespace

OneSidedDesign make_design(std::span<const double> x, double h, Side side, int order,
                           KernelKind kind, bool validate) {
  check_args(h, order);
  const std::size_t n = x.size();
  OneSidedDesign d;
  d.u.resize(n);
  d.w.resize(n);
  const auto& k = simd::kernels();
  k.side_weights(x.data(), n, h, side == Side::Right, kind == KernelKind::Triangular ? 0 : 1,
                 d.u.data(), d.w.data());

  double sums[2 * simd::kMaxOrder + 1];
  k.weighted_moments(d.u.data(), d.w.data(), nullptr, n, order, sums, nullptr);

  SideGram& g = d.gram;
  g.side = side;
  g.order = order;
  g.bandwidth = h;
  g.n = n;
  g.effective_n = static_cast<std::size_t>(
      std::count_if(d.w.begin(), d.w.end(), [](double v) { return v > 0.0; }));
  g.gamma.resize(order + 1, order + 1);
  const double inv_n = n > 0 ? 1.0 / static_cast<double>(n) : 0.0;
  for (int r = 0; r <= order; ++r) {
    for (int s = 0; s <= order; ++s) g.gamma(r, s) = sums[r + s] * inv_n;
  }
  g.rcond = reciprocal_condition(g.gamma);
  if (validate && g.singular()) throw_singular(g);
  if (!g.singular()) d.factor_.compute(g.gamma);
  return d;
}

Eigen::VectorXd OneSidedDesign::solve(std::span<const double> y) const {
  if (y.size() != u.size()) {
    throw Error(ErrorCode::LengthMismatch, "response length differs from running variable");
  }
  if (gram.singular()) throw_singular(gram);
  const int q = gram.order;
  double pow_sums[2 * simd::kMaxOrder + 1];
  double cross[simd::kMaxOrder + 1];
  simd::kernels().weighted_moments(u.data(), w.data(), y.data(), u.size(), q, pow_sums, cross);
  Eigen::VectorXd rhs(q + 1);
  const double inv_n = 1.0 / static_cast<double>(gram.n);
  for (int m = 0; m <= q; ++m) rhs(m) = cross[m] * inv_n;
  Eigen::VectorXd b = factor_.solve(rhs);
  // undo the x/h rescaling: coefficient on x^s is b_s / h^s
  double scale = 1.0;
  for (int s = 0; s <= q; ++s) {
    b(s) /= scale;
    scale *= gram.bandwidth;
  }
  return b;
}

Eigen::VectorXd OneSidedDesign::inverse_row(int row) const {
  if (gram.singular()) throw_singular(gram);
  Eigen::VectorXd e = Eigen::VectorXd::Zero(gram.order + 1);
  e(row) = 1.0;
  return factor_.solve(e);
}

SideGram accumulate_side_gram(std::span<const double> x, double h, Side side, int order,
                              KernelKind kind) {
  return make_design(x, h, side, order, kind, false).gram;
}

SideGram side_gram(std::span<const double> x, double h, Side side, int order, KernelKind kind) {
  return make_design(x, h, side, order, kind, true).gram;
}

}  // namespace rdjoint
