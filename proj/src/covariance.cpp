#include "rdjoint/covariance.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "rdjoint/error.hpp"

namespace rdjoint {
namespace {

// Same-side units ordered by (x, index).
std::vector<std::size_t> side_order(std::span<const double> x, Side side) {
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (on_side(side, x[i])) idx.push_back(i);
  }
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return x[a] != x[b] ? x[a] < x[b] : a < b;
  });
  return idx;
}

// Neighbors of the unit sitting at position `pos` of `order`.
void neighbors_at(std::span<const double> x, const std::vector<std::size_t>& order,
                  std::size_t pos, int m, std::vector<std::size_t>& out,
                  std::vector<std::pair<double, std::size_t>>& cand) {
  const std::size_t count = order.size();
  const std::size_t i = order[pos];
  if (count < static_cast<std::size_t>(m) + 1) {
    throw Error(ErrorCode::InsufficientNeighbors,
                "unit " + std::to_string(i) + " has " + std::to_string(count - 1) +
                    " same-side units, need " + std::to_string(m));
  }
  const double xi = x[i];
  // Walk outward until m units are taken, then keep every unit tied with the
  // m-th distance so the final (distance, index) ordering is exact.
  std::ptrdiff_t lo = static_cast<std::ptrdiff_t>(pos) - 1;
  std::size_t hi = pos + 1;
  cand.clear();
  double radius = 0.0;
  int taken = 0;
  while (taken < m) {
    const double dl = lo >= 0 ? xi - x[order[lo]] : INFINITY;
    const double dh = hi < count ? x[order[hi]] - xi : INFINITY;
    if (dl <= dh) {
      cand.emplace_back(dl, order[lo]);
      radius = dl;
      --lo;
    } else {
      cand.emplace_back(dh, order[hi]);
      radius = dh;
      ++hi;
    }
    ++taken;
  }
  while (lo >= 0 && xi - x[order[lo]] <= radius) {
    cand.emplace_back(xi - x[order[lo]], order[lo]);
    --lo;
  }
  while (hi < count && x[order[hi]] - xi <= radius) {
    cand.emplace_back(x[order[hi]] - xi, order[hi]);
    ++hi;
  }
  std::sort(cand.begin(), cand.end());
  out.clear();
  for (int k = 0; k < m; ++k) out.push_back(cand[k].second);
}

}  // namespace

std::vector<std::size_t> nearest_neighbors(std::span<const double> x, std::size_t i, Side side,
                                           int m) {
  if (m < 1) throw Error(ErrorCode::InvalidConfig, "neighbors_M must be at least 1");
  if (i >= x.size() || !on_side(side, x[i])) {
    throw Error(ErrorCode::InvalidConfig, "unit " + std::to_string(i) + " is not on the " +
                                              std::string(to_string(side)) + " side");
  }
  const auto order = side_order(x, side);
  const auto pos = static_cast<std::size_t>(std::find(order.begin(), order.end(), i) - order.begin());
  std::vector<std::size_t> out;
  std::vector<std::pair<double, std::size_t>> cand;
  neighbors_at(x, order, pos, m, out, cand);
  return out;
}

double nn_sigma_pair(std::span<const double> x, std::span<const double> zj,
                     std::span<const double> zk, std::size_t i, Side side, int m) {
  if (zj.size() != x.size() || zk.size() != x.size()) {
    throw Error(ErrorCode::LengthMismatch, "covariate length differs from running variable");
  }
  const auto nb = nearest_neighbors(x, i, side, m);
  double mj = 0.0, mk = 0.0;
  for (std::size_t v : nb) {
    mj += zj[v];
    mk += zk[v];
  }
  const double md = static_cast<double>(m);
  return md / (md + 1.0) * (zj[i] - mj / md) * (zk[i] - mk / md);
}

std::vector<std::vector<double>> nn_residuals(std::span<const double> x,
                                              const std::vector<std::vector<double>>& z,
                                              Side side, int m, const std::vector<bool>& needed) {
  if (m < 1) throw Error(ErrorCode::InvalidConfig, "neighbors_M must be at least 1");
  const auto order = side_order(x, side);
  std::vector<std::vector<double>> res(z.size(), std::vector<double>(x.size(), 0.0));
  std::vector<std::size_t> nb;
  std::vector<std::pair<double, std::size_t>> cand;
  const double md = static_cast<double>(m);
  for (std::size_t pos = 0; pos < order.size(); ++pos) {
    const std::size_t i = order[pos];
    if (!needed[i]) continue;
    neighbors_at(x, order, pos, m, nb, cand);
    for (std::size_t k = 0; k < z.size(); ++k) {
      double s = 0.0;
      for (std::size_t v : nb) s += z[k][v];
      res[k][i] = z[k][i] - s / md;
    }
  }
  return res;
}

Eigen::MatrixXd covariance_block_z(std::span<const double> x,
                                   const std::vector<std::vector<double>>& z,
                                   std::span<const double> h, int order, int m, KernelKind kind) {
  const std::size_t d = z.size();
  const std::size_t n = x.size();
  if (h.size() != d) throw Error(ErrorCode::LengthMismatch, "need one bandwidth per covariate");
  for (const auto& col : z) {
    if (col.size() != n) throw Error(ErrorCode::LengthMismatch, "covariate length differs from running variable");
  }
  Eigen::MatrixXd vz = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  if (d == 0) return vz;
  const double shrink = static_cast<double>(m) / (static_cast<double>(m) + 1.0);

  for (Side side : {Side::Right, Side::Left}) {
    // equivalent-kernel weights q_k(i) = e0' gamma_k^-1 r(u_i) w_k(i)
    std::vector<std::vector<double>> q(d, std::vector<double>(n, 0.0));
    std::vector<bool> needed(n, false);
    std::vector<double> cached_h;
    std::vector<std::size_t> cached_from;
    for (std::size_t k = 0; k < d; ++k) {
      const auto hit = std::find(cached_h.begin(), cached_h.end(), h[k]);
      if (hit != cached_h.end()) {
        q[k] = q[cached_from[static_cast<std::size_t>(hit - cached_h.begin())]];
        continue;
      }
      const auto design = make_design(x, h[k], side, order, kind, true);
      const Eigen::VectorXd row = design.inverse_row(0);
      for (std::size_t i = 0; i < n; ++i) {
        const double w = design.w[i];
        if (w == 0.0) continue;
        double acc = 0.0, p = 1.0;
        for (int s = 0; s <= order; ++s) {
          acc += row(s) * p;
          p *= design.u[i];
        }
        q[k][i] = acc * w;
        needed[i] = true;
      }
      cached_h.push_back(h[k]);
      cached_from.push_back(k);
    }
    const auto e = nn_residuals(x, z, side, m, needed);
    for (std::size_t j = 0; j < d; ++j) {
      for (std::size_t k = j; k < d; ++k) {
        double acc = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
          if (!needed[i]) continue;
          acc += q[j][i] * q[k][i] * e[j][i] * e[k][i];
        }
        const double c = std::sqrt(h[j] * h[k]) * shrink * acc / static_cast<double>(n);
        vz(j, k) += c;
        if (k != j) vz(k, j) += c;
      }
    }
  }
  return 0.5 * (vz + vz.transpose());
}

double jackknife_side_raw(std::span<const double> x, const BoundaryFit& fit, KernelKind kind) {
  const Side side = fit.side;
  const double h = fit.bandwidth;
  const int order = static_cast<int>(fit.beta.size()) - 1;
  const std::size_t n = x.size();
  const auto side_idx = side_order(x, side);
  if (n < 2 || side_idx.size() < 2) {
    throw Error(ErrorCode::DegenerateSample, std::string(to_string(side)) +
                                                 " side has fewer than two observations for the jackknife");
  }
  const auto design = make_design(x, h, side, order, kind, true);
  const int dim = order + 1;

  // Support units sorted by x: a_j = r(u_j) w_j and fitted CDF level fit_j.
  std::vector<std::size_t> support;
  for (std::size_t i : side_idx) {
    if (design.w[i] > 0.0) support.push_back(i);
  }
  const std::size_t s = support.size();
  Eigen::MatrixXd a(dim, static_cast<Eigen::Index>(s));
  std::vector<double> fit_val(s), xs(s);
  std::vector<std::ptrdiff_t> support_pos(n, -1);
  Eigen::VectorXd a_fit_total = Eigen::VectorXd::Zero(dim);
  for (std::size_t t = 0; t < s; ++t) {
    const std::size_t i = support[t];
    support_pos[i] = static_cast<std::ptrdiff_t>(t);
    xs[t] = x[i];
    double p = 1.0, pn = 1.0, f = 0.0;
    for (int r = 0; r < dim; ++r) {
      a(r, static_cast<Eigen::Index>(t)) = p * design.w[i];
      f += fit.beta(r) * pn;
      p *= design.u[i];
      pn *= x[i];
    }
    fit_val[t] = f;
    a_fit_total += a.col(static_cast<Eigen::Index>(t)) * f;
  }
  // suffix[t] = sum of a over support positions >= t
  Eigen::MatrixXd suffix = Eigen::MatrixXd::Zero(dim, static_cast<Eigen::Index>(s) + 1);
  for (std::ptrdiff_t t = static_cast<std::ptrdiff_t>(s) - 1; t >= 0; --t) {
    suffix.col(t) = suffix.col(t + 1) + a.col(t);
  }
  std::vector<double> side_x(side_idx.size());
  for (std::size_t t = 0; t < side_idx.size(); ++t) side_x[t] = x[side_idx[t]];

  const double nm1 = static_cast<double>(n - 1);
  Eigen::MatrixXd outer = Eigen::MatrixXd::Zero(dim, dim);
  Eigen::VectorXd grand = Eigen::VectorXd::Zero(dim);
  Eigen::VectorXd row(dim);
  for (std::size_t i = 0; i < n; ++i) {
    row = -a_fit_total;
    const std::ptrdiff_t ti = support_pos[i];
    if (on_side(side, x[i])) {
      const auto first = static_cast<Eigen::Index>(
          std::lower_bound(xs.begin(), xs.end(), x[i]) - xs.begin());
      row += suffix.col(first);
    }
    if (ti >= 0) {
      const auto self = a.col(ti);
      // remove j == i from the mirrored sum
      row -= self * (1.0 - fit_val[static_cast<std::size_t>(ti)]);
      // units on the side at or below x_i, excluding i
      const double below = static_cast<double>(
          std::upper_bound(side_x.begin(), side_x.end(), x[i]) - side_x.begin()) - 1.0;
      row += self * (below - nm1 * fit_val[static_cast<std::size_t>(ti)]);
    }
    grand += row;
    row /= nm1;
    outer.noalias() += row * row.transpose();
  }
  outer /= static_cast<double>(n);
  grand *= 2.0 / (static_cast<double>(n) * nm1);
  const Eigen::MatrixXd psi = outer - grand * grand.transpose();
  const Eigen::VectorXd g1 = design.inverse_row(1);
  return g1.dot(psi * g1);
}

double jackknife_variance_f(std::span<const double> x, double h_f, int order, KernelKind kind,
                            const BoundaryFit& fit_plus, const BoundaryFit& fit_minus) {
  if (fit_plus.target != Target::Density || fit_minus.target != Target::Density ||
      fit_plus.bandwidth != h_f || fit_minus.bandwidth != h_f ||
      fit_plus.beta.size() != order + 1 || fit_minus.beta.size() != order + 1) {
    throw Error(ErrorCode::InvalidConfig, "jackknife needs the density fits for the same bandwidth and order");
  }
  const double raw = jackknife_side_raw(x, fit_plus, kind) + jackknife_side_raw(x, fit_minus, kind);
  // The displayed sandwich targets the rescaled slope h_f * f_hat; dividing by
  // h_f puts it on the scale of sqrt(n h_f) * f_hat.
  return raw / h_f;
}

CovarianceEstimate assemble_v(const Eigen::MatrixXd& vz, double vf) {
  const Eigen::Index d = vz.rows();
  CovarianceEstimate c;
  c.vz = vz;
  c.vf = vf;
  c.v = Eigen::MatrixXd::Zero(d + 1, d + 1);
  c.v.topLeftCorner(d, d) = vz;
  c.v(d, d) = vf;
  return c;
}

}  // namespace rdjoint
