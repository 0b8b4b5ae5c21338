#include "rdjoint/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "rdjoint/covariance.hpp"
#include "rdjoint/error.hpp"
#include "rdjoint/estimators.hpp"

namespace rdjoint {

const ProcedureReport* Report::find(Procedure p) const {
  for (const auto& r : procedures) {
    if (r.procedure == p) return &r;
  }
  return nullptr;
}

bool Report::all_components_ok() const {
  return std::all_of(components.begin(), components.end(), [](const auto& c) { return c.included; });
}

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

bool is_constant(const std::vector<double>& z) {
  return std::all_of(z.begin(), z.end(), [&](double v) { return v == z.front(); });
}

void fill(ProcedureReport& out, const TestResult& r) {
  out.available = true;
  out.statistic = r.statistic;
  out.component_statistics = r.components;
  out.critical_value = r.critical_value;
  out.p_value = r.p_value;
  out.reject = r.reject;
  out.mc_draws = r.mc_draws;
  out.seed = r.seed;
}

}  // namespace

Report run_joint_diagnostics(const Sample& sample, const RunConfig& config) {
  config.validate();
  const std::size_t n = sample.n();
  const std::size_t d = sample.d();
  if (n == 0) throw Error(ErrorCode::EmptyAfterFiltering, "sample has no observations");
  for (const auto& col : sample.z) {
    if (col.size() != n) throw Error(ErrorCode::LengthMismatch, "covariate length differs from running variable");
  }
  if (!config.bandwidths.empty() && config.bandwidths.size() != 1 && config.bandwidths.size() != d) {
    throw Error(ErrorCode::InvalidConfig, "bandwidths: expected 1 or " + std::to_string(d) + " entries");
  }

  Report rep;
  rep.config = config;
  const KernelKind kind = config.kernel;
  const int l = config.mean_order;
  const int p = config.density_order;

  // bandwidths
  std::vector<double> h(d, 0.0);
  std::optional<double> auto_h;
  for (std::size_t k = 0; k < d; ++k) {
    std::optional<double> given;
    if (config.bandwidths.size() == 1) given = config.bandwidths[0];
    if (config.bandwidths.size() == d) given = config.bandwidths[k];
    if (given) {
      h[k] = *given;
    } else {
      if (!auto_h) {
        auto_h = rule_of_thumb_mean_bandwidth(sample.x, l);
        rep.warnings.push_back("auto covariate bandwidth h = " + fmt(*auto_h));
      }
      h[k] = *auto_h;
    }
  }
  double h_f = 0.0;
  if (config.density_bandwidth) {
    h_f = *config.density_bandwidth;
  } else {
    h_f = rule_of_thumb_density_bandwidth(sample.x, p);
    rep.warnings.push_back("auto density bandwidth h_f = " + fmt(h_f));
  }

  std::vector<ComponentSummary> comps(d + 1);
  std::vector<double> tau(d + 1, 0.0);
  for (std::size_t k = 0; k < d; ++k) {
    comps[k].name = k < sample.names.size() ? sample.names[k] : "z" + std::to_string(k + 1);
    comps[k].h = h[k];
  }
  comps[d].name = "density";
  comps[d].h = h_f;

  auto drop = [&](std::size_t k, const std::string& why) {
    comps[k].included = false;
    comps[k].note = why;
    rep.warnings.push_back("component " + comps[k].name + " dropped from the joint test: " + why);
  };

  // density component
  double vf = 0.0;
  try {
    const auto jump = tau_f(sample.x, h_f, p, kind);
    tau[d] = jump.tau;
    for (const auto* fit : {&jump.plus_fit, &jump.minus_fit}) {
      if (fit->negative_density) {
        rep.warnings.push_back("negative " + std::string(to_string(fit->side)) +
                               " density estimate " + fmt(fit->beta(1)) + " (reported untruncated)");
      }
      if (fit->gram.rcond < 1e-8) {
        rep.warnings.push_back("density " + std::string(to_string(fit->side)) +
                               " design is near-singular (rcond " + fmt(fit->gram.rcond) + ")");
      }
    }
    vf = jackknife_variance_f(sample.x, h_f, p, kind, jump.plus_fit, jump.minus_fit);
    if (!(vf > 0.0)) throw Error(ErrorCode::ComponentDegenerate, "density variance estimate is not positive");
  } catch (const Error& e) {
    drop(d, e.what());
  }

  // covariate components
  std::vector<std::size_t> active;
  for (std::size_t k = 0; k < d; ++k) {
    if (is_constant(sample.z[k])) {
      drop(k, std::string(to_string(ErrorCode::ComponentDegenerate)) + ": covariate is constant");
      continue;
    }
    try {
      const auto jump = tau_z(sample.x, sample.z[k], h[k], l, kind);
      tau[k] = jump.tau;
      for (const auto* fit : {&jump.plus_fit, &jump.minus_fit}) {
        if (fit->gram.rcond < 1e-8) {
          rep.warnings.push_back("covariate " + comps[k].name + " " + std::string(to_string(fit->side)) +
                                 " design is near-singular (rcond " + fmt(fit->gram.rcond) + ")");
        }
      }
      active.push_back(k);
    } catch (const Error& e) {
      drop(k, e.what());
    }
  }

  Eigen::MatrixXd vz_full;
  if (!active.empty()) {
    std::vector<std::vector<double>> z_act;
    std::vector<double> h_act;
    for (std::size_t k : active) {
      z_act.push_back(sample.z[k]);
      h_act.push_back(h[k]);
    }
    try {
      vz_full = covariance_block_z(sample.x, z_act, h_act, l, config.neighbors_m, kind);
    } catch (const Error& e) {
      for (std::size_t k : active) drop(k, e.what());
      active.clear();
    }
  }
  // zero-variance covariates leave the joint vector
  std::vector<Eigen::Index> keep_pos;
  std::vector<std::size_t> kept;
  for (std::size_t a = 0; a < active.size(); ++a) {
    const auto ai = static_cast<Eigen::Index>(a);
    if (vz_full(ai, ai) > 0.0) {
      keep_pos.push_back(ai);
      kept.push_back(active[a]);
    } else {
      drop(active[a], std::string(to_string(ErrorCode::ComponentDegenerate)) + ": zero estimated variance");
    }
  }
  const bool density_in = comps[d].included;
  const auto dim = static_cast<Eigen::Index>(kept.size() + (density_in ? 1 : 0));

  StatisticVector stat;
  stat.n = n;
  stat.density_bandwidth = h_f;
  stat.t.resize(dim);
  Eigen::MatrixXd v = Eigen::MatrixXd::Zero(dim, dim);
  const double rn = std::sqrt(static_cast<double>(n));
  for (std::size_t a = 0; a < kept.size(); ++a) {
    const auto ai = static_cast<Eigen::Index>(a);
    stat.bandwidths.push_back(h[kept[a]]);
    stat.t(ai) = rn * std::sqrt(h[kept[a]]) * tau[kept[a]];
    for (std::size_t b = 0; b < kept.size(); ++b) {
      v(ai, static_cast<Eigen::Index>(b)) = vz_full(keep_pos[a], keep_pos[b]);
    }
  }
  if (density_in) {
    stat.t(dim - 1) = rn * std::sqrt(h_f) * tau[d];
    v(dim - 1, dim - 1) = vf;
  }

  for (std::size_t k = 0; k <= d; ++k) {
    comps[k].tau = tau[k];
  }
  for (std::size_t a = 0; a < kept.size(); ++a) {
    const auto ai = static_cast<Eigen::Index>(a);
    comps[kept[a]].se = std::sqrt(v(ai, ai) / (static_cast<double>(n) * h[kept[a]]));
  }
  if (density_in) comps[d].se = std::sqrt(vf / (static_cast<double>(n) * h_f));
  rep.components = comps;

  const bool reduced = kept.size() + (density_in ? 1 : 0) < d + 1;
  const std::string reduced_note =
      reduced ? "joint vector reduced to " + std::to_string(dim) + " of " + std::to_string(d + 1) + " components" : "";

  const bool want_max = std::find(config.procedures.begin(), config.procedures.end(), Procedure::Max) != config.procedures.end();
  const bool want_stud = std::find(config.procedures.begin(), config.procedures.end(), Procedure::MaxStudentized) != config.procedures.end();
  std::optional<std::array<TestResult, 2>> shared_max;
  std::string shared_max_error;
  if (dim > 0 && want_max && want_stud) {
    try {
      shared_max = max_tests(stat, v, config.alpha, config.mc_draws, *config.seed);
    } catch (const Error& e) {
      shared_max_error = e.what();
    }
  }

  for (Procedure proc : config.procedures) {
    ProcedureReport pr;
    pr.procedure = proc;
    pr.notes = reduced_note;
    if (dim == 0) {
      pr.notes = "no components available for the joint test";
      rep.procedures.push_back(pr);
      continue;
    }
    try {
      switch (proc) {
        case Procedure::Naive: fill(pr, naive_test(stat, v, config.alpha)); break;
        case Procedure::Bonferroni: fill(pr, bonferroni_test(stat, v, config.alpha)); break;
        case Procedure::Wald: fill(pr, wald_test(stat, v, config.alpha)); break;
        case Procedure::Max:
        case Procedure::MaxStudentized: {
          const bool stud = proc == Procedure::MaxStudentized;
          if (shared_max) {
            fill(pr, (*shared_max)[stud ? 1 : 0]);
          } else if (!shared_max_error.empty()) {
            throw Error(ErrorCode::NotPSD, shared_max_error);
          } else {
            fill(pr, max_test(stat, v, config.alpha, config.mc_draws, *config.seed, stud));
          }
          if (!pr.notes.empty()) pr.notes += "; ";
          pr.notes += "p_value is the MC p-value";
          break;
        }
      }
    } catch (const Error& e) {
      pr.available = false;
      pr.notes = e.what();
    }
    rep.procedures.push_back(pr);
  }
  return rep;
}

}  // namespace rdjoint
