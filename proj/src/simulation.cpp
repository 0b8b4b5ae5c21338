#include "rdjoint/simulation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <thread>

#include "rdjoint/distributions.hpp"
#include "rdjoint/error.hpp"
#include "rdjoint/rng.hpp"

namespace rdjoint {

void DgpConfig::validate() const {
  if (n < 2) throw Error(ErrorCode::InvalidConfig, "n: must be at least 2");
  if (d < 0) throw Error(ErrorCode::InvalidConfig, "d: must be non-negative");
  if (!(rho >= 0.0 && rho < 1.0)) throw Error(ErrorCode::InvalidConfig, "rho: must lie in [0, 1)");
  if (!(p_manip >= 0.0 && p_manip <= 0.5)) throw Error(ErrorCode::InvalidConfig, "p_manip: must lie in [0, 0.5]");
  if (!(a >= 0.0)) throw Error(ErrorCode::InvalidConfig, "a: must be non-negative");
  if (!(sigma_x > 0.0)) throw Error(ErrorCode::InvalidConfig, "sigma_x: must be positive");
}

double lambda_eval(std::span<const double> coeffs, double x) {
  double acc = 0.0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = (acc + *it) * x;
  return acc;
}

Sample simulate_sample(const DgpConfig& cfg) {
  cfg.validate();
  CounterStream rng(cfg.seed, 0);
  Sample s;
  s.x.resize(cfg.n);
  s.z.assign(static_cast<std::size_t>(cfg.d), std::vector<double>(cfg.n));
  for (int k = 0; k < cfg.d; ++k) s.names.push_back("z" + std::to_string(k + 1));
  const double common = std::sqrt(cfg.rho);
  const double own = std::sqrt(1.0 - cfg.rho);
  for (std::size_t i = 0; i < cfg.n; ++i) {
    double magnitude = 0.0;
    do {
      magnitude = std::fabs(cfg.sigma_x * rng.normal());
    } while (magnitude > 1.0);
    const bool manipulated = rng.uniform() >= cfg.p_manip;  // M_i = 1{U_i >= p}
    const double x = manipulated ? magnitude : -magnitude;
    s.x[i] = x;
    const double base = lambda_eval(cfg.lambda_coeffs, x);
    const double w0 = rng.normal();
    for (int k = 0; k < cfg.d; ++k) {
      double z = base + common * w0 + own * rng.normal();
      if (k == cfg.d - 1 && manipulated) z += cfg.a;
      s.z[static_cast<std::size_t>(k)][i] = z;
    }
  }
  return s;
}

double boundary_density(double sigma_x) {
  return 1.0 / (sigma_x * std::sqrt(2.0 * std::numbers::pi)) / (normal_cdf(1.0 / sigma_x) - 0.5);
}

double density_jump(double p_manip, double sigma_x) { return (1.0 - 2.0 * p_manip) * boundary_density(sigma_x); }

double manipulation_for_density_jump(double tau_f, double sigma_x) {
  const double p = 0.5 * (1.0 - tau_f / boundary_density(sigma_x));
  if (!(p >= 0.0 && p <= 0.5)) {
    throw Error(ErrorCode::InvalidConfig, "tau_f: no manipulation probability in [0, 0.5] yields this density jump");
  }
  return p;
}

double ExperimentResult::rate(Procedure p) const {
  const auto d = decided.find(p);
  if (d == decided.end() || d->second == 0) return 0.0;
  return static_cast<double>(rejections.at(p)) / static_cast<double>(d->second);
}

double ExperimentResult::standard_error(Procedure p) const {
  const auto d = decided.find(p);
  if (d == decided.end() || d->second == 0) return 0.0;
  const double r = rate(p);
  return std::sqrt(r * (1.0 - r) / static_cast<double>(d->second));
}

ExperimentResult run_experiment(const DgpConfig& cfg, const ExperimentOptions& options) {
  cfg.validate();
  if (options.replications < 1) throw Error(ErrorCode::InvalidConfig, "replications: must be positive");
  options.run.validate();
  const std::uint64_t master = *options.run.seed;
  const auto reps = static_cast<std::size_t>(options.replications);

  std::vector<ReplicationRecord> records(reps);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t r = next++; r < reps; r = next++) {
      const std::uint64_t rep_seed = derive_seed(master, r);
      DgpConfig c = cfg;
      c.seed = derive_seed(rep_seed, 0);
      RunConfig run = options.run;
      run.seed = derive_seed(rep_seed, 1);
      ReplicationRecord rec;
      try {
        const Sample s = simulate_sample(c);
        const Report rep = run_joint_diagnostics(s, run);
        rec.ok = rep.all_components_ok();
        for (const auto& comp : rep.components) {
          rec.tau.push_back(comp.tau);
          rec.se.push_back(comp.se);
          rec.h.push_back(comp.h);
        }
        for (const auto& pr : rep.procedures) {
          if (!pr.available) continue;
          rec.statistic[pr.procedure] = pr.statistic;
          rec.reject[pr.procedure] = pr.reject;
        }
      } catch (const Error&) {
        rec.ok = false;
      }
      records[r] = std::move(rec);
    }
  };
  unsigned threads = options.threads != 0 ? options.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(reps));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }

  ExperimentResult out;
  out.config = cfg;
  out.config.seed = master;
  out.alpha = options.run.alpha;
  out.replications = options.replications;
  for (Procedure p : options.run.procedures) {
    out.rejections[p] = 0;
    out.decided[p] = 0;
  }
  for (const auto& rec : records) {
    if (!rec.ok) {
      ++out.failures;
      continue;
    }
    for (const auto& [proc, rej] : rec.reject) {
      ++out.decided[proc];
      if (rej) ++out.rejections[proc];
    }
  }
  if (static_cast<double>(out.failures) >= options.max_failure_rate * static_cast<double>(reps)) {
    throw Error(ErrorCode::DegenerateSample, std::to_string(out.failures) + " of " + std::to_string(reps) +
                                                 " replications failed to produce estimates");
  }
  out.records = std::move(records);
  return out;
}

ExperimentResult empirical_size(const DgpConfig& cfg, const ExperimentOptions& options) {
  if (!cfg.null_holds()) {
    throw Error(ErrorCode::InvalidConfig, "empirical size needs p_manip = 0.5 and a = 0");
  }
  return run_experiment(cfg, options);
}

std::vector<ExperimentResult> power_curve(const DgpConfig& base, std::span<const double> a_grid,
                                          const ExperimentOptions& options) {
  std::vector<ExperimentResult> out;
  for (double a : a_grid) {
    DgpConfig c = base;
    c.a = a;
    out.push_back(run_experiment(c, options));
  }
  return out;
}

SizeAdjusted size_adjusted_power(const ExperimentResult& null_result,
                                 const ExperimentResult& alt_result, double alpha) {
  if (null_result.records.empty() || alt_result.records.empty()) {
    throw Error(ErrorCode::MissingStatistics, "size adjustment needs per-replication statistics");
  }
  SizeAdjusted out;
  for (const auto& [proc, count] : null_result.decided) {
    std::vector<double> null_stats, alt_stats;
    for (const auto& rec : null_result.records) {
      if (!rec.ok) continue;
      if (auto it = rec.statistic.find(proc); it != rec.statistic.end()) null_stats.push_back(it->second);
    }
    for (const auto& rec : alt_result.records) {
      if (!rec.ok) continue;
      if (auto it = rec.statistic.find(proc); it != rec.statistic.end()) alt_stats.push_back(it->second);
    }
    if (null_stats.empty() || alt_stats.empty()) {
      throw Error(ErrorCode::MissingStatistics, "no retained statistics for " + std::string(to_string(proc)));
    }
    const auto [lo, hi] = std::minmax_element(null_stats.begin(), null_stats.end());
    out.degenerate[proc] = *lo == *hi;
    const double crit = empirical_quantile(null_stats, 1.0 - alpha);
    out.critical_value[proc] = crit;
    const auto hits = std::count_if(alt_stats.begin(), alt_stats.end(), [&](double s) { return s > crit; });
    out.rate[proc] = static_cast<double>(hits) / static_cast<double>(alt_stats.size());
  }
  return out;
}

}  // namespace rdjoint
