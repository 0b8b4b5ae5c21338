#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "rdjoint/config.hpp"
#include "rdjoint/diagnostics.hpp"
#include "rdjoint/sample.hpp"

namespace rdjoint {

/// Coefficients on x^1..x^5 of the default conditional-mean function
/// (constant term removed so that lambda(0) = 0).
inline const std::vector<double> kDefaultLambda = {1.27, 7.18, 20.21, 21.54, 7.33};

struct DgpConfig {
  std::size_t n = 1000;
  int d = 1;
  double rho = 0.0;
  double p_manip = 0.5;
  double a = 0.0;
  std::vector<double> lambda_coeffs = kDefaultLambda;  // on x^1, x^2, ...
  double sigma_x = 0.12;
  std::uint64_t seed = 0;

  void validate() const;
  bool null_holds() const { return p_manip == 0.5 && a == 0.0; }
  bool operator==(const DgpConfig&) const = default;
};

/// sum_k coeffs[k] * x^(k+1); zero at x = 0 by construction.
double lambda_eval(std::span<const double> coeffs, double x);

/// Running variable: a truncated normal on [0, 1] reflected to the left with
/// probability p_manip. Covariates: lambda(X) plus equicorrelated unit-variance
/// normal noise; the last covariate also jumps by `a` on the right.
Sample simulate_sample(const DgpConfig& cfg);

/// Density at the cutoff of the unreflected truncated normal, 1/(sigma sqrt(2pi)) / (Phi(1/sigma) - 1/2).
double boundary_density(double sigma_x);
/// tau_f = (1 - 2 p) * boundary_density(sigma_x).
double density_jump(double p_manip, double sigma_x);
/// Inverse of density_jump in p_manip.
double manipulation_for_density_jump(double tau_f, double sigma_x);

struct ExperimentOptions {
  int replications = 3000;
  RunConfig run;          // run.seed is the master seed
  unsigned threads = 0;   // 0: hardware concurrency
  double max_failure_rate = 0.01;
};

struct ReplicationRecord {
  bool ok = false;
  std::vector<double> tau;  // covariates then density
  std::vector<double> se;
  std::vector<double> h;
  std::map<Procedure, double> statistic;
  std::map<Procedure, bool> reject;
};

struct ExperimentResult {
  DgpConfig config;
  double alpha = 0.05;
  int replications = 0;
  int failures = 0;
  std::map<Procedure, int> rejections;
  std::map<Procedure, int> decided;  // replications where the procedure ran
  std::vector<ReplicationRecord> records;

  double rate(Procedure p) const;
  /// Binomial standard error of rate(p).
  double standard_error(Procedure p) const;
};

/// Runs the joint diagnostics on independent DGP draws. Replication r draws
/// its sample and Monte Carlo seeds from derive_seed(master, r), so results
/// do not depend on the thread count. Aborts (DegenerateSample) when the
/// failure rate reaches options.max_failure_rate.
ExperimentResult run_experiment(const DgpConfig& cfg, const ExperimentOptions& options);

/// run_experiment restricted to null configurations.
ExperimentResult empirical_size(const DgpConfig& cfg, const ExperimentOptions& options);

/// One experiment per jump size `a` with common replication seeds.
std::vector<ExperimentResult> power_curve(const DgpConfig& base, std::span<const double> a_grid,
                                          const ExperimentOptions& options);

struct SizeAdjusted {
  std::map<Procedure, double> rate;
  std::map<Procedure, double> critical_value;
  std::map<Procedure, bool> degenerate;  // all null statistics tied
};

/// Applies the empirical (1 - alpha) null quantile of each procedure's
/// statistic to the alternative replications.
SizeAdjusted size_adjusted_power(const ExperimentResult& null_result,
                                 const ExperimentResult& alt_result, double alpha);

}  // namespace rdjoint
