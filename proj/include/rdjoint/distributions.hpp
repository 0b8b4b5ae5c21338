#pragma once

namespace rdjoint {

/// P(chi2_df > x).
double chi2_upper_tail(double x, double df);
/// The (1 - alpha) quantile of chi2_df; 0 when alpha >= 1.
double chi2_critical(double alpha, double df);

double normal_cdf(double x);
double normal_quantile(double p);
/// Two-sided critical value z_{1 - alpha/2}; 0 when alpha >= 1.
double normal_two_sided_critical(double alpha);

}  // namespace rdjoint
