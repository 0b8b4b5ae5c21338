#include "rdjoint/distributions.hpp"

#include <boost/math/distributions/normal.hpp>
#include <boost/math/special_functions/gamma.hpp>

namespace rdjoint {

double chi2_upper_tail(double x, double df) {
  if (x <= 0.0) return 1.0;
  return boost::math::gamma_q(0.5 * df, 0.5 * x);
}

double chi2_critical(double alpha, double df) {
  if (alpha >= 1.0) return 0.0;
  return 2.0 * boost::math::gamma_q_inv(0.5 * df, alpha);
}

double normal_cdf(double x) { return boost::math::cdf(boost::math::normal_distribution<double>(), x); }

double normal_quantile(double p) {
  return boost::math::quantile(boost::math::normal_distribution<double>(), p);
}

double normal_two_sided_critical(double alpha) {
  if (alpha >= 1.0) return 0.0;
  return normal_quantile(1.0 - 0.5 * alpha);
}

}  // namespace rdjoint
