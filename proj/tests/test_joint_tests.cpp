#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "rdjoint/distributions.hpp"
#include "rdjoint/error.hpp"
#include "rdjoint/joint_tests.hpp"
#include "rdjoint/rng.hpp"

using namespace rdjoint;

namespace {

StatisticVector vec(std::initializer_list<double> v) {
  StatisticVector s;
  s.t = Eigen::VectorXd(static_cast<Eigen::Index>(v.size()));
  Eigen::Index k = 0;
  for (double x : v) s.t(k++) = x;
  s.n = 100;
  return s;
}

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an rdjoint::Error");
  return ErrorCode::Io;
}

Eigen::MatrixXd random_spd(int k, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> nd;
  Eigen::MatrixXd a(k, k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) a(i, j) = nd(gen);
  return a * a.transpose() + 0.5 * Eigen::MatrixXd::Identity(k, k);
}

}  // namespace

TEST_SUITE("joint_tests") {

TEST_CASE("distribution helpers") {
  CHECK(chi2_critical(0.05, 1) == doctest::Approx(3.8415).epsilon(1e-4));
  CHECK(chi2_upper_tail(1.0, 2) == doctest::Approx(std::exp(-0.5)).epsilon(1e-12));
  CHECK(normal_two_sided_critical(0.01) == doctest::Approx(2.5758).epsilon(1e-4));
  CHECK(normal_quantile(0.975) == doctest::Approx(1.959964).epsilon(1e-6));
  CHECK(normal_cdf(0.0) == 0.5);
  CHECK(chi2_critical(1.0, 3) == 0.0);
}

TEST_CASE("statistic vector arithmetic") {
  const std::vector<double> tz{0.2}, h{0.25};
  const auto s = make_statistic_vector(tz, 0.1, 100, h, 0.16);
  CHECK(s.t(0) == doctest::Approx(1.0));
  CHECK(s.t(1) == doctest::Approx(0.4));
  const std::vector<double> zeros{0.0, 0.0}, h2{0.3, 0.2};
  const auto z = make_statistic_vector(zeros, 0.0, 500, h2, 0.1);
  CHECK(z.t.isZero(0.0));
  CHECK(code_of([&] { make_statistic_vector(zeros, 0.0, 500, h, 0.1); }) == ErrorCode::LengthMismatch);
}

TEST_CASE("wald closed form") {
  const auto r = wald_test(vec({1.0, 0.0}), Eigen::MatrixXd::Identity(2, 2), 0.05);
  CHECK(r.statistic == doctest::Approx(1.0));
  CHECK(*r.p_value == doctest::Approx(0.6065).epsilon(1e-4));
  CHECK_FALSE(r.reject);
  const auto zero = wald_test(vec({0.0, 0.0, 0.0}), random_spd(3, 1), 0.999);
  CHECK(zero.statistic == 0.0);
  CHECK_FALSE(zero.reject);
}

TEST_CASE("wald with one component uses the chi2_1 quantile") {
  Eigen::MatrixXd v(1, 1);
  v << 2.0;
  CHECK(wald_test(vec({std::sqrt(2.0 * 3.84)}), v, 0.05).reject == false);
  CHECK(wald_test(vec({std::sqrt(2.0 * 3.85)}), v, 0.05).reject == true);
}

TEST_CASE("wald rejects non positive definite covariances") {
  Eigen::MatrixXd v(2, 2);
  v << 1.0, 1.0, 1.0, 1.0;
  CHECK(code_of([&] { wald_test(vec({1.0, 2.0}), v, 0.05); }) == ErrorCode::NotPositiveDefinite);
  CHECK(code_of([&] { wald_test(vec({1.0}), Eigen::MatrixXd::Identity(2, 2), 0.05); }) == ErrorCode::LengthMismatch);
  CHECK(code_of([&] { wald_test(vec({1.0}), Eigen::MatrixXd::Identity(1, 1), 0.0); }) == ErrorCode::InvalidConfig);
}

TEST_CASE("wald is invariant to rescaling components") {
  const Eigen::MatrixXd v = random_spd(4, 3);
  auto t = vec({0.5, -1.2, 2.0, 0.3});
  const double base = wald_test(t, v, 0.05).statistic;
  Eigen::VectorXd d(4);
  d << 2.0, 0.1, 7.0, 1.5;
  t.t = t.t.cwiseProduct(d);
  const Eigen::MatrixXd vs = d.asDiagonal() * v * d.asDiagonal();
  CHECK(wald_test(t, vs, 0.05).statistic == doctest::Approx(base).epsilon(1e-10));
}

TEST_CASE("symmetric root") {
  const Eigen::MatrixXd v = random_spd(5, 4);
  const Eigen::MatrixXd r = symmetric_root(v);
  CHECK((r * r - v).cwiseAbs().maxCoeff() < 1e-10);
  CHECK((r - r.transpose()).cwiseAbs().maxCoeff() < 1e-12);
  Eigen::MatrixXd bad = Eigen::MatrixXd::Identity(2, 2);
  bad(1, 1) = -1.0;
  CHECK(code_of([&] { symmetric_root(bad); }) == ErrorCode::NotPSD);
  Eigen::MatrixXd singular(2, 2);
  singular << 1.0, 1.0, 1.0, 1.0;
  CHECK_NOTHROW(symmetric_root(singular));
}

TEST_CASE("max critical values") {
  Eigen::MatrixXd one(1, 1);
  one << 1.0;
  CHECK(mc_critical_value(one, 0.05, 100000, 7, false) == doctest::Approx(3.8415).epsilon(0.04));
  CHECK(mc_critical_value(one, 0.05, 100000, 7, true) == doctest::Approx(3.8415).epsilon(0.04));
  const double two = mc_critical_value(Eigen::MatrixXd::Identity(2, 2), 0.05, 100000, 8, false);
  CHECK(std::fabs(two - oracle::max_chi2_quantile(2, 0.05)) < 0.1);
  CHECK(oracle::max_chi2_quantile(2, 0.05) == doctest::Approx(5.002).epsilon(1e-3));
  for (int k : {3, 6}) {
    const double c = mc_critical_value(Eigen::MatrixXd::Identity(k, k), 0.05, 100000, 9, false);
    CHECK(std::fabs(c - oracle::max_chi2_quantile(k, 0.05)) < 0.1);
  }
}

TEST_CASE("unstudentized critical value scales with V") {
  const Eigen::MatrixXd v = random_spd(3, 10);
  const double a = mc_critical_value(v, 0.05, 20000, 11, false);
  const double b = mc_critical_value(4.0 * v, 0.05, 20000, 11, false);
  CHECK(b / a == doctest::Approx(4.0).epsilon(1e-9));
  const double sa = mc_critical_value(v, 0.05, 20000, 11, true);
  const double sb = mc_critical_value(4.0 * v, 0.05, 20000, 11, true);
  CHECK(sb == doctest::Approx(sa).epsilon(1e-9));
}

TEST_CASE("max statistic and decisions") {
  const auto r = max_test(vec({3.0, -4.0}), Eigen::MatrixXd::Identity(2, 2), 0.05, 5000, 1, false);
  CHECK(r.statistic == 16.0);
  CHECK(r.reject);
  CHECK(*r.mc_draws == 5000);
  CHECK(*r.seed == 1);
  const auto z = max_test(vec({0.0, 0.0}), Eigen::MatrixXd::Identity(2, 2), 0.05, 5000, 1, true);
  CHECK_FALSE(z.reject);
  CHECK(*z.p_value == 1.0);
}

TEST_CASE("studentized max is scale invariant, unstudentized is not") {
  const Eigen::MatrixXd v = random_spd(3, 12);
  auto t = vec({1.0, -2.5, 0.7});
  const auto both = max_tests(t, v, 0.05, 20000, 5);
  Eigen::VectorXd d(3);
  d << 10.0, 0.2, 1.0;
  auto ts = t;
  ts.t = t.t.cwiseProduct(d);
  const Eigen::MatrixXd vs = d.asDiagonal() * v * d.asDiagonal();
  const auto scaled = max_tests(ts, vs, 0.05, 20000, 5);
  CHECK(scaled[1].statistic == doctest::Approx(both[1].statistic).epsilon(1e-12));
  // the symmetric root of the rescaled V gives different draws from the same
  // distribution, so critical values agree up to Monte Carlo error
  CHECK(scaled[1].critical_value == doctest::Approx(both[1].critical_value).epsilon(0.02));
  CHECK(scaled[1].reject == both[1].reject);
  CHECK(scaled[0].statistic != doctest::Approx(both[0].statistic));
  // shared draws give the same answers as the single-variant entry point
  const auto single = max_test(t, v, 0.05, 20000, 5, true);
  CHECK(single.critical_value == both[1].critical_value);
  CHECK(single.p_value == both[1].p_value);
}

TEST_CASE("max test p-value counts strict exceedances") {
  Eigen::MatrixXd one(1, 1);
  one << 1.0;
  const auto dist = simulate_max_distribution(one, 4000, 3);
  const auto r = max_test(vec({1.5}), one, 0.05, 4000, 3, false);
  const auto exceed = std::count_if(dist.max_sq.begin(), dist.max_sq.end(), [](double g) { return g > 2.25; });
  CHECK(*r.p_value == doctest::Approx(exceed / 4000.0));
  CHECK(*r.p_value == doctest::Approx(2.0 * (1.0 - normal_cdf(1.5))).epsilon(0.15));
}

TEST_CASE("empirical quantile conventions") {
  std::vector<double> v{5, 1, 4, 2, 3};
  CHECK(empirical_quantile(v, 0.0) == 0.0);
  CHECK(empirical_quantile(v, 0.2) == 1.0);
  CHECK(empirical_quantile(v, 0.5) == 3.0);
  CHECK(empirical_quantile(v, 0.95) == 5.0);
  CHECK(empirical_quantile(v, 1.0) == 5.0);
  CHECK(code_of([] { empirical_quantile({}, 0.5); }) == ErrorCode::InvalidConfig);
}

TEST_CASE("max draws are reproducible and seed dependent") {
  const Eigen::MatrixXd v = random_spd(4, 13);
  const auto a = simulate_max_distribution(v, 3000, 99);
  const auto b = simulate_max_distribution(v, 3000, 99);
  const auto c = simulate_max_distribution(v, 3000, 100);
  CHECK(a.max_sq == b.max_sq);
  CHECK(a.max_studentized == b.max_studentized);
  CHECK(a.max_sq != c.max_sq);
  // a shorter run is a prefix of a longer one
  const auto shorter = simulate_max_distribution(v, 1000, 99);
  CHECK(std::equal(shorter.max_sq.begin(), shorter.max_sq.end(), a.max_sq.begin()));
}

TEST_CASE("naive and bonferroni") {
  Eigen::MatrixXd v = Eigen::MatrixXd::Identity(3, 3);
  const auto r = naive_test(vec({2.5, 0.0, 0.0}), v, 0.05);
  CHECK(r.reject);
  CHECK(r.statistic == 2.5);
  CHECK(r.components.size() == 3);
  CHECK_FALSE(naive_test(vec({1.9, -1.9, 0.5}), v, 0.05).reject);
  const auto b = bonferroni_test(vec({0.0, 0.0, 0.0, 0.0, 2.6}), Eigen::MatrixXd::Identity(5, 5), 0.05);
  CHECK(b.critical_value == doctest::Approx(2.5758).epsilon(1e-4));
  CHECK(b.reject);
  CHECK(*b.p_value == doctest::Approx(5 * 2 * (1 - normal_cdf(2.6))));
  v(1, 1) = 0.0;
  CHECK(code_of([&] { naive_test(vec({1.0, 1.0, 1.0}), v, 0.05); }) == ErrorCode::ComponentDegenerate);
}

TEST_CASE("single component: bonferroni equals naive, wald equals max") {
  Eigen::MatrixXd v(1, 1);
  v << 0.7;
  int disagree = 0;
  std::mt19937_64 gen(5);
  std::normal_distribution<double> nd(0.0, 1.4);
  for (int i = 0; i < 200; ++i) {
    const auto t = vec({nd(gen)});
    CHECK(naive_test(t, v, 0.05).reject == bonferroni_test(t, v, 0.05).reject);
    disagree += wald_test(t, v, 0.05).reject != max_test(t, v, 0.05, 20000, 77, false).reject;
  }
  CHECK(disagree <= 2);
}

TEST_CASE("alpha = 1 rejects everything with a nonzero statistic") {
  const auto t = vec({0.01, -0.02});
  const Eigen::MatrixXd v = Eigen::MatrixXd::Identity(2, 2);
  CHECK(naive_test(t, v, 1.0).reject);
  CHECK(bonferroni_test(t, v, 1.0).reject);
  CHECK(wald_test(t, v, 1.0).reject);
  CHECK(max_test(t, v, 1.0, 1000, 1, false).reject);
  const auto zero = vec({0.0, 0.0});
  CHECK(bonferroni_test(zero, v, 1.0).reject);
  CHECK(wald_test(zero, v, 1.0).reject);
}

TEST_CASE("procedure names") {
  for (auto p : kAllProcedures) CHECK(parse_procedure(to_string(p)) == p);
  CHECK(code_of([] { parse_procedure("holm"); }) == ErrorCode::InvalidConfig);
}

}  // TEST_SUITE
