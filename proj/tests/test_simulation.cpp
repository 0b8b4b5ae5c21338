#include <cmath>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "rdjoint/error.hpp"
#include "rdjoint/rng.hpp"
#include "rdjoint/simulation.hpp"

using namespace rdjoint;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an rdjoint::Error");
  return ErrorCode::Io;
}

ExperimentOptions small_options(std::uint64_t seed, int reps, unsigned threads) {
  ExperimentOptions o;
  o.replications = reps;
  o.threads = threads;
  o.run.seed = seed;
  o.run.mc_draws = 2000;
  return o;
}

}  // namespace

TEST_SUITE("simulation") {

TEST_CASE("philox known-answer vectors") {
  // Random123 kat_vectors for philox4x32_10
  auto a = philox4x32({0, 0, 0, 0}, {0, 0});
  CHECK(a[0] == 0x6627e8d5u);
  CHECK(a[1] == 0xe169c58du);
  CHECK(a[2] == 0xbc57ac4cu);
  CHECK(a[3] == 0x9b00dbd8u);
  auto b = philox4x32({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu}, {0xffffffffu, 0xffffffffu});
  CHECK(b[0] == 0x408f276du);
  CHECK(b[1] == 0x41c83b0eu);
  CHECK(b[2] == 0xa20bc7c6u);
  CHECK(b[3] == 0x6d5451fdu);
}

TEST_CASE("counter streams are reproducible and independent") {
  CounterStream a(5, 1), b(5, 1), c(5, 2);
  for (int i = 0; i < 100; ++i) {
    const auto va = a(), vb = b(), vc = c();
    CHECK(va == vb);
    CHECK(va != vc);
  }
  CounterStream u(9, 0);
  double mean = 0.0, sq = 0.0;
  const int m = 200000;
  for (int i = 0; i < m; ++i) {
    const double g = u.normal();
    mean += g;
    sq += g * g;
  }
  CHECK(std::fabs(mean / m) < 0.01);
  CHECK(sq / m == doctest::Approx(1.0).epsilon(0.01));
  CHECK(derive_seed(1, 2) != derive_seed(2, 1));
  CHECK(derive_seed(1, 2) == derive_seed(1, 2));
}

TEST_CASE("lambda") {
  const std::vector<double> any{0.4, -2.0, 3.0};
  CHECK(lambda_eval(any, 0.0) == 0.0);
  const std::vector<double> identity{1.0};
  CHECK(lambda_eval(identity, 0.5) == 0.5);
  for (double x : {0.1, -0.3, 0.77}) {
    CHECK(lambda_eval(kDefaultLambda, x) == doctest::Approx(oracle::poly(kDefaultLambda, x)).epsilon(1e-14));
  }
}

TEST_CASE("assignment probability follows p_manip") {
  DgpConfig c;
  c.n = 100000;
  c.seed = 1;
  for (double p : {0.5, 0.3}) {
    c.p_manip = p;
    const auto s = simulate_sample(c);
    double right = 0.0;
    for (double x : s.x) right += x >= 0.0;
    right /= static_cast<double>(c.n);
    const double se = std::sqrt(p * (1 - p) / c.n);
    CHECK(std::fabs(right - (1.0 - p)) < 4.0 * se);
    for (double x : s.x) CHECK(std::fabs(x) <= 1.0);
  }
}

TEST_CASE("equicorrelated covariates") {
  DgpConfig c;
  c.n = 100000;
  c.d = 3;
  c.rho = 0.9;
  c.seed = 2;
  const auto s = simulate_sample(c);
  std::vector<std::vector<double>> e(3, std::vector<double>(c.n));
  for (int k = 0; k < 3; ++k)
    for (std::size_t i = 0; i < c.n; ++i) e[k][i] = s.z[k][i] - lambda_eval(kDefaultLambda, s.x[i]);
  auto corr = [&](int a, int b) {
    double sab = 0, saa = 0, sbb = 0, ma = 0, mb = 0;
    for (std::size_t i = 0; i < c.n; ++i) {
      ma += e[a][i];
      mb += e[b][i];
    }
    ma /= c.n;
    mb /= c.n;
    for (std::size_t i = 0; i < c.n; ++i) {
      sab += (e[a][i] - ma) * (e[b][i] - mb);
      saa += (e[a][i] - ma) * (e[a][i] - ma);
      sbb += (e[b][i] - mb) * (e[b][i] - mb);
    }
    return sab / std::sqrt(saa * sbb);
  };
  CHECK(std::fabs(corr(0, 1) - 0.9) < 0.02);
  CHECK(std::fabs(corr(1, 2) - 0.9) < 0.02);
}

TEST_CASE("covariate jump only on the last covariate, right side") {
  DgpConfig c;
  c.n = 500;
  c.d = 2;
  c.seed = 3;
  const auto base = simulate_sample(c);
  c.a = 1.5;
  const auto jump = simulate_sample(c);
  for (std::size_t i = 0; i < c.n; ++i) {
    CHECK(base.x[i] == jump.x[i]);
    CHECK(base.z[0][i] == jump.z[0][i]);
    CHECK(jump.z[1][i] - base.z[1][i] == doctest::Approx(base.x[i] >= 0.0 ? 1.5 : 0.0));
  }
}

TEST_CASE("density jump relation") {
  CHECK(boundary_density(0.12) == doctest::Approx(6.649).epsilon(1e-3));
  CHECK(density_jump(0.5, 0.12) == 0.0);
  const double p = manipulation_for_density_jump(0.15, 0.12);
  CHECK(density_jump(p, 0.12) == doctest::Approx(0.15).epsilon(1e-12));
  CHECK(p == doctest::Approx(0.48872).epsilon(1e-4));
  CHECK(code_of([] { manipulation_for_density_jump(-1.0, 0.12); }) == ErrorCode::InvalidConfig);
}

TEST_CASE("dgp validation") {
  DgpConfig c;
  c.rho = 1.0;
  CHECK(code_of([&] { simulate_sample(c); }) == ErrorCode::InvalidConfig);
  c.rho = 0.0;
  c.p_manip = 0.7;
  CHECK(code_of([&] { simulate_sample(c); }) == ErrorCode::InvalidConfig);
  c.p_manip = 0.4;
  CHECK(code_of([&] { empirical_size(c, small_options(1, 5, 1)); }) == ErrorCode::InvalidConfig);
}

TEST_CASE("experiments are bitwise identical across thread counts") {
  DgpConfig c;
  c.n = 400;
  c.d = 2;
  const auto one = run_experiment(c, small_options(17, 24, 1));
  const auto four = run_experiment(c, small_options(17, 24, 4));
  REQUIRE(one.records.size() == four.records.size());
  CHECK(one.rejections == four.rejections);
  for (std::size_t r = 0; r < one.records.size(); ++r) {
    CHECK(one.records[r].tau == four.records[r].tau);
    CHECK(one.records[r].se == four.records[r].se);
    CHECK(one.records[r].statistic == four.records[r].statistic);
  }
  const auto other = run_experiment(c, small_options(18, 24, 1));
  CHECK(other.records[0].tau != one.records[0].tau);
}

TEST_CASE("alpha = 1 rejects in every replication") {
  DgpConfig c;
  c.n = 400;
  c.d = 2;
  auto o = small_options(5, 10, 1);
  o.run.alpha = 1.0;
  const auto r = empirical_size(c, o);
  for (auto p : kAllProcedures) CHECK(r.rate(p) == 1.0);
}

TEST_CASE("size adjustment against itself gives alpha") {
  DgpConfig c;
  c.n = 400;
  c.d = 1;
  const auto r = empirical_size(c, small_options(6, 100, 1));
  const auto adj = size_adjusted_power(r, r, 0.05);
  for (auto p : kAllProcedures) {
    CHECK(std::fabs(adj.rate.at(p) - 0.05) <= 0.01 + 1e-12);
    CHECK_FALSE(adj.degenerate.at(p));
  }
}

TEST_CASE("tied null statistics are flagged") {
  ExperimentResult null_r, alt_r;
  for (int i = 0; i < 20; ++i) {
    ReplicationRecord rec;
    rec.ok = true;
    rec.statistic[Procedure::Wald] = 1.0;
    rec.reject[Procedure::Wald] = false;
    null_r.records.push_back(rec);
    rec.statistic[Procedure::Wald] = 2.0;
    alt_r.records.push_back(rec);
  }
  null_r.decided[Procedure::Wald] = 20;
  const auto adj = size_adjusted_power(null_r, alt_r, 0.05);
  CHECK(adj.degenerate.at(Procedure::Wald));
  CHECK(adj.rate.at(Procedure::Wald) == 1.0);
  ExperimentResult empty;
  CHECK(code_of([&] { size_adjusted_power(empty, alt_r, 0.05); }) == ErrorCode::MissingStatistics);
}

TEST_CASE("power curve uses common seeds") {
  DgpConfig c;
  c.n = 400;
  c.d = 1;
  const std::vector<double> grid{0.0, 1.0};
  const auto curve = power_curve(c, grid, small_options(8, 10, 1));
  REQUIRE(curve.size() == 2);
  // covariate jump leaves the density component untouched
  for (std::size_t r = 0; r < 10; ++r) CHECK(curve[0].records[r].tau.back() == curve[1].records[r].tau.back());
}

}  // TEST_SUITE
