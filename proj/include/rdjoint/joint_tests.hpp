#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "rdjoint/covariance.hpp"
#include "rdjoint/kernel.hpp"
#include "rdjoint/sample.hpp"

namespace rdjoint {

enum class Procedure { Naive, Bonferroni, Wald, Max, MaxStudentized };

inline constexpr std::array<Procedure, 5> kAllProcedures = {
    Procedure::Naive, Procedure::Bonferroni, Procedure::Wald, Procedure::Max, Procedure::MaxStudentized};

std::string_view to_string(Procedure p);
Procedure parse_procedure(std::string_view name);

inline constexpr std::int64_t kDefaultMcDraws = 100000;

/// sqrt(n) * (sqrt(h_1) tau_Z1, ..., sqrt(h_d) tau_Zd, sqrt(h_f) tau_f).
struct StatisticVector {
  Eigen::VectorXd t;
  std::size_t n = 0;
  std::vector<double> bandwidths;  // h_1..h_d
  double density_bandwidth = 0.0;
};

StatisticVector make_statistic_vector(std::span<const double> tau_z, double tau_f, std::size_t n,
                                      std::span<const double> bandwidths, double h_f);

/// Fits every component and scales the jumps. SingularDesign errors name the
/// failing component.
StatisticVector statistic_vector(const Sample& sample, std::span<const double> bandwidths,
                                 double h_f, int mean_order, int density_order, KernelKind kind);

struct TestResult {
  Procedure procedure = Procedure::Wald;
  /// Joint statistic. For naive and bonferroni this is max_j |t_j| / sqrt(V_jj)
  /// and the per-component values are in `components`.
  double statistic = 0.0;
  std::vector<double> components;
  double critical_value = 0.0;
  std::optional<double> p_value;
  bool reject = false;
  double alpha = 0.05;
  std::optional<std::int64_t> mc_draws;
  std::optional<std::uint64_t> seed;
};

TestResult wald_test(const StatisticVector& t, const Eigen::MatrixXd& v, double alpha);

/// Symmetric square root of a PSD matrix. Throws NotPSD when an eigenvalue is
/// below -1e-10 * trace; smaller negative eigenvalues are clamped to zero.
Eigen::MatrixXd symmetric_root(const Eigen::MatrixXd& v);

/// Monte Carlo draws of max_j g_j^2 and max_j g_j^2 / V_jj for g ~ N(0, V).
/// Draw b uses its own counter-based stream (seed, b).
struct MaxDistribution {
  std::vector<double> max_sq;
  std::vector<double> max_studentized;  // empty if some V_jj <= 0
};
MaxDistribution simulate_max_distribution(const Eigen::MatrixXd& v, std::int64_t draws,
                                          std::uint64_t seed);

/// Smallest order statistic with empirical CDF >= level; 0 for level <= 0.
double empirical_quantile(std::vector<double> values, double level);

double mc_critical_value(const Eigen::MatrixXd& v, double alpha, std::int64_t draws,
                         std::uint64_t seed, bool studentized);

TestResult max_test(const StatisticVector& t, const Eigen::MatrixXd& v, double alpha,
                    std::int64_t draws, std::uint64_t seed, bool studentized);
/// Both max variants from one set of draws.
std::array<TestResult, 2> max_tests(const StatisticVector& t, const Eigen::MatrixXd& v,
                                    double alpha, std::int64_t draws, std::uint64_t seed);

TestResult naive_test(const StatisticVector& t, const Eigen::MatrixXd& v, double alpha);
TestResult bonferroni_test(const StatisticVector& t, const Eigen::MatrixXd& v, double alpha);

}  // namespace rdjoint
