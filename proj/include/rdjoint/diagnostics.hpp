#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rdjoint/config.hpp"
#include "rdjoint/joint_tests.hpp"
#include "rdjoint/sample.hpp"

namespace rdjoint {

inline constexpr const char* kSchemaVersion = "1.0";

struct ComponentSummary {
  std::string name;  // covariate name, or "density"
  double tau = 0.0;
  double se = 0.0;   // standard error of tau
  double h = 0.0;
  bool included = true;  // false when dropped from the joint vector
  std::string note;

  bool operator==(const ComponentSummary&) const = default;
};

struct ProcedureReport {
  Procedure procedure = Procedure::Wald;
  bool available = false;
  double statistic = 0.0;
  std::vector<double> component_statistics;
  double critical_value = 0.0;
  std::optional<double> p_value;
  bool reject = false;
  std::optional<std::int64_t> mc_draws;
  std::optional<std::uint64_t> seed;
  std::string notes;

  bool operator==(const ProcedureReport&) const = default;
};

struct Report {
  std::string schema_version = kSchemaVersion;
  RunConfig config;
  std::vector<ComponentSummary> components;
  std::vector<ProcedureReport> procedures;
  std::vector<std::string> warnings;

  const ProcedureReport* find(Procedure p) const;
  /// True when every component was estimated and kept.
  bool all_components_ok() const;

  bool operator==(const Report&) const = default;
};

/// One pass: fits, covariance, statistic vector, then every requested
/// procedure. Component failures drop that component with a warning; a
/// procedure that cannot run is reported unavailable with its cause.
Report run_joint_diagnostics(const Sample& sample, const RunConfig& config);

}  // namespace rdjoint
