#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rdjoint/covariance.hpp"
#include "rdjoint/estimators.hpp"
#include "rdjoint/joint_tests.hpp"
#include "rdjoint/kernel.hpp"

namespace rdjoint {

struct RunConfig {
  double cutoff = 0.0;
  KernelKind kernel = KernelKind::Triangular;
  int mean_order = kDefaultMeanOrder;
  int density_order = kDefaultDensityOrder;
  /// Per-covariate bandwidths; nullopt entries (or an empty vector) mean
  /// "auto". A single entry applies to every covariate.
  std::vector<std::optional<double>> bandwidths;
  std::optional<double> density_bandwidth;
  double alpha = 0.05;
  int neighbors_m = kDefaultNeighbors;
  std::int64_t mc_draws = kDefaultMcDraws;
  std::optional<std::uint64_t> seed;
  std::vector<Procedure> procedures{kAllProcedures.begin(), kAllProcedures.end()};
  /// Where each explicitly set field came from ("file" or "flag").
  std::map<std::string, std::string> provenance;

  /// Throws InvalidConfig naming the offending field.
  void validate() const;

  bool operator==(const RunConfig&) const = default;
};

}  // namespace rdjoint
