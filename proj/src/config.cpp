#include "rdjoint/config.hpp"

#include <cmath>
#include <set>

#include "rdjoint/error.hpp"
#include "rdjoint/simd.hpp"

namespace rdjoint {

namespace {
[[noreturn]] void invalid(const std::string& field, const std::string& why) {
  throw Error(ErrorCode::InvalidConfig, field + ": " + why);
}
}  // namespace

void RunConfig::validate() const {
  if (!seed) invalid("seed", "required (no default seed)");
  if (!std::isfinite(cutoff)) invalid("cutoff", "must be finite");
  if (mean_order < 1 || mean_order > simd::kMaxOrder) invalid("l", "must lie in [1, 8]");
  if (density_order < 1 || density_order > simd::kMaxOrder) invalid("p", "must lie in [1, 8]");
  for (std::size_t k = 0; k < bandwidths.size(); ++k) {
    if (bandwidths[k] && !(*bandwidths[k] > 0.0 && std::isfinite(*bandwidths[k]))) {
      invalid("bandwidths[" + std::to_string(k) + "]", "must be positive");
    }
  }
  if (density_bandwidth && !(*density_bandwidth > 0.0 && std::isfinite(*density_bandwidth))) {
    invalid("h_f", "must be positive");
  }
  if (!(alpha > 0.0 && alpha <= 1.0)) invalid("alpha", "must lie in (0, 1]");
  if (neighbors_m < 1) invalid("neighbors_M", "must be at least 1");
  if (mc_draws < 1) invalid("mc_draws", "must be positive");
  if (procedures.empty()) invalid("procedures", "must name at least one procedure");
  std::set<Procedure> seen(procedures.begin(), procedures.end());
  if (seen.size() != procedures.size()) invalid("procedures", "contains duplicates");
}

}  // namespace rdjoint
