#pragma once

// Dataset ingestion, configuration files and report/table serialization.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "rdjoint/config.hpp"
#include "rdjoint/diagnostics.hpp"
#include "rdjoint/sample.hpp"
#include "rdjoint/simulation.hpp"

namespace rdjoint {

// ---- datasets -------------------------------------------------------------

struct DatasetLoad {
  Sample sample;
  std::size_t dropped_rows = 0;  // rows with a missing value in a selected column
};

/// Delimited text with a header row. x is shifted by -cutoff. Empty, "NA" and
/// "nan" cells count as missing and drop the row.
DatasetLoad parse_dataset_text(std::string_view text, const std::string& x_column,
                               const std::vector<std::string>& z_columns, double cutoff,
                               char delimiter = ',');
DatasetLoad parse_dataset(const std::string& path, const std::string& x_column,
                          const std::vector<std::string>& z_columns, double cutoff,
                          char delimiter = ',');

// ---- run configuration ----------------------------------------------------

/// Command-line values; any engaged field overrides the file.
struct ConfigOverrides {
  std::optional<std::uint64_t> seed;
  std::optional<double> cutoff;
  std::optional<std::string> kernel;
  std::optional<int> mean_order;
  std::optional<int> density_order;
  std::optional<std::string> bandwidths;  // "auto", "0.1", or "0.1,auto,0.2"
  std::optional<std::string> density_bandwidth;  // "auto" or a number
  std::optional<double> alpha;
  std::optional<int> neighbors_m;
  std::optional<std::int64_t> mc_draws;
  std::optional<std::string> procedures;  // comma-separated
};

/// Reads a JSON config object; every field except seed is optional. Unknown
/// fields and type mismatches raise InvalidConfig with the field path.
/// Does not validate ranges.
RunConfig config_from_json(const nlohmann::json& j, const std::string& source = "file");
nlohmann::json config_to_json(const RunConfig& c);

/// File (if any) merged with overrides (flags win), then validated.
RunConfig parse_config(const std::optional<std::string>& path, const ConfigOverrides& flags);

// ---- reports ----------------------------------------------------------------

enum class ReportFormat { Human, Json, Csv };
ReportFormat parse_report_format(std::string_view name);

nlohmann::json report_to_json(const Report& r);
Report report_from_json(const nlohmann::json& j);
std::string emit_report(const Report& r, ReportFormat format);

// ---- experiments ------------------------------------------------------------

DgpConfig dgp_from_json(const nlohmann::json& j);
nlohmann::json dgp_to_json(const DgpConfig& c);
nlohmann::json experiment_to_json(const ExperimentResult& r);

/// Columns dim, n, naive, bonfe, chisq, max, max_inv.
std::string size_table_csv(const std::vector<ExperimentResult>& rows);

/// Power curve rows: a, tau_f, p_manip, then each procedure's rate, standard
/// error and (when null statistics are given) size-adjusted rate.
std::string power_table_csv(const std::vector<ExperimentResult>& curve, double tau_f,
                            const ExperimentResult* null_result);

/// Reads a covariance matrix from JSON ({"v": [[...]]} or a bare array of
/// rows) or from whitespace/comma separated rows.
Eigen::MatrixXd parse_matrix_text(std::string_view text);

std::string read_file(const std::string& path);

}  // namespace rdjoint
