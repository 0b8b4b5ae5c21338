#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "rdjoint/error.hpp"
#include "rdjoint/io.hpp"

namespace rdjoint {
namespace {

std::vector<std::string> split_row(std::string_view line, char delim) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur.push_back('"');
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == delim) {
      out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(std::move(cur));
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

bool is_missing(std::string_view s) {
  return s.empty() || s == "NA" || s == "na" || s == "nan" || s == "NaN";
}

std::optional<double> parse_number(std::string_view s) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

}  // namespace

DatasetLoad parse_dataset_text(std::string_view text, const std::string& x_column,
                               const std::vector<std::string>& z_columns, double cutoff,
                               char delimiter) {
  std::istringstream in{std::string(text)};
  std::string line;
  // header (skip a UTF-8 byte order mark)
  if (!std::getline(in, line)) throw Error(ErrorCode::EmptyAfterFiltering, "dataset is empty");
  if (line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
  const auto header = split_row(line, delimiter);
  auto column_of = [&](const std::string& name) {
    for (std::size_t c = 0; c < header.size(); ++c) {
      if (trim(header[c]) == name) return c;
    }
    throw Error(ErrorCode::MissingColumn, "column '" + name + "' not found in header");
  };
  std::vector<std::size_t> cols{column_of(x_column)};
  for (const auto& z : z_columns) cols.push_back(column_of(z));

  DatasetLoad out;
  out.sample.names = z_columns;
  out.sample.z.assign(z_columns.size(), {});
  std::size_t row = 1;
  std::vector<double> vals(cols.size());
  while (std::getline(in, line)) {
    ++row;
    if (trim(line).empty()) continue;
    const auto cells = split_row(line, delimiter);
    bool missing = false;
    for (std::size_t c = 0; c < cols.size(); ++c) {
      const std::string_view cell = cols[c] < cells.size() ? trim(cells[cols[c]]) : std::string_view{};
      if (is_missing(cell)) {
        missing = true;
        continue;
      }
      const auto v = parse_number(cell);
      if (!v) {
        throw Error(ErrorCode::NonNumericCell, "row " + std::to_string(row) + ", column '" +
                                                   std::string(trim(header[cols[c]])) + "': '" +
                                                   std::string(cell) + "' is not a number");
      }
      vals[c] = *v;
    }
    if (missing) {
      ++out.dropped_rows;
      continue;
    }
    out.sample.x.push_back(vals[0] - cutoff);
    for (std::size_t k = 0; k < z_columns.size(); ++k) out.sample.z[k].push_back(vals[k + 1]);
  }
  if (out.sample.x.empty()) {
    throw Error(ErrorCode::EmptyAfterFiltering, "no complete rows in the selected columns");
  }
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::Io, "cannot open '" + path + "'");
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

DatasetLoad parse_dataset(const std::string& path, const std::string& x_column,
                          const std::vector<std::string>& z_columns, double cutoff, char delimiter) {
  return parse_dataset_text(read_file(path), x_column, z_columns, cutoff, delimiter);
}

}  // namespace rdjoint
