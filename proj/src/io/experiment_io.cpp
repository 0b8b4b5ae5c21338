#include <cstdio>
#include <set>
#include <sstream>

#include "rdjoint/error.hpp"
#include "rdjoint/io.hpp"

namespace rdjoint {

using nlohmann::json;

DgpConfig dgp_from_json(const json& j) {
  if (!j.is_object()) throw Error(ErrorCode::InvalidConfig, "$: DGP config must be a JSON object");
  static const std::set<std::string> known = {"n", "d", "rho", "p_manip", "a", "lambda_coeffs", "sigma_x", "seed"};
  DgpConfig c;
  for (const auto& [key, v] : j.items()) {
    if (!known.count(key)) throw Error(ErrorCode::InvalidConfig, key + ": unknown field");
    try {
      if (key == "n") c.n = v.get<std::size_t>();
      else if (key == "d") c.d = v.get<int>();
      else if (key == "rho") c.rho = v.get<double>();
      else if (key == "p_manip") c.p_manip = v.get<double>();
      else if (key == "a") c.a = v.get<double>();
      else if (key == "lambda_coeffs") c.lambda_coeffs = v.get<std::vector<double>>();
      else if (key == "sigma_x") c.sigma_x = v.get<double>();
      else if (key == "seed") c.seed = v.get<std::uint64_t>();
    } catch (const json::exception&) {
      throw Error(ErrorCode::InvalidConfig, key + ": wrong type");
    }
  }
  c.validate();
  return c;
}

json dgp_to_json(const DgpConfig& c) {
  return {{"n", c.n}, {"d", c.d}, {"rho", c.rho}, {"p_manip", c.p_manip}, {"a", c.a},
          {"lambda_coeffs", c.lambda_coeffs}, {"sigma_x", c.sigma_x}, {"seed", c.seed}};
}

json experiment_to_json(const ExperimentResult& r) {
  json rates = json::object();
  for (const auto& [p, decided] : r.decided) {
    rates[std::string(to_string(p))] = {{"rate", r.rate(p)},
                                        {"rejections", r.rejections.at(p)},
                                        {"decided", decided},
                                        {"standard_error", r.standard_error(p)}};
  }
  return {{"config", dgp_to_json(r.config)},
          {"alpha", r.alpha},
          {"replications", r.replications},
          {"failures", r.failures},
          {"procedures", rates}};
}

namespace {
std::string fixed(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}
}  // namespace

std::string size_table_csv(const std::vector<ExperimentResult>& rows) {
  std::ostringstream os;
  os << "dim,n,naive,bonfe,chisq,max,max_inv\n";
  for (const auto& r : rows) {
    os << r.config.d << ',' << r.config.n << ',' << fixed(r.rate(Procedure::Naive)) << ','
       << fixed(r.rate(Procedure::Bonferroni)) << ',' << fixed(r.rate(Procedure::Wald)) << ','
       << fixed(r.rate(Procedure::Max)) << ',' << fixed(r.rate(Procedure::MaxStudentized)) << '\n';
  }
  return os.str();
}

std::string power_table_csv(const std::vector<ExperimentResult>& curve, double tau_f,
                            const ExperimentResult* null_result) {
  std::ostringstream os;
  os << "a,tau_f,p_manip";
  if (curve.empty()) return os.str() + "\n";
  std::vector<Procedure> procs;
  for (const auto& [p, _] : curve.front().decided) procs.push_back(p);
  for (Procedure p : procs) {
    const std::string name(to_string(p));
    os << ',' << name << ',' << name << "_se";
    if (null_result) os << ',' << name << "_size_adjusted";
  }
  os << '\n';
  for (const auto& r : curve) {
    os << r.config.a << ',' << tau_f << ',' << r.config.p_manip;
    std::optional<SizeAdjusted> adj;
    if (null_result) adj = size_adjusted_power(*null_result, r, r.alpha);
    for (Procedure p : procs) {
      os << ',' << fixed(r.rate(p)) << ',' << fixed(r.standard_error(p));
      if (adj) os << ',' << fixed(adj->rate.at(p));
    }
    os << '\n';
  }
  return os.str();
}

Eigen::MatrixXd parse_matrix_text(std::string_view text) {
  std::vector<std::vector<double>> rows;
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string_view::npos && (text[first] == '{' || text[first] == '[')) {
    json j;
    try {
      j = json::parse(text);
    } catch (const json::parse_error& e) {
      throw Error(ErrorCode::InvalidConfig, std::string("matrix: ") + e.what());
    }
    const json& m = j.is_object() ? j.at("v") : j;
    try {
      rows = m.get<std::vector<std::vector<double>>>();
    } catch (const json::exception&) {
      throw Error(ErrorCode::InvalidConfig, "v: expected an array of numeric rows");
    }
  } else {
    std::istringstream in{std::string(text)};
    std::string line;
    while (std::getline(in, line)) {
      for (char& c : line) {
        if (c == ',' || c == ';') c = ' ';
      }
      std::istringstream ls(line);
      std::vector<double> row;
      std::string tok;
      while (ls >> tok) {
        std::size_t used = 0;
        double v = 0.0;
        try {
          v = std::stod(tok, &used);
        } catch (const std::exception&) {
          used = 0;
        }
        if (used != tok.size()) throw Error(ErrorCode::NonNumericCell, "matrix entry '" + tok + "' is not a number");
        row.push_back(v);
      }
      if (!row.empty()) rows.push_back(std::move(row));
    }
  }
  const auto k = static_cast<Eigen::Index>(rows.size());
  if (k == 0) throw Error(ErrorCode::InvalidConfig, "v: matrix is empty");
  Eigen::MatrixXd v(k, k);
  for (Eigen::Index r = 0; r < k; ++r) {
    if (static_cast<Eigen::Index>(rows[static_cast<std::size_t>(r)].size()) != k) {
      throw Error(ErrorCode::InvalidConfig, "v: matrix must be square");
    }
    for (Eigen::Index c = 0; c < k; ++c) v(r, c) = rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
  }
  if (!v.isApprox(v.transpose(), 1e-12)) throw Error(ErrorCode::InvalidConfig, "v: matrix must be symmetric");
  return v;
}

}  // namespace rdjoint
