#include <cstdio>
#include <sstream>

#include "rdjoint/error.hpp"
#include "rdjoint/io.hpp"

namespace rdjoint {

using nlohmann::json;

ReportFormat parse_report_format(std::string_view name) {
  if (name == "human") return ReportFormat::Human;
  if (name == "json") return ReportFormat::Json;
  if (name == "csv") return ReportFormat::Csv;
  throw Error(ErrorCode::InvalidConfig, "format: expected human, json or csv");
}

json report_to_json(const Report& r) {
  json j;
  j["schema_version"] = r.schema_version;
  j["config_echo"] = config_to_json(r.config);
  json comps = json::array();
  for (const auto& c : r.components) {
    comps.push_back({{"name", c.name}, {"tau", c.tau}, {"se", c.se}, {"h", c.h},
                     {"included", c.included}, {"note", c.note}});
  }
  j["components"] = comps;
  json procs = json::object();
  for (const auto& p : r.procedures) {
    json e;
    e["available"] = p.available;
    e["statistic"] = p.available ? json(p.statistic) : json(nullptr);
    e["critical_value"] = p.available ? json(p.critical_value) : json(nullptr);
    if (p.p_value) e["p_value"] = *p.p_value;
    e["reject"] = p.reject;
    e["notes"] = p.notes;
    if (!p.component_statistics.empty()) e["component_statistics"] = p.component_statistics;
    if (p.mc_draws) e["mc_draws"] = *p.mc_draws;
    if (p.seed) e["seed"] = *p.seed;
    procs[std::string(to_string(p.procedure))] = e;
  }
  j["procedures"] = procs;
  j["warnings"] = r.warnings;
  return j;
}

Report report_from_json(const json& j) {
  try {
    Report r;
    r.schema_version = j.at("schema_version").get<std::string>();
    json echo = j.at("config_echo");
    std::map<std::string, std::string> prov;
    if (echo.contains("provenance")) {
      prov = echo["provenance"].get<std::map<std::string, std::string>>();
      echo.erase("provenance");
    }
    r.config = config_from_json(echo);
    r.config.provenance = prov;
    for (const auto& c : j.at("components")) {
      ComponentSummary s;
      s.name = c.at("name").get<std::string>();
      s.tau = c.at("tau").get<double>();
      s.se = c.at("se").get<double>();
      s.h = c.at("h").get<double>();
      s.included = c.value("included", true);
      s.note = c.value("note", "");
      r.components.push_back(s);
    }
    const auto& procs = j.at("procedures");
    for (Procedure proc : r.config.procedures) {
      const std::string key(to_string(proc));
      if (!procs.contains(key)) continue;
      const auto& e = procs.at(key);
      ProcedureReport p;
      p.procedure = proc;
      p.available = e.at("available").get<bool>();
      if (p.available) {
        p.statistic = e.at("statistic").get<double>();
        p.critical_value = e.at("critical_value").get<double>();
      }
      if (e.contains("p_value")) p.p_value = e["p_value"].get<double>();
      p.reject = e.at("reject").get<bool>();
      p.notes = e.value("notes", "");
      if (e.contains("component_statistics")) p.component_statistics = e["component_statistics"].get<std::vector<double>>();
      if (e.contains("mc_draws")) p.mc_draws = e["mc_draws"].get<std::int64_t>();
      if (e.contains("seed")) p.seed = e["seed"].get<std::uint64_t>();
      r.procedures.push_back(p);
    }
    r.warnings = j.at("warnings").get<std::vector<std::string>>();
    return r;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidConfig, std::string("report: ") + e.what());
  }
}

namespace {

std::string num(double v, int prec = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", prec, v);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string human(const Report& r) {
  std::ostringstream os;
  os << "Joint manipulation / covariate balance diagnostics\n";
  os << "kernel " << to_string(r.config.kernel) << ", l = " << r.config.mean_order
     << ", p = " << r.config.density_order << ", alpha = " << num(r.config.alpha)
     << ", M = " << r.config.neighbors_m << "\n\n";
  char line[256];
  std::snprintf(line, sizeof line, "%-16s %12s %12s %10s  %s\n", "component", "tau", "se", "h", "status");
  os << line;
  for (const auto& c : r.components) {
    std::snprintf(line, sizeof line, "%-16s %12.6g %12.6g %10.4g  %s\n", c.name.c_str(), c.tau, c.se, c.h,
                  c.included ? "ok" : "dropped");
    os << line;
  }
  os << "\n";
  std::snprintf(line, sizeof line, "%-16s %12s %12s %10s  %s\n", "procedure", "statistic", "critical", "p-value",
                "decision");
  os << line;
  for (const auto& p : r.procedures) {
    const std::string name(to_string(p.procedure));
    if (!p.available) {
      std::snprintf(line, sizeof line, "%-16s %12s %12s %10s  %s\n", name.c_str(), "-", "-", "-", "unavailable");
      os << line;
      os << "    " << p.notes << "\n";
      continue;
    }
    const std::string pv = p.p_value ? num(*p.p_value, 4) : std::string("-");
    std::snprintf(line, sizeof line, "%-16s %12.6g %12.6g %10s  %s\n", name.c_str(), p.statistic, p.critical_value,
                  pv.c_str(), p.reject ? "reject H0" : "do not reject");
    os << line;
  }
  if (!r.warnings.empty()) {
    os << "\nwarnings:\n";
    for (const auto& w : r.warnings) os << "  - " << w << "\n";
  }
  return os.str();
}

std::string csv(const Report& r) {
  std::ostringstream os;
  os << "procedure,available,statistic,critical_value,p_value,reject,notes\n";
  for (const auto& p : r.procedures) {
    os << to_string(p.procedure) << ',' << (p.available ? "true" : "false") << ',';
    if (p.available) os << num(p.statistic, 17) << ',' << num(p.critical_value, 17);
    else os << ',';
    os << ',' << (p.p_value ? num(*p.p_value, 17) : "") << ',' << (p.reject ? "true" : "false") << ','
       << csv_field(p.notes) << '\n';
  }
  return os.str();
}

}  // namespace

std::string emit_report(const Report& r, ReportFormat format) {
  switch (format) {
    case ReportFormat::Human: return human(r);
    case ReportFormat::Json: return report_to_json(r).dump(2) + "\n";
    case ReportFormat::Csv: return csv(r);
  }
  return {};
}

}  // namespace rdjoint
