#include <charconv>
#include <cmath>
#include <set>
#include <sstream>

#include "rdjoint/error.hpp"
#include "rdjoint/io.hpp"

namespace rdjoint {
namespace {

using nlohmann::json;

[[noreturn]] void bad(const std::string& path, const std::string& why) {
  throw Error(ErrorCode::InvalidConfig, path + ": " + why);
}

double number_at(const json& v, const std::string& path) {
  if (!v.is_number()) bad(path, "expected a number");
  return v.get<double>();
}

int int_at(const json& v, const std::string& path) {
  if (!v.is_number_integer()) bad(path, "expected an integer");
  return v.get<int>();
}

std::optional<double> bandwidth_at(const json& v, const std::string& path) {
  if (v.is_string()) {
    if (v.get<std::string>() == "auto") return std::nullopt;
    bad(path, "expected a positive number or \"auto\"");
  }
  return number_at(v, path);
}

std::optional<double> parse_bandwidth_token(std::string_view tok, const std::string& path) {
  if (tok == "auto") return std::nullopt;
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size()) bad(path, "'" + std::string(tok) + "' is not a number or auto");
  return v;
}

std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (!tok.empty()) out.push_back(tok);
  }
  return out;
}

}  // namespace

RunConfig config_from_json(const json& j, const std::string& source) {
  if (!j.is_object()) bad("$", "config must be a JSON object");
  static const std::set<std::string> known = {"seed", "cutoff", "kernel", "l", "p", "bandwidths", "h_f",
                                              "alpha", "neighbors_M", "mc_draws", "procedures"};
  RunConfig c;
  for (const auto& [key, v] : j.items()) {
    if (!known.count(key)) bad(key, "unknown field");
    c.provenance[key] = source;
    if (key == "seed") {
      if (!v.is_number_unsigned()) bad(key, "expected a non-negative integer");
      c.seed = v.get<std::uint64_t>();
    } else if (key == "cutoff") {
      c.cutoff = number_at(v, key);
    } else if (key == "kernel") {
      if (!v.is_string()) bad(key, "expected \"triangular\" or \"uniform\"");
      c.kernel = parse_kernel(v.get<std::string>());
    } else if (key == "l") {
      c.mean_order = int_at(v, key);
    } else if (key == "p") {
      c.density_order = int_at(v, key);
    } else if (key == "bandwidths") {
      c.bandwidths.clear();
      if (v.is_array()) {
        for (std::size_t k = 0; k < v.size(); ++k) {
          c.bandwidths.push_back(bandwidth_at(v[k], "bandwidths[" + std::to_string(k) + "]"));
        }
      } else {
        const auto b = bandwidth_at(v, key);
        if (b) c.bandwidths.push_back(b);
      }
    } else if (key == "h_f") {
      c.density_bandwidth = bandwidth_at(v, key);
    } else if (key == "alpha") {
      c.alpha = number_at(v, key);
    } else if (key == "neighbors_M") {
      c.neighbors_m = int_at(v, key);
    } else if (key == "mc_draws") {
      if (!v.is_number_integer()) bad(key, "expected an integer");
      c.mc_draws = v.get<std::int64_t>();
    } else if (key == "procedures") {
      if (!v.is_array()) bad(key, "expected an array of procedure names");
      c.procedures.clear();
      for (std::size_t k = 0; k < v.size(); ++k) {
        if (!v[k].is_string()) bad("procedures[" + std::to_string(k) + "]", "expected a string");
        c.procedures.push_back(parse_procedure(v[k].get<std::string>()));
      }
    }
  }
  return c;
}

json config_to_json(const RunConfig& c) {
  json j;
  if (c.seed) j["seed"] = *c.seed;
  j["cutoff"] = c.cutoff;
  j["kernel"] = std::string(to_string(c.kernel));
  j["l"] = c.mean_order;
  j["p"] = c.density_order;
  if (c.bandwidths.empty()) {
    j["bandwidths"] = "auto";
  } else {
    json arr = json::array();
    for (const auto& b : c.bandwidths) arr.push_back(b ? json(*b) : json("auto"));
    j["bandwidths"] = arr;
  }
  j["h_f"] = c.density_bandwidth ? json(*c.density_bandwidth) : json("auto");
  j["alpha"] = c.alpha;
  j["neighbors_M"] = c.neighbors_m;
  j["mc_draws"] = c.mc_draws;
  json procs = json::array();
  for (Procedure p : c.procedures) procs.push_back(std::string(to_string(p)));
  j["procedures"] = procs;
  j["provenance"] = c.provenance;
  return j;
}

RunConfig parse_config(const std::optional<std::string>& path, const ConfigOverrides& f) {
  RunConfig c;
  if (path) {
    json j;
    try {
      j = json::parse(read_file(*path));
    } catch (const json::parse_error& e) {
      throw Error(ErrorCode::InvalidConfig, "$: " + std::string(e.what()));
    }
    c = config_from_json(j, "file");
  }
  auto mark = [&](const char* key) { c.provenance[key] = "flag"; };
  if (f.seed) { c.seed = *f.seed; mark("seed"); }
  if (f.cutoff) { c.cutoff = *f.cutoff; mark("cutoff"); }
  if (f.kernel) { c.kernel = parse_kernel(*f.kernel); mark("kernel"); }
  if (f.mean_order) { c.mean_order = *f.mean_order; mark("l"); }
  if (f.density_order) { c.density_order = *f.density_order; mark("p"); }
  if (f.bandwidths) {
    c.bandwidths.clear();
    const auto toks = split_commas(*f.bandwidths);
    for (std::size_t k = 0; k < toks.size(); ++k) {
      c.bandwidths.push_back(parse_bandwidth_token(toks[k], "bandwidths[" + std::to_string(k) + "]"));
    }
    if (c.bandwidths.size() == 1 && !c.bandwidths[0]) c.bandwidths.clear();
    mark("bandwidths");
  }
  if (f.density_bandwidth) {
    c.density_bandwidth = parse_bandwidth_token(*f.density_bandwidth, "h_f");
    mark("h_f");
  }
  if (f.alpha) { c.alpha = *f.alpha; mark("alpha"); }
  if (f.neighbors_m) { c.neighbors_m = *f.neighbors_m; mark("neighbors_M"); }
  if (f.mc_draws) { c.mc_draws = *f.mc_draws; mark("mc_draws"); }
  if (f.procedures) {
    c.procedures.clear();
    for (const auto& t : split_commas(*f.procedures)) c.procedures.push_back(parse_procedure(t));
    mark("procedures");
  }
  c.validate();
  return c;
}

}  // namespace rdjoint
