// rdjoint: joint density / covariate-balance diagnostics for regression
// discontinuity designs, plus the Monte Carlo size and power harness.
//
// Exit codes: 0 ran, 2 input error, 3 estimator failure. Test decisions never
// change the exit code.

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "rdjoint/error.hpp"
#include "rdjoint/io.hpp"
#include "rdjoint/simulation.hpp"

namespace {

constexpr int kExitInput = 2;
constexpr int kExitEstimator = 3;

std::vector<std::string> split(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (!tok.empty()) out.push_back(tok);
  }
  return out;
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw rdjoint::Error(rdjoint::ErrorCode::Io, "cannot write '" + path + "'");
  f << text;
}

struct TestArgs {
  std::string data, x, z, config, format = "human", output, delimiter = ",";
  rdjoint::ConfigOverrides flags;
};

int run_test(const TestArgs& a) {
  using namespace rdjoint;
  const RunConfig cfg = parse_config(a.config.empty() ? std::nullopt : std::optional<std::string>(a.config), a.flags);
  if (a.delimiter.size() != 1) throw Error(ErrorCode::InvalidConfig, "delimiter: must be one character");
  const auto load = parse_dataset(a.data, a.x, split(a.z), cfg.cutoff, a.delimiter[0]);
  Report rep = run_joint_diagnostics(load.sample, cfg);
  if (load.dropped_rows > 0) {
    rep.warnings.insert(rep.warnings.begin(), std::to_string(load.dropped_rows) + " rows with missing values dropped");
  }
  write_output(a.output, emit_report(rep, parse_report_format(a.format)));
  const bool any = std::any_of(rep.procedures.begin(), rep.procedures.end(),
                               [](const ProcedureReport& p) { return p.available; });
  if (!any) {
    std::cerr << "error: no joint test could be computed; see the report notes\n";
    return kExitEstimator;
  }
  return 0;
}

struct SimArgs {
  std::string dgp_config, n_list = "500,1000", dims = "1,3,5,10,25", a_grid = "0,0.5,1,1.5,2";
  std::string run_config, output, json_output;
  double rho = 0.0, tau_f = 0.15, alpha = 0.05;
  int d = 5, n = 1000, reps = 3000;
  std::int64_t mc_draws = rdjoint::kDefaultMcDraws;
  std::uint64_t seed = 0;
  bool seed_given = false, size_adjusted = true;
  unsigned threads = 0;
};

rdjoint::ExperimentOptions experiment_options(const SimArgs& a) {
  using namespace rdjoint;
  if (!a.seed_given) throw Error(ErrorCode::InvalidConfig, "seed: required (no default seed)");
  ExperimentOptions opt;
  if (!a.run_config.empty()) opt.run = config_from_json(nlohmann::json::parse(read_file(a.run_config)));
  opt.run.seed = a.seed;
  opt.run.alpha = a.alpha;
  opt.run.mc_draws = a.mc_draws;
  opt.run.validate();
  opt.replications = a.reps;
  opt.threads = a.threads;
  return opt;
}

rdjoint::DgpConfig base_dgp(const SimArgs& a) {
  rdjoint::DgpConfig c;
  if (!a.dgp_config.empty()) c = rdjoint::dgp_from_json(nlohmann::json::parse(rdjoint::read_file(a.dgp_config)));
  c.rho = a.rho;
  return c;
}

int run_simulate_size(const SimArgs& a) {
  using namespace rdjoint;
  const auto opt = experiment_options(a);
  DgpConfig base = base_dgp(a);
  base.p_manip = 0.5;
  base.a = 0.0;
  std::vector<ExperimentResult> rows;
  nlohmann::json all = nlohmann::json::array();
  for (const auto& n_tok : split(a.n_list)) {
    for (const auto& d_tok : split(a.dims)) {
      DgpConfig c = base;
      c.n = std::stoul(n_tok);
      c.d = std::stoi(d_tok);
      rows.push_back(empirical_size(c, opt));
      all.push_back(experiment_to_json(rows.back()));
      std::cerr << "n=" << c.n << " d=" << c.d << " done (" << rows.back().failures << " failures)\n";
    }
  }
  write_output(a.output, size_table_csv(rows));
  if (!a.json_output.empty()) write_output(a.json_output, all.dump(2) + "\n");
  return 0;
}

int run_simulate_power(const SimArgs& a) {
  using namespace rdjoint;
  const auto opt = experiment_options(a);
  DgpConfig base = base_dgp(a);
  base.n = static_cast<std::size_t>(a.n);
  base.d = a.d;
  base.p_manip = manipulation_for_density_jump(a.tau_f, base.sigma_x);
  std::vector<double> grid;
  for (const auto& t : split(a.a_grid)) grid.push_back(std::stod(t));
  std::cerr << "tau_f = " << a.tau_f << " induced by p_manip = " << base.p_manip
            << " (tau_f = (1 - 2 p) * f0, f0 = " << boundary_density(base.sigma_x) << ")\n";
  const auto curve = power_curve(base, grid, opt);
  std::optional<ExperimentResult> null_result;
  if (a.size_adjusted) {
    DgpConfig null_cfg = base;
    null_cfg.p_manip = 0.5;
    null_cfg.a = 0.0;
    null_result = empirical_size(null_cfg, opt);
  }
  write_output(a.output, power_table_csv(curve, a.tau_f, null_result ? &*null_result : nullptr));
  if (!a.json_output.empty()) {
    nlohmann::json all = nlohmann::json::array();
    for (const auto& r : curve) all.push_back(experiment_to_json(r));
    write_output(a.json_output, all.dump(2) + "\n");
  }
  return 0;
}

struct CritArgs {
  std::string v_path;
  double alpha = 0.05;
  std::int64_t draws = rdjoint::kDefaultMcDraws;
  std::uint64_t seed = 0;
  bool studentized = false, json = false;
};

int run_critical_value(const CritArgs& a) {
  using namespace rdjoint;
  if (!(a.alpha > 0.0 && a.alpha <= 1.0)) throw Error(ErrorCode::InvalidConfig, "alpha: must lie in (0, 1]");
  const Eigen::MatrixXd v = parse_matrix_text(read_file(a.v_path));
  const double cv = mc_critical_value(v, a.alpha, a.draws, a.seed, a.studentized);
  if (a.json) {
    nlohmann::json j = {{"critical_value", cv}, {"alpha", a.alpha}, {"mc_draws", a.draws},
                        {"seed", a.seed}, {"studentized", a.studentized}, {"dimension", v.rows()}};
    std::cout << j.dump(2) << "\n";
  } else {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g\n", cv);
    std::cout << buf;
  }
  return 0;
}

void add_sim_common(CLI::App* cmd, SimArgs& a) {
  cmd->add_option("--seed", a.seed, "Master seed (required)")->required()->each([&](const std::string&) { a.seed_given = true; });
  cmd->add_option("--reps", a.reps, "Replications per configuration")->capture_default_str();
  cmd->add_option("--rho", a.rho, "Pairwise covariate correlation")->capture_default_str();
  cmd->add_option("--alpha", a.alpha, "Nominal level")->capture_default_str();
  cmd->add_option("--mc-draws", a.mc_draws, "Monte Carlo draws for max-test critical values")->capture_default_str();
  cmd->add_option("--threads", a.threads, "Worker threads (0 = all cores)");
  cmd->add_option("--dgp", a.dgp_config, "DGP config JSON (n, d, rho, lambda_coeffs, sigma_x)");
  cmd->add_option("--run-config", a.run_config, "Run config JSON for the per-replication diagnostics");
  cmd->add_option("-o,--out", a.output, "CSV output path (default stdout)");
  cmd->add_option("--json-out", a.json_output, "Also write per-configuration JSON results");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Joint manipulation and covariate balance tests for RD designs"};
  app.require_subcommand(1);

  TestArgs targs;
  auto* test = app.add_subcommand("test", "Run the joint diagnostics on a dataset");
  test->add_option("--data", targs.data, "Delimited dataset with header")->required();
  test->add_option("--x", targs.x, "Running variable column")->required();
  test->add_option("--z", targs.z, "Comma-separated covariate columns");
  test->add_option("--config", targs.config, "JSON run config");
  test->add_option("--format", targs.format, "human, json or csv")->capture_default_str();
  test->add_option("-o,--output", targs.output, "Output path (default stdout)");
  test->add_option("--delimiter", targs.delimiter, "Field delimiter")->capture_default_str();
  test->add_option("--seed", targs.flags.seed, "Seed for Monte Carlo critical values");
  test->add_option("--cutoff", targs.flags.cutoff, "Cutoff subtracted from x");
  test->add_option("--kernel", targs.flags.kernel, "triangular or uniform");
  test->add_option("--l", targs.flags.mean_order, "Polynomial order for covariate means");
  test->add_option("--p", targs.flags.density_order, "Polynomial order for the density");
  test->add_option("--bandwidths", targs.flags.bandwidths, "Covariate bandwidths: auto, h, or h1,h2,...");
  test->add_option("--h-f", targs.flags.density_bandwidth, "Density bandwidth or auto");
  test->add_option("--alpha", targs.flags.alpha, "Nominal level");
  test->add_option("--neighbors", targs.flags.neighbors_m, "Nearest neighbors for the covariance");
  test->add_option("--mc-draws", targs.flags.mc_draws, "Monte Carlo draws for the max tests");
  test->add_option("--procedures", targs.flags.procedures, "Comma-separated subset of naive,bonferroni,wald,max,max_studentized");

  SimArgs size_args;
  auto* sim_size = app.add_subcommand("simulate-size", "Empirical size table under the null DGP");
  add_sim_common(sim_size, size_args);
  sim_size->add_option("--n", size_args.n_list, "Comma-separated sample sizes")->capture_default_str();
  sim_size->add_option("--dims", size_args.dims, "Comma-separated covariate counts")->capture_default_str();

  SimArgs power_args;
  auto* sim_power = app.add_subcommand("simulate-power", "Power curve over the covariate jump a");
  add_sim_common(sim_power, power_args);
  sim_power->add_option("--n", power_args.n, "Sample size")->capture_default_str();
  sim_power->add_option("--d", power_args.d, "Covariate count")->capture_default_str();
  sim_power->add_option("--tau-f", power_args.tau_f, "Density jump under the alternative")->capture_default_str();
  sim_power->add_option("--a", power_args.a_grid, "Comma-separated grid of covariate jumps")->capture_default_str();
  sim_power->add_flag("!--no-size-adjusted", power_args.size_adjusted, "Skip the null run used for size adjustment");

  CritArgs cargs;
  auto* crit = app.add_subcommand("critical-value", "Monte Carlo max-test critical value for a covariance");
  crit->add_option("--v", cargs.v_path, "Covariance matrix file (JSON or delimited rows)")->required();
  crit->add_option("--alpha", cargs.alpha, "Nominal level")->capture_default_str();
  crit->add_option("--draws", cargs.draws, "Monte Carlo draws")->capture_default_str();
  crit->add_option("--seed", cargs.seed, "Seed")->required();
  crit->add_flag("--studentized", cargs.studentized, "Quantile of max_j g_j^2 / V_jj");
  crit->add_flag("--json", cargs.json, "JSON output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitInput;
  }

  try {
    if (*test) return run_test(targs);
    if (*sim_size) return run_simulate_size(size_args);
    if (*sim_power) return run_simulate_power(power_args);
    if (*crit) return run_critical_value(cargs);
  } catch (const rdjoint::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return rdjoint::is_input_error(e.code()) ? kExitInput : kExitEstimator;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
  return 0;
}
