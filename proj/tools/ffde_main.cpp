// Experiment runner for the fractional fast diffusion lab. All heavy lifting
// lives behind the C API of libffde; this binary only assembles the config
// text and dispatches.

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ffde.h"

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in.good()) throw CLI::ValidationError("--config", "cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

struct ConfigBuilder {
  std::string base;
  std::vector<std::pair<std::string, std::string>> overrides;

  void set(const std::string& key, const std::string& value) { overrides.push_back({key, value}); }
  void set_if(bool given, const std::string& key, const std::string& value) {
    if (given) set(key, value);
  }
  std::string text() const {
    std::ostringstream out;
    out << base;
    if (!base.empty() && base.back() != '\n') out << '\n';
    for (const auto& [k, v] : overrides) out << k << " = " << v << "\n";
    return out.str();
  }
};

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void print_error() {
  char msg[1024];
  ffde_last_error(msg, sizeof msg);
  if (msg[0]) std::fprintf(stderr, "ffde: %s\n", msg);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fractional fast diffusion laboratory"};
  app.require_subcommand(1);

  std::string config_path, out_dir = "runs", run_dir;
  double s = 0.5, m = 0.5, scale = 1.0, gamma = 0.5;
  double dt_init = 1e-3, t_max = 1e4, adapt_c = 1e-3, extinction_eps = 0.0;
  int dim = 1, n = 64, N = 1, parallelism = 1, seed = 20220901;
  bool resume = false, as_json = false, allow_2d = false;
  std::string kind = "local", u0 = "eigenfunction", u0_path, dt_policy = "adaptive", probes = "2";
  std::vector<std::string> checks;

  std::vector<std::string> sets;
  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "config file (key = value with [sections])");
    cmd->add_option("--out", out_dir, "output directory");
    cmd->add_option("--set", sets, "override any config key, e.g. --set solver.newton_tol=1e-13")
        ->take_all();
  };
  auto add_operator_flags = [&](CLI::App* cmd) {
    cmd->add_option("--kind", kind, "operator kind: local|sfl|rfl|cfl");
    cmd->add_option("--s", s, "fractional order s");
    cmd->add_option("--dim", dim, "spatial dimension (1 or 2)");
    cmd->add_option("--n", n, "interior nodes per axis");
    cmd->add_flag("--allow-2d", allow_2d, "enable the dense 2D RFL/CFL kernels");
    cmd->add_option("--seed", seed, "base seed (FFDE_SEED overrides)");
  };

  auto* c_op = app.add_subcommand("operator", "build an operator and print its record");
  add_common(c_op);
  add_operator_flags(c_op);

  auto* c_solve = app.add_subcommand("solve", "run a flow and persist the trajectory");
  add_common(c_solve);
  add_operator_flags(c_solve);
  c_solve->add_option("--m", m, "nonlinearity exponent, 0 < m < 1");
  c_solve->add_option("--u0", u0, "initial datum: eigenfunction|point_mass|separable|bump|custom_csv");
  c_solve->add_option("--scale", scale, "initial datum scale");
  c_solve->add_option("--u0-path", u0_path, "csv path for custom_csv");
  c_solve->add_option("--dt", dt_init, "initial/fixed time step");
  c_solve->add_option("--dt-policy", dt_policy, "fixed|adaptive");
  c_solve->add_option("--adapt-c", adapt_c, "adaptive step factor");
  c_solve->add_option("--tmax", t_max, "time horizon");
  c_solve->add_option("--extinction-eps", extinction_eps, "absolute extinction threshold (0 = auto)");
  c_solve->add_option("--probes", probes, "comma list of L^p probe exponents");
  c_solve->add_option("--check", checks, "check spec name=params, e.g. smoothing=p:1;kind:lp")
      ->take_all();

  auto* c_verify = app.add_subcommand("verify", "run the estimate harness on a stored run");
  c_verify->add_option("--run", run_dir, "run directory (contains manifest.json)")->required();
  c_verify->add_option("--config", config_path, "config file with checks.* entries");
  c_verify->add_option("--set", sets, "override any config key")->take_all();
  c_verify->add_option("--check", checks, "check spec name=params (overrides manifest)")
      ->take_all();

  auto* c_sweep = app.add_subcommand("sweep", "run a parameter sweep and aggregate a phase table");
  add_common(c_sweep);
  add_operator_flags(c_sweep);
  c_sweep->add_option("--m", m, "base m");
  c_sweep->add_option("--u0", u0, "initial datum kind");
  std::string ax_m, ax_s, ax_p, ax_kind, ax_n, mode = "cartesian";
  c_sweep->add_option("--axes-m", ax_m, "comma list for the m axis");
  c_sweep->add_option("--axes-s", ax_s, "comma list for the s axis");
  c_sweep->add_option("--axes-p", ax_p, "comma list for the p axis");
  c_sweep->add_option("--axes-kind", ax_kind, "comma list for the kind axis");
  c_sweep->add_option("--axes-n", ax_n, "comma list for the n axis");
  c_sweep->add_option("--mode", mode, "cartesian|zip");
  c_sweep->add_option("--parallelism", parallelism, "concurrent workers");
  c_sweep->add_flag("--resume", resume, "skip cells with a valid manifest");

  auto* c_const = app.add_subcommand("constants", "print the exponent table");
  c_const->add_option("--N", N, "dimension");
  c_const->add_option("--s", s, "fractional order");
  c_const->add_option("--m", m, "nonlinearity exponent");
  c_const->add_option("--gamma", gamma, "boundary exponent");
  c_const->add_flag("--json", as_json, "emit JSON instead of the aligned table");

  CLI11_PARSE(app, argc, argv);

  ConfigBuilder cb;
  if (!config_path.empty()) cb.base = read_file(config_path);

  auto apply_operator_flags = [&](CLI::App* cmd) {
    cb.set_if(cmd->count("--kind") != 0, "operator.kind", kind);
    cb.set_if(cmd->count("--s") != 0, "operator.s", fmt(s));
    cb.set_if(cmd->count("--dim") != 0, "grid.dim", std::to_string(dim));
    cb.set_if(cmd->count("--n") != 0, "grid.n", std::to_string(n));
    cb.set_if(cmd->count("--allow-2d") != 0, "operator.allow_2d", "true");
    cb.set_if(cmd->count("--seed") != 0, "seed", std::to_string(seed));
  };
  auto apply_checks = [&]() {
    for (const auto& spec : checks) {
      auto eq = spec.find('=');
      std::string name = eq == std::string::npos ? spec : spec.substr(0, eq);
      std::string params = eq == std::string::npos ? "" : spec.substr(eq + 1);
      cb.set("checks." + name, params);
    }
  };
  auto apply_sets = [&]() {
    for (const auto& kv : sets) {
      auto eq = kv.find('=');
      if (eq == std::string::npos || eq == 0) {
        std::fprintf(stderr, "ffde: --set expects key=value, got '%s'\n", kv.c_str());
        std::exit(1);
      }
      cb.set(kv.substr(0, eq), kv.substr(eq + 1));
    }
  };

  if (c_op->parsed()) {
    apply_operator_flags(c_op);
    apply_sets();
    std::vector<char> buf(1 << 20);
    int rc = ffde_cmd_operator(cb.text().c_str(), out_dir.c_str(), buf.data(), buf.size());
    if (rc == 0)
      std::fputs(buf.data(), stdout);
    else
      print_error();
    return rc;
  }

  if (c_solve->parsed()) {
    apply_operator_flags(c_solve);
    cb.set_if(c_solve->count("--m") != 0, "m", fmt(m));
    cb.set_if(c_solve->count("--u0") != 0, "initial.kind", u0);
    cb.set_if(c_solve->count("--scale") != 0, "initial.scale", fmt(scale));
    cb.set_if(c_solve->count("--u0-path") != 0, "initial.path", u0_path);
    cb.set_if(c_solve->count("--dt") != 0, "solver.dt_init", fmt(dt_init));
    cb.set_if(c_solve->count("--dt-policy") != 0, "solver.dt_policy", dt_policy);
    cb.set_if(c_solve->count("--adapt-c") != 0, "solver.adapt_c", fmt(adapt_c));
    cb.set_if(c_solve->count("--tmax") != 0, "solver.t_max", fmt(t_max));
    cb.set_if(c_solve->count("--extinction-eps") != 0, "solver.extinction_eps",
              fmt(extinction_eps));
    cb.set_if(c_solve->count("--probes") != 0, "probes.p", probes);
    apply_checks();
    apply_sets();
    char run_buf[4096] = {0};
    int rc = ffde_cmd_solve(cb.text().c_str(), out_dir.c_str(), run_buf, sizeof run_buf);
    if (rc != 0) print_error();
    if (run_buf[0]) std::printf("run_dir=%s\n", run_buf);
    return rc;
  }

  if (c_verify->parsed()) {
    apply_checks();
    apply_sets();
    int rc = ffde_cmd_verify(cb.text().c_str(), run_dir.c_str());
    if (rc != 0 && rc != 5) print_error();
    if (rc == 5) std::fprintf(stderr, "ffde: at least one explicit-constant check violated\n");
    return rc;
  }

  if (c_sweep->parsed()) {
    apply_operator_flags(c_sweep);
    cb.set_if(c_sweep->count("--m") != 0, "m", fmt(m));
    cb.set_if(c_sweep->count("--u0") != 0, "initial.kind", u0);
    cb.set_if(!ax_m.empty(), "sweep.axes.m", ax_m);
    cb.set_if(!ax_s.empty(), "sweep.axes.s", ax_s);
    cb.set_if(!ax_p.empty(), "sweep.axes.p", ax_p);
    cb.set_if(!ax_kind.empty(), "sweep.axes.kind", ax_kind);
    cb.set_if(!ax_n.empty(), "sweep.axes.n", ax_n);
    cb.set_if(c_sweep->count("--mode") != 0, "sweep.mode", mode);
    cb.set_if(c_sweep->count("--parallelism") != 0, "sweep.parallelism",
              std::to_string(parallelism));
    apply_sets();
    int rc = ffde_cmd_sweep(cb.text().c_str(), out_dir.c_str(), resume ? 1 : 0);
    if (rc != 0) print_error();
    return rc;
  }

  if (c_const->parsed()) {
    std::vector<char> buf(1 << 16);
    int rc = ffde_cmd_constants(N, s, m, gamma, as_json ? 1 : 0, buf.data(), buf.size());
    if (rc == 0)
      std::fputs(buf.data(), stdout);
    else
      print_error();
    return rc;
  }
  return 0;
}
