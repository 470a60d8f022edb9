#include "ffde/experiment.hpp"

#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <sstream>
#include <thread>

#include "ffde/io.hpp"
#include "ffde/verify.hpp"
#include "json.hpp"

namespace ffde {
namespace experiment {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

int code_of(const Error& e) {
  switch (e.code()) {
    case ErrorCode::invalid_argument: return exit_usage;
    case ErrorCode::construction: return exit_construction;
    case ErrorCode::file_format: return exit_io;
    default: return exit_solver;
  }
}

void diag(const std::string& msg) { std::fprintf(stderr, "ffde: %s\n", msg.c_str()); }

Field make_initial(const std::string& kind, double scale, const std::string& path,
                   const OperatorBundle& bundle) {
  GridPtr grid = bundle.op->grid;
  if (kind == "eigenfunction") {
    return Field(grid, scale * bundle.spectral->phi1.values);
  }
  if (kind == "point_mass") {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(grid->size());
    int n = grid->n_per_axis;
    int c = grid->dim == 1 ? (n - 1) / 2 : ((n - 1) / 2) * n + (n - 1) / 2;
    v[c] = scale / grid->quad_weight;
    return Field(grid, std::move(v));
  }
  if (kind == "bump") {
    Eigen::VectorXd v(grid->size());
    for (int i = 0; i < grid->size(); ++i) {
      double x = grid->nodes[i][0];
      double b = std::pow(4.0 * x * (1.0 - x), 2.0);
      if (grid->dim == 2) {
        double y = grid->nodes[i][1];
        b *= std::pow(4.0 * y * (1.0 - y), 2.0);
      }
      v[i] = scale * b;
    }
    return Field(grid, std::move(v));
  }
  if (kind == "custom_csv") {
    require(!path.empty(), ErrorCode::invalid_argument, "custom_csv initial datum needs a path");
    Field f = io::load_custom_field(path, grid);
    return Field(grid, scale * f.values);
  }
  fail(ErrorCode::invalid_argument, "unknown initial datum kind: " + kind);
}

void validate_checks(const ConfigMap& cfg) {
  for (const auto& [k, v] : cfg.values) {
    if (k.rfind("checks.", 0) != 0) continue;
    std::string name = k.substr(7);
    require(verify::known_check(name), ErrorCode::invalid_argument,
            "unknown check in config: " + name);
    parse_param_string(v);  // syntax check
  }
}

// The manifest records the fully resolved run parameters, not only the keys
// the caller set.
ConfigMap materialize(const ConfigMap& cfg, const RunInputs& in) {
  ConfigMap out = cfg;
  out.set("m", io::format_g17(in.m));
  out.set("grid.dim", std::to_string(in.grid->dim));
  out.set("grid.n", std::to_string(in.grid->n_per_axis));
  out.set("operator.kind", kind_name(in.bundle.op->spec.kind));
  out.set("operator.s", io::format_g17(in.bundle.op->spec.s));
  out.set("seed", std::to_string(in.seed));
  const SolverConfig& sc = in.solver;
  out.set("solver.dt_init", io::format_g17(sc.dt_init));
  out.set("solver.dt_policy", sc.dt_policy == DtPolicy::fixed ? "fixed" : "adaptive");
  out.set("solver.adapt_c", io::format_g17(sc.adapt_c));
  out.set("solver.dt_min", io::format_g17(sc.dt_min));
  out.set("solver.newton_tol", io::format_g17(sc.newton_tol));
  out.set("solver.newton_max_iter", std::to_string(sc.newton_max_iter));
  out.set("solver.extinction_eps", io::format_g17(sc.extinction_eps));
  out.set("solver.t_max", io::format_g17(sc.t_max));
  out.set("solver.snapshots_per_decade", std::to_string(sc.snapshots_per_decade));
  out.set("solver.keep_last_steps", std::to_string(sc.keep_last_steps));
  return out;
}

}  // namespace

SolverConfig solver_from_config(const ConfigMap& cfg) {
  SolverConfig sc;
  sc.dt_init = cfg.get_double("solver.dt_init", sc.dt_init);
  std::string pol = cfg.get("solver.dt_policy", "adaptive");
  if (pol == "fixed")
    sc.dt_policy = DtPolicy::fixed;
  else if (pol == "adaptive")
    sc.dt_policy = DtPolicy::adaptive;
  else
    fail(ErrorCode::invalid_argument, "solver.dt_policy must be fixed or adaptive");
  sc.adapt_c = cfg.get_double("solver.adapt_c", sc.adapt_c);
  sc.dt_min = cfg.get_double("solver.dt_min", sc.dt_min);
  sc.newton_tol = cfg.get_double("solver.newton_tol", sc.newton_tol);
  sc.newton_max_iter = cfg.get_int("solver.newton_max_iter", sc.newton_max_iter);
  sc.extinction_eps = cfg.get_double("solver.extinction_eps", sc.extinction_eps);
  sc.t_max = cfg.get_double("solver.t_max", sc.t_max);
  sc.snapshots_per_decade = cfg.get_int("solver.snapshots_per_decade", sc.snapshots_per_decade);
  sc.keep_last_steps = cfg.get_int("solver.keep_last_steps", sc.keep_last_steps);
  sc.check_structure = cfg.get_bool("solver.check_structure", sc.check_structure);
  require(sc.dt_init > 0 && sc.dt_min > 0 && sc.newton_tol > 0 && sc.newton_max_iter >= 1,
          ErrorCode::invalid_argument, "solver config values must be positive");
  return sc;
}

RunInputs prepare_run(const ConfigMap& cfg) {
  RunInputs in;
  int dim = cfg.get_int("grid.dim", 1);
  int n = cfg.get_int("grid.n", 64);
  in.grid = make_grid(dim, n);
  OperatorKind kind = kind_from_name(cfg.get("operator.kind", "local"));
  double s = cfg.get_double("operator.s", kind == OperatorKind::local ? 1.0 : 0.5);
  bool allow_2d = cfg.get_bool("operator.allow_2d", false);
  in.bundle = make_bundle(build_operator(in.grid, kind, s, allow_2d));
  in.m = cfg.get_double("m", 0.5);
  require(in.m > 0.0 && in.m < 1.0, ErrorCode::invalid_argument, "m must lie in (0,1)");
  in.solver = solver_from_config(cfg);
  in.lp_probes = parse_double_list(cfg.get("probes.p", "2"));
  if (in.lp_probes.empty()) in.lp_probes = {2.0};
  in.seed = static_cast<unsigned long long>(cfg.get_double("seed", 20220901));
  if (const char* env = std::getenv("FFDE_SEED")) in.seed = std::strtoull(env, nullptr, 10);
  validate_checks(cfg);

  std::string ik = cfg.get("initial.kind", "eigenfunction");
  double scale = cfg.get_double("initial.scale", 1.0);
  if (ik == "separable") {
    Field w = solve_separable_profile(in.bundle, in.m);
    in.u0 = Field(in.grid, scale * w.values);
  } else {
    in.u0 = make_initial(ik, scale, cfg.get("initial.path", ""), in.bundle);
  }
  return in;
}

int cmd_operator(const ConfigMap& cfg, const std::string& out_dir, std::string* json_out) {
  try {
    int dim = cfg.get_int("grid.dim", 1);
    int n = cfg.get_int("grid.n", 64);
    GridPtr grid = make_grid(dim, n);
    OperatorKind kind = kind_from_name(cfg.get("operator.kind", "local"));
    double s = cfg.get_double("operator.s", kind == OperatorKind::local ? 1.0 : 0.5);
    OperatorBundle bundle =
        make_bundle(build_operator(grid, kind, s, cfg.get_bool("operator.allow_2d", false)));

    int band = cfg.get_int("operator.excluded_band", 1);
    KernelBoundReport kb = check_kernel_bounds(*bundle.green, bundle.op->spec, *grid, band);

    json j;
    j["kind"] = kind_name(kind);
    j["s"] = bundle.op->spec.s;
    j["gamma"] = bundle.op->spec.gamma;
    j["dim"] = dim;
    j["n"] = n;
    j["lambda1"] = bundle.spectral->lambda1;
    j["offdiag_nonpositive"] = bundle.op->offdiag_nonpositive;
    j["c0_hat"] = kb.c0_hat;
    if (kb.upper_applicable) {
      j["c1_hat"] = kb.c1_hat;
      j["c1_hat_unweighted"] = kb.c1_hat_unweighted;
      j["k4_ratio_min"] = kb.k4_ratio_min;
      j["k4_ratio_max"] = kb.k4_ratio_max;
    } else {
      j["c1_hat"] = nullptr;
      j["c1_hat_unweighted"] = nullptr;
      j["k4_ratio_min"] = nullptr;
      j["k4_ratio_max"] = nullptr;
    }
    j["kernel_note"] = kb.note;
    j["excluded_band"] = kb.excluded_band;

    if (n >= 32) {
      BoundaryDistance bd = boundary_distance(*grid);
      j["gamma_hat"] = fit_boundary_exponent(*bundle.spectral, bd, *grid);
    } else {
      j["gamma_hat"] = nullptr;
    }

    int starts = cfg.get_int("constants.starts", 50);
    unsigned long long seed = static_cast<unsigned long long>(cfg.get_double("seed", 20220901));
    if (const char* env = std::getenv("FFDE_SEED")) seed = std::strtoull(env, nullptr, 10);
    FunctionalConstants fc =
        estimate_functional_constants(*bundle.op, *bundle.green, dim, bundle.op->spec.s, starts,
                                      seed);
    j["constants_applicable"] = fc.applicable;
    if (fc.applicable) {
      j["sobolev_S"] = fc.sobolev_S;
      j["hls_H"] = fc.hls_H;
      j["two_star"] = fc.two_star;
      j["sobolev_converged"] = fc.sobolev_converged;
      j["hls_converged"] = fc.hls_converged;
    } else {
      j["sobolev_S"] = nullptr;
      j["hls_H"] = nullptr;
      j["two_star"] = nullptr;
    }

    std::string text = j.dump(2) + "\n";
    if (!out_dir.empty()) {
      std::string dir = out_dir + "/" + content_hash(cfg);
      io::ensure_dir(dir);
      io::write_text_file(dir + "/operator.json", text);
    }
    if (json_out) *json_out = text;
    return exit_ok;
  } catch (const Error& e) {
    diag(e.what());
    return code_of(e);
  } catch (const std::exception& e) {
    diag(e.what());
    return exit_solver;
  }
}

int cmd_solve(const ConfigMap& cfg, const std::string& out_dir, std::string* run_dir_out) {
  try {
    RunInputs in = prepare_run(cfg);
    ConfigMap resolved = materialize(cfg, in);
    std::string dir = out_dir + "/" + content_hash(resolved);
    io::ensure_dir(dir);
    if (run_dir_out) *run_dir_out = dir;
    Trajectory traj;
    try {
      traj = run_flow(in.bundle, in.u0, in.m, in.solver, in.lp_probes);
    } catch (const Error& e) {
      io::write_text_file(dir + "/.partial", std::string(e.what()) + "\n");
      throw;
    }
    std::vector<std::string> snap_files;
    for (int i = 0; i < traj.size(); ++i) {
      char name[32];
      std::snprintf(name, sizeof name, "snap_%05d.csv", i);
      io::write_text_file(dir + "/" + name, io::snapshot_csv(traj.snapshots[i]));
      snap_files.push_back(name);
    }
    io::write_text_file(dir + "/trajectory.csv", io::trajectory_csv(traj));
    io::write_text_file(dir + "/manifest.json", io::manifest_json(traj, resolved, snap_files));
    std::error_code ec;
    fs::remove(dir + "/.partial", ec);
    if (traj.extinction)
      std::printf("T_hat=%s T_fit=%s\n", io::format_g17(traj.extinction->t_hat).c_str(),
                  io::format_g17(traj.extinction->t_fit).c_str());
    else
      std::printf("no extinction before t_max=%s\n", io::format_g17(in.solver.t_max).c_str());
    return exit_ok;
  } catch (const Error& e) {
    diag(e.what());
    return code_of(e);
  } catch (const std::exception& e) {
    diag(e.what());
    return exit_solver;
  }
}

namespace {

std::vector<verify::InequalityReport> run_checks(const Trajectory& traj, const ConfigMap& cfg) {
  std::vector<verify::InequalityReport> reports;
  const OperatorBundle& bundle = traj.bundle;
  for (const auto& [key, value] : cfg.values) {
    if (key.rfind("checks.", 0) != 0) continue;
    std::string name = key.substr(7);
    auto params = parse_param_string(value);
    auto get = [&](const std::string& k, const std::string& dflt) {
      auto it = params.find(k);
      return it == params.end() ? dflt : it->second;
    };
    if (name == "smoothing") {
      std::string kind = get("kind", "lp");
      verify::SmoothingKind sk = kind == "lp_phi" ? verify::SmoothingKind::lp_phi
                                 : kind == "hstar" ? verify::SmoothingKind::hstar
                                                   : verify::SmoothingKind::lp;
      if (sk == verify::SmoothingKind::hstar) {
        auto rep = verify::check_smoothing(traj, 1.0 + traj.m, sk);
        reports.push_back(std::move(rep));
      } else {
        for (double p : parse_double_list(get("p", "2"))) {
          auto rep = verify::check_smoothing(traj, p, sk);
          rep.name += "_p" + io::format_g17(p);
          reports.push_back(std::move(rep));
        }
      }
    } else if (name == "boundary") {
      bool weighted = get("weighted", "false") == "true";
      for (double p : parse_double_list(get("p", "2"))) {
        auto rep = verify::check_boundary_estimate(traj, p, bundle.op->spec.gamma,
                                                   *bundle.spectral, weighted);
        rep.name += "_p" + io::format_g17(p);
        reports.push_back(std::move(rep));
      }
    } else if (name == "extinction") {
      double p = std::stod(get("p", "2"));
      double alpha = std::stod(get("alpha", "1"));
      double tol = std::stod(get("tol", "0.01"));
      reports.push_back(verify::check_extinction_bounds(traj, p, alpha, tol));
    } else if (name == "time_monotonicity") {
      reports.push_back(verify::check_time_monotonicity(traj, std::stod(get("tol", "1e-8"))));
    } else if (name == "contraction") {
      std::string pair = get("pair", "");
      if (pair.empty()) {
        reports.push_back(verify::InequalityReport{});
        reports.back().name = "contraction";
        reports.back().verdict = verify::Verdict::not_applicable;
        reports.back().hypothesis_note = "no pair run directory given";
      } else {
        Trajectory other = io::load_trajectory(pair);
        reports.push_back(verify::check_contraction(traj, other, bundle.spectral->phi1,
                                                    *bundle.green));
      }
    } else if (name == "rayleigh") {
      reports.push_back(verify::check_rayleigh_monotonicity(traj, std::stod(get("tol", "1e-6"))));
    } else if (name == "pointwise") {
      reports.push_back(verify::check_pointwise_formula(traj, *bundle.green,
                                                        parse_double_list(get("p", "")),
                                                        std::stod(get("tol", "0.01"))));
    } else if (name == "energy") {
      reports.push_back(
          verify::check_energy_estimate(traj, *bundle.op, std::stod(get("tol", "0.01"))));
    } else if (name == "stroock_varopoulos") {
      int trials = std::stoi(get("trials", "100"));
      unsigned long long seed = std::stoull(get("seed", "11"));
      for (double q : parse_double_list(get("q", "2"))) {
        auto rep = verify::check_stroock_varopoulos(*bundle.op, q, trials, seed);
        rep.name += "_q" + io::format_g17(q);
        reports.push_back(std::move(rep));
      }
    } else if (name == "kato") {
      reports.push_back(verify::check_kato(*bundle.op, std::stoi(get("trials", "100")),
                                           std::stoull(get("seed", "12"))));
    } else if (name == "strong_derivative") {
      reports.push_back(
          verify::check_strong_derivative(traj, bundle.spectral->phi1, std::stod(get("tol", "0.01"))));
    } else if (name == "green_bounds") {
      double gamma = params.count("gamma") ? std::stod(params["gamma"]) : bundle.op->spec.gamma;
      for (double q : parse_double_list(get("q", "1"))) {
        auto rep = verify::check_green_norm_bounds(*bundle.green, *bundle.spectral, q, gamma,
                                                   bundle.grid(), bundle.op->spec.s);
        rep.name += "_q" + io::format_g17(q);
        reports.push_back(std::move(rep));
      }
    }
  }
  return reports;
}

}  // namespace

int cmd_verify(const ConfigMap& cli_cfg, const std::string& run_dir) {
  try {
    require(fs::exists(run_dir + "/manifest.json"), ErrorCode::file_format,
            "no manifest.json in " + run_dir);
    Trajectory traj = io::load_trajectory(run_dir);
    ConfigMap cfg = io::manifest_config(run_dir);
    for (const auto& [k, v] : cli_cfg.values) cfg.values[k] = v;  // CLI overrides
    validate_checks(cfg);
    auto reports = run_checks(traj, cfg);
    std::string rep_dir = run_dir + "/reports";
    io::ensure_dir(rep_dir);
    std::ostringstream rollup;
    rollup << "name,verdict,empirical_constant,theoretical_constant,tolerance,n_records\n";
    bool violated = false;
    for (const auto& rep : reports) {
      io::write_text_file(rep_dir + "/" + rep.name + ".json", io::report_json(rep));
      io::write_text_file(rep_dir + "/" + rep.name + ".csv", io::report_csv(rep));
      rollup << rep.name << ',' << verify::verdict_name(rep.verdict) << ','
             << io::format_g17(rep.empirical_constant) << ','
             << (rep.theoretical_constant ? io::format_g17(*rep.theoretical_constant) : "")
             << ',' << io::format_g17(rep.tolerance) << ',' << rep.records.size() << '\n';
      std::printf("%-40s %s\n", rep.name.c_str(), verify::verdict_name(rep.verdict).c_str());
      if (rep.explicit_constant && rep.verdict == verify::Verdict::violated) violated = true;
    }
    io::write_text_file(rep_dir + "/rollup.csv", rollup.str());
    return violated ? exit_violated : exit_ok;
  } catch (const Error& e) {
    diag(e.what());
    return code_of(e);
  } catch (const std::exception& e) {
    diag(e.what());
    return exit_solver;
  }
}

namespace {

struct SweepCell {
  double m = 0.5, s = 0.5, p = 2.0;
  std::string kind = "rfl";
  int n = 64;
};

struct SweepResult {
  SweepCell cell;
  std::string verdict = "error";
  double kappa_hat = 0.0;
  double t_fit = 0.0;
  bool fatal = false;
};

}  // namespace

int cmd_sweep(const ConfigMap& cfg, const std::string& out_dir, bool resume) {
  try {
    std::map<std::string, std::vector<std::string>> axes;
    for (const char* ax : {"m", "s", "p", "kind", "n"}) {
      std::string key = std::string("sweep.axes.") + ax;
      if (cfg.has(key)) axes[ax] = parse_string_list(cfg.get(key));
    }
    require(!axes.empty(), ErrorCode::invalid_argument, "sweep needs at least one axis");
    std::string mode = cfg.get("sweep.mode", "cartesian");
    require(mode == "cartesian" || mode == "zip", ErrorCode::invalid_argument,
            "sweep.mode must be cartesian or zip");
    int parallelism = cfg.get_int("sweep.parallelism", 1);
    require(parallelism >= 1, ErrorCode::invalid_argument, "sweep.parallelism must be >= 1");
    size_t cap = static_cast<size_t>(cfg.get_int("sweep.cap", 1024));

    std::vector<std::map<std::string, std::string>> cells;
    if (mode == "zip") {
      size_t len = axes.begin()->second.size();
      for (const auto& [k, v] : axes)
        require(v.size() == len, ErrorCode::invalid_argument,
                "zip mode needs axes of equal length");
      for (size_t i = 0; i < len; ++i) {
        std::map<std::string, std::string> cell;
        for (const auto& [k, v] : axes) cell[k] = v[i];
        cells.push_back(std::move(cell));
      }
    } else {
      cells.push_back({});
      for (const auto& [k, v] : axes) {
        std::vector<std::map<std::string, std::string>> next;
        for (const auto& cell : cells)
          for (const auto& val : v) {
            auto c = cell;
            c[k] = val;
            next.push_back(std::move(c));
          }
        cells = std::move(next);
        require(cells.size() <= cap, ErrorCode::invalid_argument,
                "cartesian sweep exceeds the configured cap");
      }
    }

    io::ensure_dir(out_dir);
    std::vector<SweepResult> results(cells.size());
    std::atomic<size_t> next{0};
    auto worker = [&]() {
      for (;;) {
        size_t i = next.fetch_add(1);
        if (i >= cells.size()) return;
        const auto& cell = cells[i];
        SweepResult res;
        ConfigMap run_cfg = cfg;
        for (const auto& [k, v] : cell) {
          if (k == "m") run_cfg.set("m", v);
          if (k == "s") run_cfg.set("operator.s", v);
          if (k == "kind") run_cfg.set("operator.kind", v);
          if (k == "n") run_cfg.set("grid.n", v);
        }
        // sweep bookkeeping keys do not belong in the run identity
        for (auto it = run_cfg.values.begin(); it != run_cfg.values.end();)
          it = it->first.rfind("sweep.", 0) == 0 ? run_cfg.values.erase(it) : std::next(it);
        res.cell.m = run_cfg.get_double("m", 0.5);
        res.cell.s = run_cfg.get_double("operator.s", 0.5);
        res.cell.kind = run_cfg.get("operator.kind", "local");
        res.cell.n = run_cfg.get_int("grid.n", 64);
        res.cell.p = cell.count("p") ? std::stod(cell.at("p")) : 2.0;
        try {
          RunInputs in = prepare_run(run_cfg);
          std::string dir = out_dir + "/" + content_hash(materialize(run_cfg, in));
          Trajectory traj;
          if (resume && fs::exists(dir + "/manifest.json")) {
            traj = io::load_trajectory(dir);
          } else {
            traj = run_flow(in.bundle, in.u0, in.m, in.solver, in.lp_probes);
            io::ensure_dir(dir);
            std::vector<std::string> snap_files;
            for (int k = 0; k < traj.size(); ++k) {
              char nm[32];
              std::snprintf(nm, sizeof nm, "snap_%05d.csv", k);
              io::write_text_file(dir + "/" + nm, io::snapshot_csv(traj.snapshots[k]));
              snap_files.push_back(nm);
            }
            io::write_text_file(dir + "/trajectory.csv", io::trajectory_csv(traj));
            io::write_text_file(dir + "/manifest.json",
                                io::manifest_json(traj, materialize(run_cfg, in), snap_files));
          }
          auto rep = verify::check_smoothing(traj, res.cell.p, verify::SmoothingKind::lp);
          res.verdict = verify::verdict_name(rep.verdict);
          res.kappa_hat = rep.empirical_constant;
          res.t_fit = traj.extinction ? traj.extinction->t_fit : 0.0;
        } catch (const std::exception& e) {
          res.verdict = "error";
          res.fatal = true;
          diag(std::string("sweep cell failed: ") + e.what());
        }
        results[i] = std::move(res);
      }
    };
    std::vector<std::thread> pool;
    for (int k = 0; k < parallelism; ++k) pool.emplace_back(worker);
    for (auto& th : pool) th.join();

    std::ostringstream out;
    out << "m,s,p,kind,n,verdict,kappa_hat,T_fit\n";
    size_t fatal = 0;
    for (const auto& r : results) {
      out << io::format_g17(r.cell.m) << ',' << io::format_g17(r.cell.s) << ','
          << io::format_g17(r.cell.p) << ',' << r.cell.kind << ',' << r.cell.n << ',' << r.verdict
          << ',' << io::format_g17(r.kappa_hat) << ',' << io::format_g17(r.t_fit) << '\n';
      if (r.fatal) ++fatal;
    }
    io::write_text_file(out_dir + "/phase_diagram.csv", out.str());
    if (fatal * 10 > results.size()) return exit_solver;
    return exit_ok;
  } catch (const Error& e) {
    diag(e.what());
    return code_of(e);
  } catch (const std::exception& e) {
    diag(e.what());
    return exit_solver;
  }
}

std::string constants_json(int N, double s, double m, double gamma) {
  auto t = constants::critical_exponents(N, s, m, gamma);
  json j;
  j["N"] = t.N;
  j["s"] = t.s;
  j["m"] = t.m;
  j["gamma"] = t.gamma;
  j["m_c"] = t.m_c;
  j["p_c"] = t.p_c;
  j["m_s"] = t.m_s;
  j["m_c_gamma"] = t.m_c_gamma;
  auto put = [&](const char* key, double v) {
    if (std::isnan(v))
      j[key] = nullptr;
    else
      j[key] = v;
  };
  put("p_c_gamma", t.p_c_gamma);
  put("theta_1pm", t.theta_1pm);
  put("two_star", t.two_star);
  j["regime"] = t.regime_label();
  j["outside_hypotheses"] = t.outside_hypotheses;
  return j.dump(2) + "\n";
}

std::string constants_table(int N, double s, double m, double gamma) {
  auto t = constants::critical_exponents(N, s, m, gamma);
  std::ostringstream out;
  auto row = [&](const char* name, double v) {
    char buf[96];
    if (std::isnan(v))
      std::snprintf(buf, sizeof buf, "  %-12s pole/not applicable\n", name);
    else
      std::snprintf(buf, sizeof buf, "  %-12s %.12g\n", name, v);
    out << buf;
  };
  out << "exponents for N=" << N << " s=" << s << " m=" << m << " gamma=" << gamma << "\n";
  row("m_c", t.m_c);
  row("p_c", t.p_c);
  row("m_s", t.m_s);
  row("m_c_gamma", t.m_c_gamma);
  row("p_c_gamma", t.p_c_gamma);
  row("theta(2)", t.theta(2.0));
  row("theta_1pm", t.theta_1pm);
  row("two_star", t.two_star);
  out << "  regime       " << t.regime_label() << (t.outside_hypotheses ? " (N <= 2s)" : "")
      << "\n";
  return out.str();
}

}  // namespace experiment
}  // namespace ffde
