// Acceptance suite: one line per criterion, nonzero exit when any fails.
// Runs on one core in a few minutes.

#include <cmath>
#include <cstdio>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "ffde/exponents.hpp"
#include "ffde/flow.hpp"
#include "ffde/verify.hpp"

using namespace ffde;

namespace {

int g_failures = 0;

void report(int id, const std::string& name, bool pass, const std::string& detail) {
  std::printf("[%s] criterion %d: %s (%s)\n", pass ? "PASS" : "FAIL", id, name.c_str(),
              detail.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.4g", x);
  return buf;
}

OperatorBundle unit_scalar_bundle() {
  auto g = make_grid(1, 1);
  DiscreteOperator op;
  op.spec = {OperatorKind::local, 1.0, 1.0};
  op.grid = g;
  op.matrix = Eigen::MatrixXd::Constant(1, 1, 1.0);
  op.offdiag_nonpositive = true;
  return make_bundle(std::move(op));
}

Field point_mass(GridPtr g) {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(g->size());
  int n = g->n_per_axis;
  int c = g->dim == 1 ? (n - 1) / 2 : ((n - 1) / 2) * n + (n - 1) / 2;
  v[c] = 1.0 / g->quad_weight;
  return Field(g, v);
}

struct NamedRun {
  std::string name;
  Trajectory traj;
};

// ---- criterion 1: scalar closed-form oracle --------------------------------
void criterion_1(Trajectory& scalar_out) {
  auto bundle = unit_scalar_bundle();
  Field u0(bundle.op->grid, Eigen::VectorXd::Constant(1, 1.0));
  SolverConfig cfg;
  cfg.dt_policy = DtPolicy::fixed;
  cfg.dt_init = 1e-4;
  cfg.t_max = 5.0;
  scalar_out = run_flow(bundle, u0, 0.5, cfg);
  bool pass = scalar_out.extinction.has_value();
  double t_fit = pass ? scalar_out.extinction->t_fit : 0.0;
  pass = pass && t_fit >= 1.98 && t_fit <= 2.02;

  // dt-halving study of the max error against (1 - t/2)^2
  std::vector<double> errs;
  for (double dt : {4e-3, 2e-3, 1e-3}) {
    cfg.dt_init = dt;
    auto traj = run_flow(bundle, u0, 0.5, cfg);
    double err = 0.0;
    for (int i = 0; i < traj.size(); ++i) {
      double t = traj.times[i];
      double exact = t < 2.0 ? std::pow(1.0 - 0.5 * t, 2) : 0.0;
      err = std::max(err, std::abs(traj.snapshots[i].values[0] - exact));
    }
    errs.push_back(err);
  }
  std::string orders;
  for (size_t k = 1; k < errs.size(); ++k) {
    double order = std::log2(errs[k - 1] / errs[k]);
    pass = pass && order >= 0.8 && order <= 1.2;
    orders += (k > 1 ? "," : "") + fmt(order);
  }
  report(1, "scalar oracle", pass, "T_fit=" + fmt(t_fit) + " orders=" + orders);
}

// ---- criterion 2: separable sharpness --------------------------------------
void criterion_2(std::vector<NamedRun>& pool) {
  struct Case {
    OperatorKind kind;
    double s;
  };
  const Case cases[] = {{OperatorKind::local, 1.0},
                        {OperatorKind::sfl, 0.5},
                        {OperatorKind::rfl, 0.75},
                        {OperatorKind::cfl, 0.75}};
  bool pass = true;
  double worst = 0.0;
  std::string worst_tag;
  for (const auto& c : cases) {
    auto g = make_grid(1, 128);
    auto bundle = make_bundle(build_operator(g, c.kind, c.s));
    for (double m : {0.5, 0.8}) {
      const double T = 1.0;
      Field w = solve_separable_profile(bundle, m);
      Field u0(g, std::pow(T, 1.0 / (1.0 - m)) * w.values);
      SolverConfig cfg;
      // the time lag enters the rate deviation as dT/((1-m)(T-t))
      cfg.adapt_c = m > 0.7 ? 2e-4 : 2.5e-4;
      Trajectory traj = run_flow(bundle, u0, m, cfg);
      double q0 = traj.norm_series.front().q;
      double dev = 0.0;
      for (int i = 0; i < traj.size(); ++i) {
        double t = traj.times[i];
        if (t < 0.1 * T || t > 0.9 * T) continue;
        double lhs = std::pow(traj.norm_series[i].l1pm, 1.0 - m);
        double rhs = (1.0 - m) * q0 * (T - t);
        dev = std::max(dev, std::abs(lhs / rhs - 1.0));
      }
      if (dev > worst) {
        worst = dev;
        worst_tag = kind_name(c.kind) + " m=" + fmt(m);
      }
      pass = pass && dev <= 0.01 && traj.extinction.has_value();
      pool.push_back({kind_name(c.kind) + "_s" + fmt(c.s) + "_m" + fmt(m), std::move(traj)});
    }
  }
  report(2, "separable sharpness", pass, "worst dev=" + fmt(worst) + " at " + worst_tag);
}

// ---- criterion 3: explicit-constant inequalities ---------------------------
void criterion_3(const std::vector<NamedRun>& pool) {
  bool pass = true;
  double worst = 0.0;
  std::string worst_tag;
  for (const auto& run : pool) {
    if (!run.traj.extinction) continue;
    const auto& bundle = run.traj.bundle;
    struct Item {
      const char* label;
      verify::InequalityReport rep;
    };
    std::vector<Item> items;
    items.push_back({"extinction", verify::check_extinction_bounds(run.traj, 2.0, 1.0, 0.01)});
    items.push_back({"energy", verify::check_energy_estimate(run.traj, *bundle.op, 0.01)});
    items.push_back(
        {"pointwise", verify::check_pointwise_formula(run.traj, *bundle.green, {2.0}, 0.01)});
    items.push_back(
        {"strong_derivative", verify::check_strong_derivative(run.traj, bundle.spectral->phi1, 0.01)});
    for (const auto& it : items) {
      bool ok = it.rep.verdict == verify::Verdict::holds;
      pass = pass && ok;
      if (!ok || it.rep.empirical_constant > worst) {
        worst = it.rep.empirical_constant;
        worst_tag = run.name + "/" + it.label;
      }
    }
  }
  report(3, "explicit-constant inequalities at 1%", pass,
         "worst ratio=" + fmt(worst) + " at " + worst_tag);
}

// ---- criterion 4: free-constant smoothing under refinement -----------------
struct SmoothingCell {
  double m, p;
  std::map<int, double> kappa;  // n -> empirical constant
  std::map<int, verify::Verdict> verdict;
};

void criterion_4(std::map<double, std::map<int, Trajectory>>& refine_runs) {
  const double s = 0.25;
  const std::vector<int> grids = {64, 128, 256};
  // matched fixed-dt sampling so the refinement trend is comparable
  SolverConfig cfg;
  cfg.dt_policy = DtPolicy::fixed;
  cfg.dt_init = 2e-3;
  cfg.t_max = 8.0;
  // L^1 rows probe the point mass; the p=2 row needs a datum whose L^2 norm
  // is uniform in n, a fixed integrable spike
  std::map<int, Trajectory> spike_runs;
  for (double m : {0.3, 0.7})
    for (int n : grids) {
      auto g = make_grid(1, n);
      auto bundle = make_bundle(build_rfl(g, s));
      refine_runs[m][n] = run_flow(bundle, point_mass(g), m, cfg);
      if (m == 0.3) {
        Eigen::VectorXd v(g->size());
        for (int i = 0; i < g->size(); ++i)
          v[i] = std::pow(std::abs(g->nodes[i][0] - 0.5), -0.3);
        spike_runs[n] = run_flow(bundle, Field(g, v), m, cfg);
      }
    }

  std::vector<SmoothingCell> cells = {{0.7, 1.0, {}, {}}, {0.3, 2.0, {}, {}}, {0.3, 1.0, {}, {}}};
  for (auto& cell : cells)
    for (int n : grids) {
      const Trajectory& traj =
          (cell.m == 0.3 && cell.p == 2.0) ? spike_runs[n] : refine_runs[cell.m][n];
      auto rep = verify::check_smoothing(traj, cell.p, verify::SmoothingKind::lp);
      cell.kappa[n] = rep.empirical_constant;
      cell.verdict[n] = rep.verdict;
    }

  bool pass = true;
  std::string detail;
  // above the green line: finite kappa, drift <= 2x across refinements
  for (const auto& cell : {cells[0], cells[1]}) {
    double drift = cell.kappa.at(256) / cell.kappa.at(64);
    bool ok = std::isfinite(cell.kappa.at(64)) && cell.kappa.at(64) > 0.0 && drift <= 2.0 &&
              drift >= 0.5;
    for (int n : grids) ok = ok && cell.verdict.at(n) == verify::Verdict::holds_with_constant;
    pass = pass && ok;
    detail += "(m=" + fmt(cell.m) + ",p=" + fmt(cell.p) + " drift=" + fmt(drift) + ") ";
  }
  // below the green line: monotone growth, gated verdict
  {
    const auto& cell = cells[2];
    bool ok = cell.kappa.at(128) > cell.kappa.at(64) && cell.kappa.at(256) > cell.kappa.at(128);
    for (int n : grids) ok = ok && cell.verdict.at(n) == verify::Verdict::not_applicable;
    pass = pass && ok;
    detail += "(m=0.3,p=1 growth=" + fmt(cell.kappa.at(256) / cell.kappa.at(64)) + ") ";
  }
  // the Moser constant dominates the measured one wherever both are defined
  for (int n : grids) {
    auto g = make_grid(1, n);
    auto bundle = make_bundle(build_rfl(g, s));
    auto fc = estimate_functional_constants(*bundle.op, *bundle.green, 1, s, 20, 77);
    double mk = constants::moser_kappa(2.0, 1, s, 0.3, fc.sobolev_S);
    bool ok = mk >= cells[1].kappa.at(n);
    pass = pass && ok;
    if (n == 256) detail += "moser/kappa=" + fmt(mk / cells[1].kappa.at(n));
  }
  report(4, "free-constant smoothing and its failure mode", pass, detail);
}

// ---- criterion 5: boundary law ----------------------------------------------
void criterion_5(const std::vector<NamedRun>& pool) {
  bool pass = true;
  std::string detail;
  auto g = make_grid(1, 256);
  auto bd = boundary_distance(*g);
  struct Case {
    OperatorKind kind;
    double expect;
  };
  for (auto [kind, expect] : {Case{OperatorKind::sfl, 1.0}, Case{OperatorKind::rfl, 0.75},
                              Case{OperatorKind::cfl, 0.5}}) {
    auto sd = spectrum(build_operator(g, kind, 0.75));
    double gh = fit_boundary_exponent(sd, bd, *g);
    bool ok = std::abs(gh - expect) / expect <= 0.15;
    pass = pass && ok;
    detail += kind_name(kind) + "=" + fmt(gh) + " ";
  }
  // boundary-estimate ratio bounded uniformly on separable runs
  for (const auto& run : pool) {
    if (run.name.rfind("rfl", 0) != 0 && run.name.rfind("cfl", 0) != 0) continue;
    auto rep = verify::check_boundary_estimate(run.traj, 2.0, run.traj.bundle.op->spec.gamma,
                                               *run.traj.bundle.spectral);
    bool ok = rep.verdict == verify::Verdict::holds_with_constant &&
              std::isfinite(rep.empirical_constant);
    pass = pass && ok;
  }
  report(5, "boundary law", pass, detail);
}

// ---- criterion 6: structure preservation -----------------------------------
void criterion_6(const std::vector<NamedRun>& pool) {
  bool pass = true;
  std::string detail;
  // 100 seeded trials of Stroock-Varopoulos and Kato on RFL and CFL
  for (auto kind : {OperatorKind::rfl, OperatorKind::cfl}) {
    auto g = make_grid(1, 64);
    auto op = build_operator(g, kind, 0.75);
    for (double q : {1.5, 2.0, 3.0}) {
      auto rep = verify::check_stroock_varopoulos(op, q, 100, 4242);
      pass = pass && rep.verdict == verify::Verdict::holds;
    }
    auto kato = verify::check_kato(op, 100, 4243);
    pass = pass && kato.verdict == verify::Verdict::holds;
  }
  detail += "sv+kato ";

  // contraction pair with ordered data on a shared fixed-dt schedule
  {
    auto g = make_grid(1, 64);
    auto bundle = make_bundle(build_rfl(g, 0.75));
    SolverConfig cfg;
    cfg.dt_policy = DtPolicy::fixed;
    cfg.dt_init = 5e-4;
    cfg.t_max = 0.25;
    Field u0(g, bundle.spectral->phi1.values);
    Eigen::VectorXd bumped = u0.values;
    for (int i = 20; i < 32; ++i) bumped[i] += 0.4;
    auto tu = run_flow(bundle, u0, 0.5, cfg);
    auto tv = run_flow(bundle, Field(g, bumped), 0.5, cfg);
    auto rep = verify::check_contraction(tu, tv, bundle.spectral->phi1, *bundle.green, 1e-10);
    pass = pass && rep.verdict == verify::Verdict::holds;
    detail += "contraction=" + fmt(rep.empirical_constant) + " ";
  }

  // per-trajectory monotonicity structure at the stated tolerances
  double worst_tm = 0.0, worst_rq = 0.0;
  for (const auto& run : pool) {
    auto tm = verify::check_time_monotonicity(run.traj, 1e-8);
    auto rq = verify::check_rayleigh_monotonicity(run.traj, 1e-6);
    pass = pass && tm.verdict == verify::Verdict::holds;
    pass = pass && (rq.verdict == verify::Verdict::holds ||
                    rq.verdict == verify::Verdict::not_applicable);
    worst_tm = std::max(worst_tm, tm.empirical_constant);
    worst_rq = std::max(worst_rq, rq.empirical_constant);
    // L^p decay across recorded snapshots, p in {1, 2, inf}
    const double floor = 1e4 * run.traj.extinction_eps;
    for (int i = 1; i < run.traj.size(); ++i) {
      if (run.traj.norm_series[i].linf < floor) break;
      double slack = 1e-9 * run.traj.u0_linf;
      for (double p : {1.0, 2.0, infinity}) {
        double a = lp_norm(run.traj.snapshots[i - 1], p);
        double b = lp_norm(run.traj.snapshots[i], p);
        pass = pass && b <= a * (1.0 + 1e-12) + slack;
      }
      pass = pass &&
             run.traj.norm_series[i].l1phi <=
                 run.traj.norm_series[i - 1].l1phi * (1.0 + 1e-12) + slack;
    }
  }
  detail += "tmono=" + fmt(worst_tm) + " rayleigh=" + fmt(worst_rq);
  report(6, "structure preservation", pass, detail);
}

// ---- criterion 7: brute-force parity on tiny grids -------------------------
void criterion_7() {
  bool pass = true;
  std::mt19937_64 rng(777);
  std::normal_distribution<double> normal;
  int checked = 0;
  for (int n : {2, 3, 4}) {
    auto g = make_grid(1, n);
    auto bundle = make_bundle(build_rfl(g, 0.6));
    SolverConfig coarse;
    coarse.dt_policy = DtPolicy::fixed;
    coarse.dt_init = 1e-2;
    coarse.t_max = 0.3;
    SolverConfig fine = coarse;
    fine.dt_init = 1e-4;  // dt/100 reference
    int pairs = n == 4 ? 8 : 6;  // 20 pairs across the three grids
    for (int t = 0; t < pairs; ++t, ++checked) {
      Eigen::VectorXd a(n), b(n);
      for (int i = 0; i < n; ++i) {
        a[i] = std::abs(normal(rng));
        b[i] = a[i] + std::abs(normal(rng));
      }
      auto run4 = [&](const Eigen::VectorXd& v, const SolverConfig& c) {
        return run_flow(bundle, Field(g, v), 0.5, c);
      };
      Trajectory cu = run4(a, coarse), cv = run4(b, coarse);
      Trajectory fu = run4(a, fine), fv = run4(b, fine);
      // contraction + comparison verdicts at common snapshot times, plus
      // positivity, must agree between the coarse run and the reference
      auto verdicts = [&](const Trajectory& u, const Trajectory& v) {
        auto rep = verify::check_contraction(u, v, bundle.spectral->phi1, *bundle.green, 1e-9);
        bool positive = true;
        for (const auto& s : u.snapshots)
          if (s.values.minCoeff() < 0.0) positive = false;
        for (const auto& s : v.snapshots)
          if (s.values.minCoeff() < 0.0) positive = false;
        return std::pair<verify::Verdict, bool>{rep.verdict, positive};
      };
      auto vc = verdicts(cu, cv);
      auto vf = verdicts(fu, fv);
      pass = pass && vc == vf;  // parity with the reference
      pass = pass && vc.first == verify::Verdict::holds && vc.second;
    }
  }
  report(7, "brute-force parity on n<=4", pass, std::to_string(checked) + " pairs");
}

// ---- criterion 8: phase diagram / green line -------------------------------
void criterion_8() {
  const double s = 0.25;  // p_c(m) = 2(1-m) crosses the swept p range
  const std::vector<int> grids = {64, 128, 256};
  const std::vector<double> ps = {1.0, 1.25, 1.5, 1.75, 2.0};
  std::vector<double> ms;
  for (double m = 0.15; m < 0.901; m += 0.05) ms.push_back(m);

  SolverConfig cfg;
  cfg.dt_policy = DtPolicy::fixed;
  cfg.dt_init = 2e-3;
  cfg.t_max = 10.0;

  std::map<double, std::map<int, Trajectory>> runs;
  for (double m : ms)
    for (int n : grids) {
      auto g = make_grid(1, n);
      auto bundle = make_bundle(build_rfl(g, s));
      runs[m][n] = run_flow(bundle, point_mass(g), m, cfg);
    }

  bool pass = true;
  int misses = 0;
  for (double p : ps) {
    for (double m : ms) {
      std::vector<double> k;
      for (int n : grids)
        k.push_back(verify::check_smoothing(runs[m][n], p, verify::SmoothingKind::lp)
                        .empirical_constant);
      // the failure signature of criterion 4: kappa grows monotonically and
      // substantially under refinement; stable/erratic sequences are the
      // validity side
      bool diverging = std::isfinite(k[2]) && k[0] > 0.0 && k[1] > 1.6 * k[0] &&
                       k[2] > 1.6 * k[1];
      bool valid = std::isfinite(k[2]) && !diverging;
      double p_c = 2.0 * (1.0 - m);
      bool expected = p > p_c;
      double m_star = 1.0 - p / 2.0;  // analytic crossing for this p row
      if (std::abs(m - m_star) <= 0.05 + 1e-9) continue;  // within one sweep cell
      if (valid != expected) {
        ++misses;
        pass = false;
      }
    }
  }
  report(8, "phase diagram reproduces the green line", pass,
         misses == 0 ? "boundary within one cell" : std::to_string(misses) + " cells misplaced");
}

}  // namespace

int main() {
  std::printf("acceptance suite: fractional fast diffusion laboratory\n");
  std::vector<NamedRun> pool;

  Trajectory scalar;
  criterion_1(scalar);
  criterion_2(pool);
  pool.push_back({"scalar", std::move(scalar)});

  // two generic runs widen the trajectory pool for criteria 3 and 6
  {
    auto g = make_grid(1, 64);
    auto bundle = make_bundle(build_sfl(g, 0.5));
    Eigen::VectorXd v(g->size());
    for (int i = 0; i < g->size(); ++i) {
      double x = g->nodes[i][0];
      v[i] = std::pow(4.0 * x * (1.0 - x), 2.0);
    }
    SolverConfig cfg;
    pool.push_back({"bump_sfl", run_flow(bundle, Field(g, v), 0.6, cfg)});
  }
  {
    auto g = make_grid(1, 64);
    auto bundle = make_bundle(build_rfl(g, 0.75));
    SolverConfig cfg;
    pool.push_back(
        {"eigen_rfl", run_flow(bundle, Field(g, bundle.spectral->phi1.values), 0.5, cfg)});
  }

  criterion_3(pool);
  std::map<double, std::map<int, Trajectory>> refine_runs;
  criterion_4(refine_runs);
  criterion_5(pool);
  criterion_6(pool);
  criterion_7();
  criterion_8();

  std::printf("%d of 8 criteria passed\n", 8 - g_failures);
  return g_failures == 0 ? 0 : 1;
}
