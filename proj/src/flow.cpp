#include "ffde/flow.hpp"

#include <Eigen/Cholesky>
#include <Eigen/LU>
#include <algorithm>
#include <cmath>
#include <deque>

namespace ffde {

namespace {

double linf(const Eigen::VectorXd& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }

// residual of w + dt A w^m = u in the v = w^m variable
Eigen::VectorXd prox_residual(const Eigen::MatrixXd& a, const Eigen::VectorXd& v, double m,
                              double dt, const Eigen::VectorXd& u) {
  Eigen::VectorXd winv(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) winv[i] = std::pow(std::max(v[i], 0.0), 1.0 / m);
  return winv + dt * (a * v) - u;
}

}  // namespace

Field proximal_step(const DiscreteOperator& op, const Field& u, double m, double dt,
                    const SolverConfig& cfg) {
  require(m > 0.0 && m < 1.0, ErrorCode::invalid_argument, "proximal_step needs m in (0,1)");
  require(dt > 0.0, ErrorCode::invalid_argument, "proximal_step needs dt > 0");
  require(u.values.minCoeff() >= 0.0, ErrorCode::invalid_argument,
          "proximal_step needs a nonnegative state");
  const Eigen::MatrixXd& a = op.matrix;
  const int M = u.size();
  // residual target scales with the state; an absolute floor of the form
  // tol*(1+|u|) freezes the flow once |u| drops below tol/adapt_c, strictly
  // above the extinction threshold
  const double target = cfg.newton_tol * (linf(u.values) + 1e-300);

  Eigen::VectorXd v(M);
  for (int i = 0; i < M; ++i) v[i] = std::pow(u.values[i], m);
  Eigen::VectorXd r = prox_residual(a, v, m, dt, u.values);
  double res = linf(r);

  for (int it = 0; it < cfg.newton_max_iter; ++it) {
    if (res <= target) {
      Eigen::VectorXd w(M);
      for (int i = 0; i < M; ++i) w[i] = std::pow(std::max(v[i], 0.0), 1.0 / m);
      return Field(u.grid, std::move(w));
    }
    Eigen::MatrixXd jac = dt * a;
    for (int i = 0; i < M; ++i)
      jac(i, i) += (1.0 / m) * std::pow(std::max(v[i], 0.0), (1.0 - m) / m);
    Eigen::LLT<Eigen::MatrixXd> llt(jac);
    require(llt.info() == Eigen::Success, ErrorCode::newton_divergence,
            "proximal Newton: jacobian not SPD");
    Eigen::VectorXd delta = llt.solve(-r);
    double alpha = 1.0;
    bool accepted = false;
    for (int ls = 0; ls < 40; ++ls) {
      Eigen::VectorXd vt = (v + alpha * delta).cwiseMax(0.0);
      Eigen::VectorXd rt = prox_residual(a, vt, m, dt, u.values);
      double rest = linf(rt);
      if (rest < res) {
        v = std::move(vt);
        r = std::move(rt);
        res = rest;
        accepted = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!accepted) break;
  }
  if (res <= target) {
    Eigen::VectorXd w(M);
    for (int i = 0; i < M; ++i) w[i] = std::pow(std::max(v[i], 0.0), 1.0 / m);
    return Field(u.grid, std::move(w));
  }
  fail(ErrorCode::newton_divergence, "proximal Newton did not converge");
}

double scalar_prox_bisect(double a, double u, double m, double dt, double tol) {
  double lo = 0.0, hi = std::max(u, 0.0);
  auto g = [&](double w) { return w + dt * a * std::pow(w, m) - u; };
  if (g(hi) < 0.0) hi = std::max(1.0, 2.0 * u);
  for (int it = 0; it < 200 && hi - lo > tol * std::max(1.0, hi); ++it) {
    double mid = 0.5 * (lo + hi);
    (g(mid) <= 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

namespace {

struct StepRecord {
  double t;
  Eigen::VectorXd values;
};

NormRow make_norm_row(double t, const Field& u, double m, const OperatorBundle& bundle,
                      const std::vector<double>& lp_probes) {
  NormRow row;
  row.t = t;
  row.l1 = lp_norm(u, 1.0);
  row.linf = lp_norm(u, infinity);
  row.l1phi = lp_phi_norm(u, 1.0, bundle.spectral->phi1);
  row.l1pm = lp_norm(u, 1.0 + m);
  row.hstar = hstar_norm(u, *bundle.green);
  Field um(u.grid, signed_pow(u.values, m));
  row.h_of_um = h_norm(um, *bundle.op);
  if (row.linf > 0.0) {
    row.q = rayleigh_q(u, *bundle.op, m);
    row.qstar = rayleigh_qstar(u, *bundle.green, m);
  }
  row.lp = lp_probes.empty() ? lp_norm(u, 2.0) : lp_norm(u, lp_probes.front());
  for (size_t k = 1; k < lp_probes.size(); ++k) row.lp_extra.push_back(lp_norm(u, lp_probes[k]));
  return row;
}

double energy(const Field& u, double m) {
  double acc = 0.0;
  for (Eigen::Index i = 0; i < u.values.size(); ++i)
    acc += std::pow(std::abs(u.values[i]), 1.0 + m);
  return acc * u.grid->quad_weight / (1.0 + m);
}

}  // namespace

Trajectory run_flow(const OperatorBundle& bundle, const Field& u0, double m,
                    const SolverConfig& cfg, const std::vector<double>& lp_probes) {
  require(m > 0.0 && m < 1.0, ErrorCode::invalid_argument, "run_flow needs m in (0,1)");
  require(cfg.dt_init > 0.0 && cfg.dt_min > 0.0 && cfg.newton_tol > 0.0 && cfg.newton_max_iter >= 1,
          ErrorCode::invalid_argument, "invalid solver config");
  Trajectory traj;
  traj.m = m;
  traj.bundle = bundle;
  traj.lp_probes = lp_probes.empty() ? std::vector<double>{2.0} : lp_probes;

  Field u = u0;
  if (u.values.minCoeff() < 0.0) {
    traj.signed_input = true;  // signed data are run as |u0|
    u = Field(u.grid, u.values.cwiseAbs());
  }
  traj.u0_linf = linf(u.values);
  const double eps_ext = cfg.extinction_eps > 0.0 ? cfg.extinction_eps : 1e-10 * traj.u0_linf;
  traj.extinction_eps = eps_ext;

  auto record = [&](double t, const Field& f) {
    traj.times.push_back(t);
    traj.snapshots.push_back(f);
    traj.norm_series.push_back(make_norm_row(t, f, m, bundle, traj.lp_probes));
  };

  record(0.0, u);
  if (traj.u0_linf == 0.0 || traj.u0_linf < eps_ext) {
    traj.extinction = ExtinctionEstimate{0.0, 0.0};
    return traj;
  }

  const double ratio = std::pow(10.0, 1.0 / std::max(1, cfg.snapshots_per_decade));
  double next_probe = -1.0;  // set after the first step
  double next_linf_probe = 0.5 * traj.u0_linf;
  std::deque<StepRecord> ring;

  double t = 0.0;
  double prev_energy = energy(u, m);
  bool extinguished = false;
  long steps = 0;

  while (t < cfg.t_max) {
    require(steps++ < cfg.max_steps, ErrorCode::internal,
            "flow exceeded the step budget before t_max or extinction");
    double dt = cfg.dt_policy == DtPolicy::fixed
                    ? cfg.dt_init
                    : std::max(cfg.dt_min, cfg.adapt_c * std::pow(linf(u.values), 1.0 - m));
    Field w;
    bool stepped = false;
    for (int halving = 0; halving <= 20; ++halving) {
      try {
        w = proximal_step(*bundle.op, u, m, dt, cfg);
        stepped = true;
        break;
      } catch (const Error& e) {
        if (e.code() != ErrorCode::newton_divergence) throw;
        dt *= 0.5;
      }
    }
    require(stepped, ErrorCode::newton_divergence,
            "proximal Newton diverged after 20 dt halvings");

    if (cfg.check_structure) {
      // proximal inequality: E(w) + ||w-u||_{H*}^2/(2 dt) <= E(u)
      Field diff(u.grid, w.values - u.values);
      double e_new = energy(w, m);
      double dn = hstar_norm(diff, *bundle.green);
      double diss = dn * dn / (2.0 * dt);
      double slack = 1e-10 * prev_energy +
                     50.0 * cfg.newton_tol * linf(u.values) *
                         std::pow(linf(w.values) + 1e-300, m);
      double viol = e_new + diss - prev_energy;
      traj.max_dissipation_violation = std::max(traj.max_dissipation_violation, viol);
      require(viol <= slack, ErrorCode::internal, "energy dissipation violated along the flow");
      double abs_slack = 100.0 * cfg.newton_tol * linf(u.values);
      if (bundle.op->offdiag_nonpositive) {
        for (double p : {1.0, 2.0, infinity})
          require(lp_norm(w, p) <= lp_norm(u, p) * (1.0 + 1e-12) + abs_slack, ErrorCode::internal,
                  "L^p decay violated along the flow");
      }
      require(lp_phi_norm(w, 1.0, bundle.spectral->phi1) <=
                  lp_phi_norm(u, 1.0, bundle.spectral->phi1) * (1.0 + 1e-12) + abs_slack,
              ErrorCode::internal, "L^1_phi decay violated along the flow");
      prev_energy = e_new;
    } else {
      prev_energy = energy(w, m);
    }

    t += dt;
    u = std::move(w);

    ring.push_back({t, u.values});
    if (static_cast<int>(ring.size()) > cfg.keep_last_steps) ring.pop_front();

    const double u_linf = linf(u.values);
    if (u_linf < eps_ext) {
      extinguished = true;
      break;
    }
    if (next_probe < 0.0) next_probe = t;  // first completed step
    bool probe_hit = t >= next_probe;
    if (probe_hit)
      while (next_probe <= t) next_probe *= ratio;
    if (u_linf <= next_linf_probe) {
      probe_hit = true;
      while (next_linf_probe >= u_linf) next_linf_probe *= 0.5;
    }
    if (probe_hit) record(t, u);
  }

  if (extinguished) {
    // merge the trailing steps (kept ring) into the snapshot list, in order
    for (const auto& sr : ring) {
      bool dup = false;
      for (double tt : traj.times)
        if (tt == sr.t) {
          dup = true;
          break;
        }
      if (!dup) record(sr.t, Field(u0.grid, sr.values));
    }
    std::vector<size_t> perm(traj.times.size());
    for (size_t i = 0; i < perm.size(); ++i) perm[i] = i;
    std::stable_sort(perm.begin(), perm.end(),
                     [&](size_t a, size_t b) { return traj.times[a] < traj.times[b]; });
    Trajectory sorted;
    for (size_t i : perm) {
      sorted.times.push_back(traj.times[i]);
      sorted.snapshots.push_back(std::move(traj.snapshots[i]));
      sorted.norm_series.push_back(std::move(traj.norm_series[i]));
    }
    traj.times = std::move(sorted.times);
    traj.snapshots = std::move(sorted.snapshots);
    traj.norm_series = std::move(sorted.norm_series);
    try {
      traj.extinction = detect_extinction(traj);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::insufficient_data) throw;
      traj.extinction = ExtinctionEstimate{t, t};
    }
  } else if (traj.times.back() < t) {
    record(t, u);
  }
  return traj;
}

ExtinctionEstimate detect_extinction(const Trajectory& traj) {
  const double eps = traj.extinction_eps;
  double t_hat = -1.0;
  for (const auto& row : traj.norm_series) {
    if (row.linf < eps) {
      t_hat = row.t;
      break;
    }
  }
  if (t_hat < 0.0) {
    if (!traj.norm_series.empty() && traj.norm_series.back().linf < eps)
      t_hat = traj.norm_series.back().t;
    else
      fail(ErrorCode::insufficient_data, "trajectory did not reach the extinction threshold");
  }

  // linear fit of ||u||_{1+m}^{1-m} against t over the last decade before t_hat
  struct Pt {
    double t, y;
  };
  std::vector<Pt> pts;
  double ymax = 0.0;
  for (const auto& row : traj.norm_series) {
    if (row.t >= t_hat) break;
    double y = std::pow(row.l1pm, 1.0 - traj.m);
    if (y > 0.0) {
      pts.push_back({row.t, y});
      ymax = std::max(ymax, y);
    }
  }
  require(pts.size() >= 8, ErrorCode::insufficient_data,
          "fewer than 8 usable points before extinction");

  double tau_lo = infinity;
  for (const auto& p : pts)
    if (p.y > 1e-6 * ymax) tau_lo = std::min(tau_lo, t_hat - p.t);
  double span = 10.0;
  std::vector<Pt> window;
  for (int widen = 0; widen < 40; ++widen) {
    window.clear();
    for (const auto& p : pts) {
      double tau = t_hat - p.t;
      if (tau >= tau_lo && tau <= span * tau_lo && p.y > 1e-6 * ymax) window.push_back(p);
    }
    if (window.size() >= 8) break;
    span *= 10.0;
  }
  require(window.size() >= 8, ErrorCode::insufficient_data,
          "fewer than 8 points in the extinction fit window");

  double n = static_cast<double>(window.size());
  double st = 0, sy = 0, stt = 0, sty = 0;
  for (const auto& p : window) {
    st += p.t;
    sy += p.y;
    stt += p.t * p.t;
    sty += p.t * p.y;
  }
  double slope = (n * sty - st * sy) / (n * stt - st * st);
  double icept = (sy - slope * st) / n;
  require(slope < 0.0, ErrorCode::insufficient_data, "extinction fit has nonnegative slope");
  return ExtinctionEstimate{t_hat, -icept / slope};
}

namespace {

// Newton on A v = v^{1/m}/(1-m) in the v = w^m variable, guarded against
// the trivial zero branch. Returns the converged iterate or nothing.
std::optional<Eigen::VectorXd> profile_newton(const Eigen::MatrixXd& a, double m,
                                              Eigen::VectorXd vv, int iters) {
  const int M = static_cast<int>(a.rows());
  auto w_of = [&](const Eigen::VectorXd& v) {
    Eigen::VectorXd out(v.size());
    for (Eigen::Index i = 0; i < v.size(); ++i) out[i] = std::pow(std::max(v[i], 0.0), 1.0 / m);
    return out;
  };
  auto residual = [&](const Eigen::VectorXd& v) {
    return Eigen::VectorXd(a * v - w_of(v) / (1.0 - m));
  };
  auto converged = [&](const Eigen::VectorXd& v) {
    double scale = linf(w_of(v));
    return scale > 0.0 && linf(residual(v)) <= 1e-11 * scale;
  };
  Eigen::VectorXd r = residual(vv);
  double res = linf(r);
  for (int it = 0; it < iters; ++it) {
    if (converged(vv)) return vv;
    Eigen::MatrixXd jac = a;
    for (int i = 0; i < M; ++i)
      jac(i, i) -= std::pow(std::max(vv[i], 0.0), (1.0 - m) / m) / ((1.0 - m) * m);
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(jac);
    Eigen::VectorXd delta = lu.solve(-r);
    if (!delta.allFinite()) return std::nullopt;
    double alpha = 1.0;
    bool ok = false;
    for (int ls = 0; ls < 40; ++ls) {
      Eigen::VectorXd vt = (vv + alpha * delta).cwiseMax(0.0);
      Eigen::VectorXd rt = residual(vt);
      if (linf(rt) < res && linf(vt) > 0.0) {
        vv = std::move(vt);
        r = std::move(rt);
        res = linf(r);
        ok = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!ok) return std::nullopt;
  }
  return converged(vv) ? std::optional<Eigen::VectorXd>(vv) : std::nullopt;
}

// Ground-state-aligned start: c phi1 with c balancing the equation in the
// phi1 direction.
Eigen::VectorXd profile_start(const OperatorBundle& bundle, double m) {
  const Eigen::VectorXd& phi = bundle.spectral->phi1.values;
  double phi_pow = 0.0;
  for (Eigen::Index i = 0; i < phi.size(); ++i) phi_pow += phi[i] * std::pow(phi[i], 1.0 / m);
  phi_pow *= bundle.grid().quad_weight;
  double c = std::pow((1.0 - m) * bundle.spectral->lambda1 / phi_pow, m / (1.0 - m));
  return c * phi;
}

}  // namespace

Field solve_separable_profile(const OperatorBundle& bundle, double m) {
  require(m > 0.0 && m < 1.0, ErrorCode::invalid_argument,
          "separable profile needs m in (0,1)");
  const Eigen::MatrixXd& a = bundle.op->matrix;

  auto w_of = [&](const Eigen::VectorXd& v) {
    Eigen::VectorXd out(v.size());
    for (Eigen::Index i = 0; i < v.size(); ++i) out[i] = std::pow(std::max(v[i], 0.0), 1.0 / m);
    return out;
  };

  auto done = profile_newton(a, m, profile_start(bundle, m), 200);
  if (!done) {
    // continuation from a tamer exponent: solve at m0 and walk m down/up,
    // rescaling the previous profile shape as the next start
    double m0 = std::clamp(m, 0.5, 0.8);
    auto cur = profile_newton(a, m0, profile_start(bundle, m0), 200);
    double mc = m0;
    int guard = 0;
    while (cur && std::abs(mc - m) > 1e-12 && guard++ < 64) {
      double next = mc + std::clamp(m - mc, -0.05, 0.05);
      // previous w-shape restarted in the new v = w^m variable
      Eigen::VectorXd w_prev(cur->size());
      for (Eigen::Index i = 0; i < cur->size(); ++i)
        w_prev[i] = std::pow(std::max((*cur)[i], 0.0), 1.0 / mc);
      Eigen::VectorXd v_next(cur->size());
      for (Eigen::Index i = 0; i < cur->size(); ++i) v_next[i] = std::pow(w_prev[i], next);
      cur = profile_newton(a, next, std::move(v_next), 200);
      mc = next;
    }
    if (cur && std::abs(mc - m) <= 1e-12) done = cur;
  }
  require(done.has_value(), ErrorCode::profile_not_found,
          "separable profile: Newton and continuation both failed");
  Field out(bundle.op->grid, w_of(*done));
  // postcondition from the construction
  Eigen::VectorXd res = a * (*done) - out.values / (1.0 - m);
  require(linf(res) <= 1e-10 * std::max(linf(out.values), 1e-300), ErrorCode::profile_not_found,
          "separable profile residual check failed");
  return out;
}

}  // namespace ffde
