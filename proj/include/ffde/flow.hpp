#ifndef FFDE_FLOW_HPP
#define FFDE_FLOW_HPP

#include <optional>
#include <vector>

#include "ffde/field.hpp"
#include "ffde/norms.hpp"
#include "ffde/operators.hpp"

namespace ffde {

enum class DtPolicy { fixed, adaptive };

struct SolverConfig {
  double dt_init = 1e-3;
  DtPolicy dt_policy = DtPolicy::adaptive;
  double adapt_c = 2e-3;  // dt = max(dt_min, adapt_c * ||u||_inf^{1-m})
  double dt_min = 1e-9;
  double newton_tol = 1e-12;  // residual, relative to ||u||_inf
  int newton_max_iter = 60;
  double extinction_eps = 0.0;  // absolute; <= 0 means 1e-10 * ||u0||_inf
  double t_max = 1e4;
  long max_steps = 5000000;  // hard stop against stalled configurations
  int snapshots_per_decade = 16;
  int keep_last_steps = 30;
  bool check_structure = true;  // per-step dissipation/decay asserts
};

// One row of the precomputed norm table along a trajectory.
struct NormRow {
  double t = 0.0;
  double l1 = 0.0;
  double lp = 0.0;  // primary probe exponent
  double linf = 0.0;
  double l1phi = 0.0;
  double l1pm = 0.0;  // L^{1+m}
  double hstar = 0.0;
  double h_of_um = 0.0;  // ||u^m||_H
  double q = 0.0;
  double qstar = 0.0;
  std::vector<double> lp_extra;  // remaining probe exponents, in order
};

struct ExtinctionEstimate {
  double t_hat = 0.0;  // first time ||u||_inf < extinction_eps
  double t_fit = 0.0;  // intercept of the linear fit of ||u||_{1+m}^{1-m}
};

struct Trajectory {
  std::vector<double> times;
  std::vector<Field> snapshots;
  std::vector<NormRow> norm_series;
  double m = 0.5;
  OperatorBundle bundle;
  std::vector<double> lp_probes;  // p values behind NormRow::lp / lp_extra
  std::optional<ExtinctionEstimate> extinction;
  bool signed_input = false;  // u0 had negative entries; |u0| was run
  double u0_linf = 0.0;
  double extinction_eps = 0.0;
  double max_dissipation_violation = 0.0;

  int size() const { return static_cast<int>(times.size()); }
  const Field& initial() const { return snapshots.front(); }
};

// One backward-Euler (proximal) step: solves w + dt A w^m = u with w >= 0.
Field proximal_step(const DiscreteOperator& op, const Field& u, double m, double dt,
                    const SolverConfig& cfg);

Trajectory run_flow(const OperatorBundle& bundle, const Field& u0, double m,
                    const SolverConfig& cfg, const std::vector<double>& lp_probes = {2.0});

ExtinctionEstimate detect_extinction(const Trajectory& traj);

// Stationary shape of the separable solution u = (T-t)^{1/(1-m)} w,
// i.e. nonnegative nontrivial w with A w^m = w/(1-m). Reached from the
// phi1-aligned start; no global uniqueness claim.
Field solve_separable_profile(const OperatorBundle& bundle, double m);

// Test oracle: scalar root of w + dt a w^m = u by bisection on [0, u].
double scalar_prox_bisect(double a, double u, double m, double dt, double tol = 1e-14);

}  // namespace ffde

#endif
