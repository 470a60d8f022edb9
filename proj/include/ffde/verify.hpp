#ifndef FFDE_VERIFY_HPP
#define FFDE_VERIFY_HPP

#include <optional>
#include <string>
#include <vector>

#include "ffde/exponents.hpp"
#include "ffde/flow.hpp"

namespace ffde {
namespace verify {

enum class Verdict { holds, holds_with_constant, violated, not_applicable };

std::string verdict_name(Verdict v);

struct Record {
  double t0 = 0.0;  // single-time checks use t0 only
  double t1 = 0.0;
  int node = -1;  // -1 when not node-resolved
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;
  std::string label;
};

struct InequalityReport {
  std::string name;
  std::vector<Record> records;
  double empirical_constant = 0.0;  // sup of the constant-free ratio
  std::optional<double> theoretical_constant;
  Verdict verdict = Verdict::not_applicable;
  std::string hypothesis_note;
  double tolerance = 0.0;
  bool explicit_constant = false;  // verdict-bearing check

  const Record* worst() const;
};

enum class SmoothingKind { lp, lp_phi, hstar };

InequalityReport check_smoothing(const Trajectory& traj, double p, SmoothingKind kind);
InequalityReport check_boundary_estimate(const Trajectory& traj, double p, double gamma,
                                         const SpectralData& spectral, bool weighted = false);
InequalityReport check_extinction_bounds(const Trajectory& traj, double p, double alpha,
                                         double tol = 0.01);
InequalityReport check_time_monotonicity(const Trajectory& traj, double tol = 1e-8);
InequalityReport check_contraction(const Trajectory& traj_u, const Trajectory& traj_v,
                                   const Field& phi1, const GreenMatrix& green,
                                   double tol = 1e-10);
InequalityReport check_rayleigh_monotonicity(const Trajectory& traj, double tol = 1e-6);
InequalityReport check_pointwise_formula(const Trajectory& traj, const GreenMatrix& green,
                                         const std::vector<double>& extra_p = {}, double tol = 0.01);
InequalityReport check_energy_estimate(const Trajectory& traj, const DiscreteOperator& op,
                                       double tol = 0.01);
InequalityReport check_stroock_varopoulos(const DiscreteOperator& op, double q, int trials,
                                          unsigned long long seed);
InequalityReport check_kato(const DiscreteOperator& op, int trials, unsigned long long seed);
InequalityReport check_strong_derivative(const Trajectory& traj, const Field& phi1,
                                         double tol = 0.01);
InequalityReport check_green_norm_bounds(const GreenMatrix& green, const SpectralData& spectral,
                                         double q, double gamma, const Grid& grid, double s);

// Names accepted by the experiment runner.
const std::vector<std::string>& registry();
bool known_check(const std::string& name);

}  // namespace verify
}  // namespace ffde

#endif
