#ifndef FFDE_NORMS_HPP
#define FFDE_NORMS_HPP

#include <limits>

#include "ffde/field.hpp"
#include "ffde/operators.hpp"

namespace ffde {

inline constexpr double infinity = std::numeric_limits<double>::infinity();

// Discrete L^p norm, single quadrature weight h^dim throughout.
double lp_norm(const Field& f, double p);
// Weighted norm (integral of |f|^p phi1)^{1/p}.
double lp_phi_norm(const Field& f, double p, const Field& phi1);
// ||f||_{H*}^2 = integral of f A^{-1} f.
double hstar_norm(const Field& f, const GreenMatrix& green);
// ||f||_H^2 = integral of f A f.
double h_norm(const Field& f, const DiscreteOperator& op);

// Nonlinear Rayleigh quotients, both invariant under positive scaling.
double rayleigh_q(const Field& f, const DiscreteOperator& op, double m);
double rayleigh_qstar(const Field& f, const GreenMatrix& green, double m);

struct FunctionalConstants {
  double lambda1 = 0.0;
  double sobolev_S = 0.0;   // sup ||f||_{2*} / ||f||_H
  double hls_H = 0.0;       // sup ||f||_{H*} / ||f||_{(2*)'}
  double two_star = 0.0;    // 2N/(N-2s)
  bool applicable = false;  // N > 2s
  bool sobolev_converged = false;
  bool hls_converged = false;
};

FunctionalConstants estimate_functional_constants(const DiscreteOperator& op,
                                                  const GreenMatrix& green, int n_eff, double s,
                                                  int starts = 50, unsigned long long seed = 1234);

// Discrete L2 inner product sum(f g) h^dim.
inline double inner(const Field& a, const Field& b) {
  return a.grid->quad_weight * a.values.dot(b.values);
}

}  // namespace ffde

#endif
