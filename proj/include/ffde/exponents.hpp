#ifndef FFDE_EXPONENTS_HPP
#define FFDE_EXPONENTS_HPP

#include <cmath>
#include <string>

namespace ffde {
namespace constants {

// Critical exponents of the fast diffusion equation u_t = -A u^m on a
// bounded N-dimensional domain with a 2s-order operator of boundary power
// gamma. Poles evaluate to quiet NaN rather than throwing; sweeps cross them
// deliberately.
struct ExponentTable {
  int N = 1;
  double s = 1.0;
  double m = 0.5;
  double gamma = 1.0;

  double m_c = 0.0;        // (N-2s)/N
  double p_c = 0.0;        // N(1-m)/(2s)
  double m_s = 0.0;        // (N-2s)/(N+2s)
  double m_c_gamma = 0.0;  // (N+gamma-2s)/N
  double p_c_gamma = 0.0;  // N(1-m)/(2s-gamma); NaN when 2s <= gamma
  double theta_1pm = 0.0;  // 1/(2s(1+m) - N(1-m))
  double two_star = 0.0;   // 2N/(N-2s); NaN when N <= 2s
  bool good_fast_diffusion = false;  // m > m_c
  bool outside_hypotheses = false;   // N <= 2s

  double theta(double p) const;        // 1/(2sp - N(1-m))
  double theta_gamma(double p) const;  // 1/((2s-gamma)p - N(1-m))
  std::string regime_label() const {
    return good_fast_diffusion ? "good_fast_diffusion" : "very_fast_diffusion";
  }
};

ExponentTable critical_exponents(int N, double s, double m, double gamma);

inline bool is_pole(double x) { return std::isnan(x); }

// Constant of the L^p-L^q smoothing lemma,
// (N S^2 (q-p)(q+m-1)^2 theta_p / (4 q (q-1) m))^{N(q-p) theta_p / q}.
double kappa_pq(double p, double q, int N, double s, double m, double sobolev_S);

// Limit constant of the Moser iteration, 2^{N/(sp)} cbar^{N theta_p} with
// cbar = (N S^2 / 2m) p^2 / ((p-1)(2sp - N(1-m))).
double moser_kappa(double p, int N, double s, double m, double sobolev_S);
double moser_cbar(double p, int N, double s, double m, double sobolev_S);

// c_{p,m} = (p+m-1)/(m(1-m)) of the fundamental upper bounds.
double cpm(double p, double m);
// c_{m,q} = 4(q-1)m/(q+m-1)^2, Stroock-Varopoulos constant for v = u^m probes.
double cmq(double m, double q);

// De Giorgi iteration constant 1/((1-lambda)^alpha (1 - theta/lambda^alpha)),
// valid for lambda in (theta^{1/alpha}, 1).
double degiorgi_constant(double alpha, double lambda, double theta);
// Golden-section minimum of the above over admissible lambda, to 1e-10.
double degiorgi_best(double alpha, double theta, double* lambda_out = nullptr);

}  // namespace constants
}  // namespace ffde

#endif
