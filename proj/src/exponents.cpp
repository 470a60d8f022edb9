#include "ffde/exponents.hpp"

#include <cmath>

#include "ffde/errors.hpp"

namespace ffde {
namespace constants {

namespace {
const double nan_pole = std::nan("");
}

double ExponentTable::theta(double p) const {
  double den = 2.0 * s * p - N * (1.0 - m);
  return den == 0.0 ? nan_pole : 1.0 / den;
}

double ExponentTable::theta_gamma(double p) const {
  double den = (2.0 * s - gamma) * p - N * (1.0 - m);
  return den == 0.0 ? nan_pole : 1.0 / den;
}

ExponentTable critical_exponents(int N, double s, double m, double gamma) {
  require(N >= 1, ErrorCode::invalid_argument, "critical_exponents needs N >= 1");
  require(s > 0.0 && s <= 1.0, ErrorCode::invalid_argument, "critical_exponents needs s in (0,1]");
  require(m > 0.0 && m < 1.0, ErrorCode::invalid_argument, "critical_exponents needs m in (0,1)");
  require(gamma >= 0.0 && gamma <= 1.0, ErrorCode::invalid_argument,
          "critical_exponents needs gamma in [0,1]");
  ExponentTable t;
  t.N = N;
  t.s = s;
  t.m = m;
  t.gamma = gamma;
  t.m_c = (N - 2.0 * s) / N;
  t.p_c = N * (1.0 - m) / (2.0 * s);
  t.m_s = (N - 2.0 * s) / (N + 2.0 * s);
  t.m_c_gamma = (N + gamma - 2.0 * s) / N;
  t.p_c_gamma = (2.0 * s > gamma) ? N * (1.0 - m) / (2.0 * s - gamma) : nan_pole;
  {
    double den = 2.0 * s * (1.0 + m) - N * (1.0 - m);
    t.theta_1pm = den == 0.0 ? nan_pole : 1.0 / den;
  }
  t.two_star = (N > 2.0 * s) ? 2.0 * N / (N - 2.0 * s) : nan_pole;
  t.good_fast_diffusion = m > t.m_c;
  t.outside_hypotheses = !(N > 2.0 * s);
  return t;
}

double kappa_pq(double p, double q, int N, double s, double m, double sobolev_S) {
  double p_c = N * (1.0 - m) / (2.0 * s);
  require(p > p_c, ErrorCode::invalid_argument, "kappa_pq needs p > p_c");
  require(q >= p && q > 1.0, ErrorCode::invalid_argument, "kappa_pq needs q >= p, q > 1");
  if (q == p) return 1.0;  // zero exponent
  double theta_p = 1.0 / (2.0 * s * p - N * (1.0 - m));
  double base = N * sobolev_S * sobolev_S * (q - p) * (q + m - 1.0) * (q + m - 1.0) * theta_p /
                (4.0 * q * (q - 1.0) * m);
  double expo = N * (q - p) * theta_p / q;
  return std::pow(base, expo);
}

double moser_cbar(double p, int N, double s, double m, double sobolev_S) {
  double p_c = N * (1.0 - m) / (2.0 * s);
  require(p > std::max(1.0, p_c), ErrorCode::invalid_argument,
          "moser constant needs p > max(1, p_c)");
  return (N * sobolev_S * sobolev_S / (2.0 * m)) * p * p /
         ((p - 1.0) * (2.0 * s * p - N * (1.0 - m)));
}

double moser_kappa(double p, int N, double s, double m, double sobolev_S) {
  double cbar = moser_cbar(p, N, s, m, sobolev_S);
  double theta_p = 1.0 / (2.0 * s * p - N * (1.0 - m));
  return std::pow(2.0, N / (s * p)) * std::pow(cbar, N * theta_p);
}

double cpm(double p, double m) {
  require(p + m > 1.0, ErrorCode::invalid_argument, "c_{p,m} needs p + m > 1");
  require(m > 0.0 && m < 1.0, ErrorCode::invalid_argument, "c_{p,m} needs m in (0,1)");
  return (p + m - 1.0) / (m * (1.0 - m));
}

double cmq(double m, double q) {
  require(q > 1.0, ErrorCode::invalid_argument, "c_{m,q} needs q > 1");
  require(m > 0.0 && m < 1.0, ErrorCode::invalid_argument, "c_{m,q} needs m in (0,1)");
  return 4.0 * (q - 1.0) * m / ((q + m - 1.0) * (q + m - 1.0));
}

double degiorgi_constant(double alpha, double lambda, double theta) {
  require(alpha > 0.0, ErrorCode::invalid_argument, "De Giorgi constant needs alpha > 0");
  require(theta >= 0.0 && theta < 1.0, ErrorCode::invalid_argument,
          "De Giorgi constant needs theta in [0,1)");
  require(lambda > std::pow(theta, 1.0 / alpha) && lambda < 1.0, ErrorCode::invalid_argument,
          "De Giorgi constant needs lambda in (theta^{1/alpha}, 1)");
  return 1.0 / (std::pow(1.0 - lambda, alpha) * (1.0 - theta / std::pow(lambda, alpha)));
}

double degiorgi_best(double alpha, double theta, double* lambda_out) {
  require(alpha > 0.0, ErrorCode::invalid_argument, "De Giorgi constant needs alpha > 0");
  require(theta >= 0.0 && theta < 1.0, ErrorCode::invalid_argument,
          "De Giorgi constant needs theta in [0,1)");
  double lo = std::pow(theta, 1.0 / alpha), hi = 1.0;
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo + 1e-14, b = hi - 1e-14;
  double c = b - gr * (b - a), d = a + gr * (b - a);
  auto f = [&](double lam) { return degiorgi_constant(alpha, lam, theta); };
  double fc = f(c), fd = f(d);
  while (b - a > 1e-10) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - gr * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + gr * (b - a);
      fd = f(d);
    }
  }
  double lam = 0.5 * (a + b);
  if (lambda_out) *lambda_out = lam;
  return f(lam);
}

}  // namespace constants
}  // namespace ffde
