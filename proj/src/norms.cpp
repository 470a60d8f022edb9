#include "ffde/norms.hpp"

#include <cmath>
#include <functional>
#include <random>
#include <vector>

namespace ffde {

double lp_norm(const Field& f, double p) {
  require(p >= 1.0, ErrorCode::invalid_argument, "lp_norm needs p >= 1");
  if (std::isinf(p)) return f.values.cwiseAbs().maxCoeff();
  double acc = 0.0;
  for (Eigen::Index i = 0; i < f.values.size(); ++i) acc += std::pow(std::abs(f.values[i]), p);
  return std::pow(acc * f.grid->quad_weight, 1.0 / p);
}

double lp_phi_norm(const Field& f, double p, const Field& phi1) {
  require(p >= 1.0, ErrorCode::invalid_argument, "lp_phi_norm needs p >= 1");
  require(phi1.values.minCoeff() >= 0.0, ErrorCode::invalid_argument,
          "weight phi1 must be nonnegative");
  require(phi1.size() == f.size(), ErrorCode::invalid_argument, "weight size mismatch");
  double acc = 0.0;
  for (Eigen::Index i = 0; i < f.values.size(); ++i)
    acc += std::pow(std::abs(f.values[i]), p) * phi1.values[i];
  return std::pow(acc * f.grid->quad_weight, 1.0 / p);
}

double hstar_norm(const Field& f, const GreenMatrix& green) {
  require(green.g.rows() == f.size(), ErrorCode::invalid_argument, "green size mismatch");
  const double q = f.grid->quad_weight * f.values.dot(green.apply(f.values));
  require(q >= -1e-12 * std::max(1.0, f.grid->quad_weight * f.values.squaredNorm()),
          ErrorCode::internal, "H* quadratic form is negative: broken Green matrix");
  return std::sqrt(std::max(q, 0.0));
}

double h_norm(const Field& f, const DiscreteOperator& op) {
  require(op.matrix.rows() == f.size(), ErrorCode::invalid_argument, "operator size mismatch");
  const double q = f.grid->quad_weight * f.values.dot(op.matrix * f.values);
  require(q >= -1e-12 * std::max(1.0, f.grid->quad_weight * f.values.squaredNorm()),
          ErrorCode::internal, "H quadratic form is negative");
  return std::sqrt(std::max(q, 0.0));
}

double rayleigh_q(const Field& f, const DiscreteOperator& op, double m) {
  require(m > 0.0 && m < 1.0, ErrorCode::invalid_argument, "rayleigh_q needs 0 < m < 1");
  require(f.values.cwiseAbs().maxCoeff() > 0.0, ErrorCode::invalid_argument,
          "rayleigh_q of the zero field");
  Eigen::VectorXd fm = signed_pow(f.values, m);
  double num = f.grid->quad_weight * fm.dot(op.matrix * fm);
  double den = std::pow(lp_norm(f, 1.0 + m), 2.0 * m);
  return num / den;
}

double rayleigh_qstar(const Field& f, const GreenMatrix& green, double m) {
  require(m > 0.0 && m < 1.0, ErrorCode::invalid_argument, "rayleigh_qstar needs 0 < m < 1");
  require(f.values.cwiseAbs().maxCoeff() > 0.0, ErrorCode::invalid_argument,
          "rayleigh_qstar of the zero field");
  double num = std::pow(lp_norm(f, 1.0 + m), 1.0 + m);
  double den = std::pow(hstar_norm(f, green), 1.0 + m);
  return num / den;
}

namespace {

struct RatioProblem {
  // maximize num(f)/den(f); both norms, positively homogeneous of degree 1
  std::function<double(const Eigen::VectorXd&)> num, den;
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> grad_log_num, grad_log_den;
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> fixed_point;
};

struct MaxResult {
  double value = 0.0;
  bool converged = false;
};

MaxResult maximize_ratio(const RatioProblem& prob, const std::vector<Eigen::VectorXd>& starts,
                         long max_total_iters) {
  MaxResult best;
  long iters = 0;
  for (const auto& start : starts) {
    Eigen::VectorXd f = start;
    if (f.cwiseAbs().maxCoeff() == 0.0) continue;
    f /= prob.den(f);
    // fixed-point warmup toward the critical point
    for (int k = 0; k < 60 && iters < max_total_iters; ++k, ++iters) {
      Eigen::VectorXd next = prob.fixed_point(f);
      double d = prob.den(next);
      if (!(d > 0.0) || !next.allFinite()) break;
      f = next / d;
    }
    double ratio = prob.num(f);
    double step = 0.1;
    bool conv = false;
    while (iters < max_total_iters) {
      ++iters;
      Eigen::VectorXd g = prob.grad_log_num(f) - prob.grad_log_den(f);
      if (g.norm() <= 1e-8) {
        conv = true;
        break;
      }
      Eigen::VectorXd trial = f + step * g;
      double d = prob.den(trial);
      if (d > 0.0 && trial.allFinite()) {
        trial /= d;
        double r = prob.num(trial);
        if (r >= ratio) {
          f = trial;
          ratio = r;
          step *= 1.25;
          continue;
        }
      }
      step *= 0.5;
      if (step < 1e-14) break;
    }
    if (ratio > best.value) {
      best.value = ratio;
      best.converged = conv;
    }
  }
  return best;
}

}  // namespace

FunctionalConstants estimate_functional_constants(const DiscreteOperator& op,
                                                  const GreenMatrix& green, int n_eff, double s,
                                                  int starts, unsigned long long seed) {
  FunctionalConstants fc;
  SpectralData sd = spectrum(op);
  fc.lambda1 = sd.lambda1;
  fc.applicable = n_eff > 2.0 * s;
  if (!fc.applicable) {
    fc.two_star = std::nan("");
    fc.sobolev_S = fc.hls_H = std::nan("");
    return fc;
  }
  const double two_star = 2.0 * n_eff / (n_eff - 2.0 * s);
  const double two_star_conj = 2.0 * n_eff / (n_eff + 2.0 * s);
  fc.two_star = two_star;

  const int M = op.grid->size();
  const double w = op.grid->quad_weight;
  auto lp = [&](const Eigen::VectorXd& v, double p) {
    double acc = 0.0;
    for (Eigen::Index i = 0; i < v.size(); ++i) acc += std::pow(std::abs(v[i]), p);
    return std::pow(acc * w, 1.0 / p);
  };

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<Eigen::VectorXd> start_set;
  start_set.push_back(sd.phi1.values);
  for (int k = 0; k < starts; ++k) {
    Eigen::VectorXd v(M);
    for (int i = 0; i < M; ++i) v[i] = std::abs(normal(rng));
    start_set.push_back(std::move(v));
  }

  // Sobolev: sup ||f||_{2*} / ||f||_H
  {
    RatioProblem prob;
    prob.num = [&](const Eigen::VectorXd& f) { return lp(f, two_star); };
    prob.den = [&](const Eigen::VectorXd& f) {
      return std::sqrt(std::max(w * f.dot(op.matrix * f), 0.0));
    };
    prob.grad_log_num = [&](const Eigen::VectorXd& f) {
      double n = lp(f, two_star);
      Eigen::VectorXd g(f.size());
      for (Eigen::Index i = 0; i < f.size(); ++i)
        g[i] = w * std::copysign(std::pow(std::abs(f[i]), two_star - 1.0), f[i]);
      return Eigen::VectorXd(g / std::pow(n, two_star));
    };
    prob.grad_log_den = [&](const Eigen::VectorXd& f) {
      double n2 = w * f.dot(op.matrix * f);
      return Eigen::VectorXd(w * (op.matrix * f) / n2);
    };
    prob.fixed_point = [&](const Eigen::VectorXd& f) {
      Eigen::VectorXd p(f.size());
      for (Eigen::Index i = 0; i < f.size(); ++i)
        p[i] = std::copysign(std::pow(std::abs(f[i]), two_star - 1.0), f[i]);
      return green.apply(p);
    };
    MaxResult r = maximize_ratio(prob, start_set, 100000);
    fc.sobolev_S = r.value;
    fc.sobolev_converged = r.converged;
  }

  // HLS: sup ||f||_{H*} / ||f||_{(2*)'}
  {
    const double q = two_star_conj;
    RatioProblem prob;
    prob.num = [&](const Eigen::VectorXd& f) {
      return std::sqrt(std::max(w * f.dot(green.apply(f)), 0.0));
    };
    prob.den = [&](const Eigen::VectorXd& f) { return lp(f, q); };
    prob.grad_log_num = [&](const Eigen::VectorXd& f) {
      double n2 = w * f.dot(green.apply(f));
      return Eigen::VectorXd(w * green.apply(f) / n2);
    };
    prob.grad_log_den = [&](const Eigen::VectorXd& f) {
      double n = lp(f, q);
      Eigen::VectorXd g(f.size());
      for (Eigen::Index i = 0; i < f.size(); ++i)
        g[i] = w * std::copysign(std::pow(std::abs(f[i]), q - 1.0), f[i]);
      return Eigen::VectorXd(g / std::pow(n, q));
    };
    prob.fixed_point = [&](const Eigen::VectorXd& f) {
      Eigen::VectorXd af = green.apply(f);
      Eigen::VectorXd p(f.size());
      for (Eigen::Index i = 0; i < f.size(); ++i)
        p[i] = std::copysign(std::pow(std::abs(af[i]), 1.0 / (q - 1.0)), af[i]);
      return p;
    };
    MaxResult r = maximize_ratio(prob, start_set, 100000);
    fc.hls_H = r.value;
    fc.hls_converged = r.converged;
  }
  return fc;
}

}  // namespace ffde
