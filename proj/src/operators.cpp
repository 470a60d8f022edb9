#include "ffde/operators.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace ffde {

namespace {

// Gauss-Legendre nodes/weights on [-1,1] by Newton iteration.
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
  x.assign(n, 0.0);
  w.assign(n, 0.0);
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
      }
      pp = n * (z * p0 - p1) / (z * z - 1.0);
      double dz = p0 / pp;
      z -= dz;
      if (std::abs(dz) < 1e-15) break;
    }
    x[i] = -z;
    x[n - 1 - i] = z;
    w[i] = 2.0 / ((1.0 - z * z) * pp * pp);
    w[n - 1 - i] = w[i];
  }
}

// integral of |z|^{-1-2s} over [a,b], 0 < a < b (1D kernel antiderivative).
double segment_integral_1d(double a, double b, double s) {
  return (std::pow(a, -2.0 * s) - std::pow(b, -2.0 * s)) / (2.0 * s);
}

// integral of |x0 - y|^{-dim-2s} over the cell centered at xj (side h).
double cell_integral(const Grid& grid, const std::array<double, 2>& x0,
                     const std::array<double, 2>& xj, double s) {
  const double h = grid.h;
  if (grid.dim == 1) {
    double d = std::abs(x0[0] - xj[0]);
    return segment_integral_1d(d - h / 2.0, d + h / 2.0, s);
  }
  // 2D: tensor Gauss-Legendre over the cell; the kernel is smooth there
  // (cells are disjoint from x0 by at least h).
  static thread_local std::vector<double> gx, gw;
  if (gx.empty()) gauss_legendre(12, gx, gw);
  double dx = x0[0] - xj[0], dy = x0[1] - xj[1];
  double dist2 = dx * dx + dy * dy;
  if (dist2 > 36.0 * h * h) {
    // midpoint rule far from the singular cell
    return h * h * std::pow(dist2, -(1.0 + s));
  }
  double acc = 0.0;
  for (size_t a = 0; a < gx.size(); ++a)
    for (size_t b = 0; b < gx.size(); ++b) {
      double u = dx + 0.5 * h * gx[a];
      double v = dy + 0.5 * h * gx[b];
      acc += gw[a] * gw[b] * std::pow(u * u + v * v, -(1.0 + s));
    }
  return acc * 0.25 * h * h;
}

// integral of |z|^{-dim-2s} over the complement of the centered cell of side h.
double full_complement_integral(int dim, double h, double s) {
  if (dim == 1) return std::pow(h / 2.0, -2.0 * s) / s;
  // polar: (1/2s) int_0^{2pi} r(theta)^{-2s}, r = (h/2)/max(|cos|,|sin|)
  static thread_local std::vector<double> gx, gw;
  if (gx.empty()) gauss_legendre(64, gx, gw);
  double acc = 0.0;
  const double quarter = std::numbers::pi / 4.0;
  for (size_t a = 0; a < gx.size(); ++a) {
    double th = quarter * 0.5 * (gx[a] + 1.0);
    acc += gw[a] * std::pow(std::cos(th), 2.0 * s);
  }
  acc *= quarter * 0.5;
  return (8.0 * acc / (2.0 * s)) * std::pow(h / 2.0, -2.0 * s);
}

// distance from x0 to the unit-box boundary along direction (c, sn).
double boundary_ray(const std::array<double, 2>& x0, double c, double sn) {
  double R = std::numeric_limits<double>::infinity();
  if (c > 0) R = std::min(R, (1.0 - x0[0]) / c);
  if (c < 0) R = std::min(R, x0[0] / (-c));
  if (sn > 0) R = std::min(R, (1.0 - x0[1]) / sn);
  if (sn < 0) R = std::min(R, x0[1] / (-sn));
  return R;
}

// integral of |x0 - y|^{-dim-2s} over the exterior of the unit box.
double exterior_integral(int dim, const std::array<double, 2>& x0, double s) {
  if (dim == 1) {
    return (std::pow(x0[0], -2.0 * s) + std::pow(1.0 - x0[0], -2.0 * s)) / (2.0 * s);
  }
  // polar with R(theta) = distance from x0 to the box boundary along theta
  const int nth = 1024;
  double acc = 0.0;
  for (int k = 0; k < nth; ++k) {
    double th = (k + 0.5) * 2.0 * std::numbers::pi / nth;
    double R = boundary_ray(x0, std::cos(th), std::sin(th));
    acc += std::pow(R, -2.0 * s);
  }
  return acc * (2.0 * std::numbers::pi / nth) / (2.0 * s);
}

}  // namespace

std::string kind_name(OperatorKind k) {
  switch (k) {
    case OperatorKind::local: return "local";
    case OperatorKind::sfl: return "sfl";
    case OperatorKind::rfl: return "rfl";
    case OperatorKind::cfl: return "cfl";
  }
  return "?";
}

OperatorKind kind_from_name(const std::string& name) {
  if (name == "local") return OperatorKind::local;
  if (name == "sfl") return OperatorKind::sfl;
  if (name == "rfl") return OperatorKind::rfl;
  if (name == "cfl") return OperatorKind::cfl;
  fail(ErrorCode::invalid_argument, "unknown operator kind: " + name);
}

double boundary_gamma(OperatorKind kind, double s) {
  switch (kind) {
    case OperatorKind::local:
    case OperatorKind::sfl: return 1.0;
    case OperatorKind::rfl: return s;
    case OperatorKind::cfl: return 2.0 * s - 1.0;
  }
  return 1.0;
}

double fractional_kernel_constant(int dim, double s) {
  require(s > 0.0 && s < 1.0, ErrorCode::invalid_argument, "kernel constant needs s in (0,1)");
  return s * std::pow(4.0, s) * std::tgamma(dim / 2.0 + s) /
         (std::pow(std::numbers::pi, dim / 2.0) * std::tgamma(1.0 - s));
}

namespace {

bool offdiag_flag(const Eigen::MatrixXd& a) {
  const double scale = a.cwiseAbs().maxCoeff();
  const double tol = 1e-13 * scale;  // roundoff-sized positives do not count
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      if (i != j && a(i, j) > tol) return false;
  return true;
}

DiscreteOperator finish(GridPtr grid, OperatorSpec spec, Eigen::MatrixXd m) {
  m = 0.5 * (m + m.transpose()).eval();
  DiscreteOperator op;
  op.spec = spec;
  op.grid = std::move(grid);
  op.offdiag_nonpositive = offdiag_flag(m);
  op.matrix = std::move(m);
  return op;
}

}  // namespace

DiscreteOperator build_local_laplacian(GridPtr grid) {
  require(static_cast<bool>(grid), ErrorCode::invalid_argument, "null grid");
  const int n = grid->n_per_axis;
  const int M = grid->size();
  const double ih2 = 1.0 / (grid->h * grid->h);
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(M, M);
  if (grid->dim == 1) {
    for (int i = 0; i < M; ++i) {
      a(i, i) = 2.0 * ih2;
      if (i > 0) a(i, i - 1) = -ih2;
      if (i + 1 < M) a(i, i + 1) = -ih2;
    }
  } else {
    for (int ix = 0; ix < n; ++ix)
      for (int iy = 0; iy < n; ++iy) {
        int k = ix * n + iy;
        a(k, k) = 4.0 * ih2;
        if (ix > 0) a(k, k - n) = -ih2;
        if (ix + 1 < n) a(k, k + n) = -ih2;
        if (iy > 0) a(k, k - 1) = -ih2;
        if (iy + 1 < n) a(k, k + 1) = -ih2;
      }
  }
  return finish(std::move(grid), {OperatorKind::local, 1.0, 1.0}, std::move(a));
}

DiscreteOperator build_sfl(GridPtr grid, double s) {
  require(s > 0.0 && s <= 1.0, ErrorCode::invalid_argument, "sfl needs s in (0,1]");
  DiscreteOperator base = build_local_laplacian(grid);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(base.matrix);
  require(es.info() == Eigen::Success, ErrorCode::construction,
          "eigen-decomposition failed while building sfl");
  Eigen::VectorXd mu = es.eigenvalues();
  require(mu.minCoeff() > 0.0, ErrorCode::construction, "local laplacian not positive definite");
  Eigen::VectorXd mus = mu.array().pow(s);
  Eigen::MatrixXd a = es.eigenvectors() * mus.asDiagonal() * es.eigenvectors().transpose();
  return finish(std::move(grid), {OperatorKind::sfl, s, 1.0}, std::move(a));
}

namespace {

// Shared assembly of the cell-integrated hypersingular part. The diagonal of
// the restricted operator is exactly c * integral over the complement of the
// node's own cell (exterior tail and uncovered strips included); the censored
// operator subtracts the exterior-of-domain integral, keeping the Dirichlet
// trace carried by the in-domain strips.
Eigen::MatrixXd assemble_fractional(const Grid& grid, double s, bool censored) {
  const int M = grid.size();
  const double c = fractional_kernel_constant(grid.dim, s);
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(M, M);
  const double diag_full = c * full_complement_integral(grid.dim, grid.h, s);
  for (int i = 0; i < M; ++i) {
    for (int j = i + 1; j < M; ++j) {
      double w = c * cell_integral(grid, grid.nodes[i], grid.nodes[j], s);
      a(i, j) = -w;
      a(j, i) = -w;
    }
    a(i, i) = diag_full;
    if (censored) a(i, i) -= c * exterior_integral(grid.dim, grid.nodes[i], s);
  }
  return a;
}

void check_2d_gate(const Grid& grid, bool allow_2d, const char* what) {
  if (grid.dim == 2) {
    require(allow_2d, ErrorCode::invalid_argument,
            std::string(what) + " in 2D requires the 2D-kernel feature flag");
    require(grid.n_per_axis <= 64, ErrorCode::invalid_argument,
            std::string(what) + " in 2D is limited to n_per_axis <= 64");
  }
}

}  // namespace

DiscreteOperator build_rfl(GridPtr grid, double s, bool allow_2d) {
  require(static_cast<bool>(grid), ErrorCode::invalid_argument, "null grid");
  require(s > 0.0 && s < 1.0, ErrorCode::invalid_argument, "rfl needs s in (0,1)");
  check_2d_gate(*grid, allow_2d, "rfl");
  Eigen::MatrixXd a = assemble_fractional(*grid, s, /*censored=*/false);
  return finish(std::move(grid), {OperatorKind::rfl, s, s}, std::move(a));
}

DiscreteOperator build_cfl(GridPtr grid, double s, bool allow_2d) {
  require(static_cast<bool>(grid), ErrorCode::invalid_argument, "null grid");
  require(s > 0.5 && s < 1.0, ErrorCode::invalid_argument,
          "cfl needs s in (1/2,1): the Dirichlet condition fails otherwise");
  require(grid->n_per_axis >= 2, ErrorCode::invalid_argument,
          "cfl needs n_per_axis >= 2 (no interior pairs at n=1)");
  check_2d_gate(*grid, allow_2d, "cfl");
  Eigen::MatrixXd a = assemble_fractional(*grid, s, /*censored=*/true);
  DiscreteOperator op = finish(std::move(grid), {OperatorKind::cfl, s, 2.0 * s - 1.0}, std::move(a));
  Eigen::LLT<Eigen::MatrixXd> llt(op.matrix);
  require(llt.info() == Eigen::Success, ErrorCode::construction,
          "cfl matrix is not positive definite");
  return op;
}

DiscreteOperator build_operator(GridPtr grid, OperatorKind kind, double s, bool allow_2d) {
  switch (kind) {
    case OperatorKind::local:
      require(s == 1.0, ErrorCode::invalid_argument, "local laplacian has s = 1");
      return build_local_laplacian(std::move(grid));
    case OperatorKind::sfl: return build_sfl(std::move(grid), s);
    case OperatorKind::rfl: return build_rfl(std::move(grid), s, allow_2d);
    case OperatorKind::cfl: return build_cfl(std::move(grid), s, allow_2d);
  }
  fail(ErrorCode::invalid_argument, "unknown operator kind");
}

SpectralData spectrum(const DiscreteOperator& op) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(op.matrix);
  require(es.info() == Eigen::Success, ErrorCode::construction, "eigen-decomposition failed");
  SpectralData sd;
  sd.eigenvalues = es.eigenvalues();
  require(sd.eigenvalues.minCoeff() > 0.0, ErrorCode::construction,
          "operator is not positive definite (eigenvalue <= 0)");
  const double scale = 1.0 / std::sqrt(op.grid->quad_weight);
  sd.eigenvectors = es.eigenvectors() * scale;  // orthonormal in the h^dim product
  Eigen::VectorXd phi = sd.eigenvectors.col(0);
  if (phi.sum() < 0.0) phi = -phi;
  const double mx = phi.cwiseAbs().maxCoeff();
  require(phi.minCoeff() >= -1e-8 * mx, ErrorCode::construction,
          "ground state has a sign change (Perron structure violated)");
  phi = phi.cwiseMax(0.0);
  sd.phi1 = Field(op.grid, std::move(phi));
  sd.lambda1 = sd.eigenvalues[0];
  return sd;
}

GreenMatrix green_matrix(const DiscreteOperator& op) {
  Eigen::LLT<Eigen::MatrixXd> llt(op.matrix);
  require(llt.info() == Eigen::Success, ErrorCode::construction,
          "singular operator matrix: no Green matrix");
  const int M = static_cast<int>(op.matrix.rows());
  Eigen::MatrixXd inv = llt.solve(Eigen::MatrixXd::Identity(M, M));
  inv = 0.5 * (inv + inv.transpose()).eval();
  GreenMatrix green;
  green.quad_weight = op.grid->quad_weight;
  green.g = inv / green.quad_weight;
  return green;
}

KernelBoundReport check_kernel_bounds(const GreenMatrix& green, const OperatorSpec& spec,
                                      const Grid& grid, int excluded_band) {
  KernelBoundReport rep;
  rep.excluded_band = excluded_band;
  const int N = grid.dim;
  const double s = spec.s;
  const double gamma = spec.gamma;
  rep.upper_applicable = N > 2.0 * s;
  if (!rep.upper_applicable)
    rep.note = "N <= 2s: |x-y|^{-(N-2s)} upper templates not applicable; (K2) lower bound only";

  BoundaryDistance bd = boundary_distance(grid);
  const int M = grid.size();
  const double inf = std::numeric_limits<double>::infinity();
  double c1u = 0.0, c1w = 0.0;
  double c0 = inf;
  double k4min = inf, k4max = 0.0;
  bool any = false;
  for (int i = 0; i < M; ++i) {
    auto ai = grid.axis_index(i);
    const double phi_i = std::pow(bd.delta[i], gamma);
    for (int j = 0; j < M; ++j) {
      if (i == j) continue;
      auto aj = grid.axis_index(j);
      int off = std::max(std::abs(ai[0] - aj[0]), std::abs(ai[1] - aj[1]));
      if (off <= excluded_band) continue;
      any = true;
      const double G = green.g(i, j);
      const double phi_j = std::pow(bd.delta[j], gamma);
      c0 = std::min(c0, G / (phi_i * phi_j));
      if (!rep.upper_applicable) continue;
      double dx = grid.nodes[i][0] - grid.nodes[j][0];
      double dy = grid.nodes[i][1] - grid.nodes[j][1];
      double r = std::sqrt(dx * dx + dy * dy);
      double base = std::pow(r, -(N - 2.0 * s));
      c1u = std::max(c1u, G / base);
      double rg = std::pow(r, gamma);
      double tmpl = base * std::min(phi_i / rg, 1.0) * std::min(phi_j / rg, 1.0);
      double ratio = G / tmpl;
      c1w = std::max(c1w, ratio);
      k4min = std::min(k4min, ratio);
      k4max = std::max(k4max, ratio);
    }
  }
  require(any, ErrorCode::invalid_argument, "exclusion band leaves no admissible pairs");
  rep.c0_hat = c0;
  if (rep.upper_applicable) {
    rep.c1_hat_unweighted = c1u;
    rep.c1_hat = c1w;
    rep.k4_ratio_min = k4min;
    rep.k4_ratio_max = k4max;
  } else {
    rep.c1_hat_unweighted = rep.c1_hat = std::nan("");
    rep.k4_ratio_min = rep.k4_ratio_max = std::nan("");
  }
  return rep;
}

double fit_boundary_exponent(const SpectralData& spectral, const BoundaryDistance& bd,
                             const Grid& grid) {
  require(grid.n_per_axis >= 32, ErrorCode::invalid_argument,
          "boundary-exponent fit needs n_per_axis >= 32");
  const double lo = 2.0 * grid.h, hi = 0.1;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int cnt = 0;
  for (int i = 0; i < grid.size(); ++i) {
    double d = bd.delta[i];
    double v = spectral.phi1.values[i];
    if (d < lo || d > hi || v <= 0.0) continue;
    double X = std::log(d), Y = std::log(v);
    sx += X;
    sy += Y;
    sxx += X * X;
    sxy += X * Y;
    ++cnt;
  }
  require(cnt >= 4, ErrorCode::insufficient_data,
          "boundary-exponent fit window holds fewer than 4 nodes");
  double denom = cnt * sxx - sx * sx;
  return (cnt * sxy - sx * sy) / denom;
}

OperatorBundle make_bundle(DiscreteOperator op) {
  OperatorBundle b;
  auto ptr = std::make_shared<DiscreteOperator>(std::move(op));
  b.op = ptr;
  b.spectral = std::make_shared<SpectralData>(spectrum(*ptr));
  b.green = std::make_shared<GreenMatrix>(green_matrix(*ptr));
  return b;
}

}  // namespace ffde
