#ifndef FFDE_OPERATORS_HPP
#define FFDE_OPERATORS_HPP

#include <Eigen/Dense>
#include <memory>
#include <optional>
#include <string>

#include "ffde/field.hpp"
#include "ffde/grid.hpp"

namespace ffde {

enum class OperatorKind { local, sfl, rfl, cfl };

std::string kind_name(OperatorKind k);
OperatorKind kind_from_name(const std::string& name);

// Boundary exponent of the ground state: 1 for local/SFL, s for RFL, 2s-1 for CFL.
double boundary_gamma(OperatorKind kind, double s);

struct OperatorSpec {
  OperatorKind kind = OperatorKind::local;
  double s = 1.0;
  double gamma = 1.0;
};

// Dense symmetric positive-definite realization of the diffusion operator A
// on the interior nodes, acting pointwise ((A f)_i = sum_j A_ij f_j).
struct DiscreteOperator {
  OperatorSpec spec;
  GridPtr grid;
  Eigen::MatrixXd matrix;
  bool offdiag_nonpositive = false;
};

using OperatorPtr = std::shared_ptr<const DiscreteOperator>;

struct SpectralData {
  Eigen::VectorXd eigenvalues;  // ascending
  Eigen::MatrixXd eigenvectors;  // columns, orthonormal in the discrete L2 product
  Field phi1;                    // ground state, nonnegative, ||phi1||_2 = 1
  double lambda1 = 0.0;
};

// Kernel of the inverse in the quadrature convention
// (A^{-1} f)(x_i) = sum_j g_ij f_j h^dim.
struct GreenMatrix {
  Eigen::MatrixXd g;
  double quad_weight = 1.0;

  // A^{-1} applied to nodal values.
  Eigen::VectorXd apply(const Eigen::VectorXd& f) const { return quad_weight * (g * f); }
};

struct KernelBoundReport {
  bool upper_applicable = false;  // requires N > 2s
  double c1_hat_unweighted = 0.0;  // (K1) template
  double c1_hat = 0.0;             // (K2)/(K4) weighted upper template
  double c0_hat = 0.0;             // (K2) lower template
  double k4_ratio_min = 0.0;       // range of G / weighted template
  double k4_ratio_max = 0.0;
  int excluded_band = 1;
  std::string note;
};

DiscreteOperator build_local_laplacian(GridPtr grid);
DiscreteOperator build_sfl(GridPtr grid, double s);
DiscreteOperator build_rfl(GridPtr grid, double s, bool allow_2d = false);
DiscreteOperator build_cfl(GridPtr grid, double s, bool allow_2d = false);
DiscreteOperator build_operator(GridPtr grid, OperatorKind kind, double s, bool allow_2d = false);

SpectralData spectrum(const DiscreteOperator& op);
GreenMatrix green_matrix(const DiscreteOperator& op);
KernelBoundReport check_kernel_bounds(const GreenMatrix& green, const OperatorSpec& spec,
                                      const Grid& grid, int excluded_band = 1);
// Least-squares slope of log(phi1) against log(delta) over delta in [2h, 0.1].
double fit_boundary_exponent(const SpectralData& spectral, const BoundaryDistance& bd,
                             const Grid& grid);

// Normalization constant c_{N,s} of the hypersingular kernel.
double fractional_kernel_constant(int dim, double s);

// Convenient bundle: operator together with its spectral data and Green matrix.
struct OperatorBundle {
  OperatorPtr op;
  std::shared_ptr<const SpectralData> spectral;
  std::shared_ptr<const GreenMatrix> green;

  const Grid& grid() const { return *op->grid; }
};

OperatorBundle make_bundle(DiscreteOperator op);

}  // namespace ffde

#endif
