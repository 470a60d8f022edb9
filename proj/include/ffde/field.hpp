#ifndef FFDE_FIELD_HPP
#define FFDE_FIELD_HPP

#include <Eigen/Dense>

#include "ffde/grid.hpp"

namespace ffde {

// A function sampled on the interior nodes of a grid.
struct Field {
  GridPtr grid;
  Eigen::VectorXd values;

  Field() = default;
  Field(GridPtr g, Eigen::VectorXd v) : grid(std::move(g)), values(std::move(v)) {
    require(grid && values.size() == grid->size(), ErrorCode::invalid_argument,
            "field size does not match grid");
    require(values.allFinite(), ErrorCode::invalid_argument, "field has non-finite entries");
  }

  int size() const { return static_cast<int>(values.size()); }
};

inline Field zero_field(GridPtr g) { return Field(g, Eigen::VectorXd::Zero(g->size())); }

inline Field constant_field(GridPtr g, double c) {
  return Field(g, Eigen::VectorXd::Constant(g->size(), c));
}

// Entrywise signed power |x|^{m-1} x.
inline Eigen::VectorXd signed_pow(const Eigen::VectorXd& v, double m) {
  Eigen::VectorXd out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    double a = std::abs(v[i]);
    out[i] = a == 0.0 ? 0.0 : std::copysign(std::pow(a, m), v[i]);
  }
  return out;
}

}  // namespace ffde

#endif
