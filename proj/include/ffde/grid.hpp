#ifndef FFDE_GRID_HPP
#define FFDE_GRID_HPP

#include <array>
#include <memory>
#include <vector>

#include "ffde/errors.hpp"

namespace ffde {

// Uniform interior-node grid on the unit interval/square. Only interior
// nodes carry unknowns; the homogeneous Dirichlet condition lives in the
// operator construction.
struct Grid {
  int dim = 1;           // 1 or 2
  int n_per_axis = 1;    // interior nodes per axis
  double h = 0.5;        // spacing, h = 1/(n_per_axis+1)
  double quad_weight = 0.5;  // cell measure h^dim
  std::vector<std::array<double, 2>> nodes;  // (x) or (x,y); [1] = 0 in 1D

  int size() const { return static_cast<int>(nodes.size()); }
  // Axis indices of node k (lexicographic ordering, ix major).
  std::array<int, 2> axis_index(int k) const {
    if (dim == 1) return {k, 0};
    return {k / n_per_axis, k % n_per_axis};
  }
};

using GridPtr = std::shared_ptr<const Grid>;

// Distance to the boundary of the unit box, per node.
struct BoundaryDistance {
  std::vector<double> delta;
};

GridPtr make_grid(int dim, int n_per_axis);
BoundaryDistance boundary_distance(const Grid& grid);

}  // namespace ffde

#endif
