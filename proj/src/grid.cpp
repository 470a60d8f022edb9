#include "ffde/grid.hpp"

#include <algorithm>
#include <cmath>

namespace ffde {

GridPtr make_grid(int dim, int n_per_axis) {
  require(dim == 1 || dim == 2, ErrorCode::invalid_argument, "grid dim must be 1 or 2");
  require(n_per_axis >= 1, ErrorCode::invalid_argument, "n_per_axis must be >= 1");

  auto g = std::make_shared<Grid>();
  g->dim = dim;
  g->n_per_axis = n_per_axis;
  g->h = 1.0 / (n_per_axis + 1);
  g->quad_weight = std::pow(g->h, dim);

  if (dim == 1) {
    g->nodes.reserve(n_per_axis);
    for (int i = 0; i < n_per_axis; ++i) g->nodes.push_back({(i + 1) * g->h, 0.0});
  } else {
    g->nodes.reserve(static_cast<size_t>(n_per_axis) * n_per_axis);
    for (int ix = 0; ix < n_per_axis; ++ix)
      for (int iy = 0; iy < n_per_axis; ++iy)
        g->nodes.push_back({(ix + 1) * g->h, (iy + 1) * g->h});
  }
  return g;
}

BoundaryDistance boundary_distance(const Grid& grid) {
  BoundaryDistance bd;
  bd.delta.reserve(grid.nodes.size());
  for (const auto& p : grid.nodes) {
    double d = std::min(p[0], 1.0 - p[0]);
    if (grid.dim == 2) d = std::min(d, std::min(p[1], 1.0 - p[1]));
    bd.delta.push_back(d);
  }
  return bd;
}

}  // namespace ffde
