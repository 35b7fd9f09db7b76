#include "specwave/grid.hpp"

#include <cmath>

#include "specwave/errors.hpp"

namespace specwave {

Grid1D::Grid1D(double radius_in, int n_points_in)
    : radius(radius_in), n_points(n_points_in) {
  if (!std::isfinite(radius) || radius <= 0.0)
    throw PreconditionError("Grid1D: radius must be finite and positive");
  if (n_points < 3)
    throw PreconditionError("Grid1D: need at least 3 nodes (1 interior)");
  spacing = 2.0 * radius / (n_points - 1);
}

std::vector<double> Grid1D::interior_nodes() const {
  std::vector<double> xs(n_interior());
  for (int j = 0; j < n_interior(); ++j) xs[j] = x(j);
  return xs;
}

Grid1D build_grid(double radius, int n_points) {
  if (!std::isfinite(radius) || radius <= 0.0)
    throw PreconditionError("build_grid: radius must be finite and positive");
  if (n_points < 8)
    throw PreconditionError("build_grid: n_points must be >= 8");
  return Grid1D(radius, n_points);
}

GridFunction::GridFunction(const Grid1D& g, std::vector<std::complex<double>> v)
    : grid(g), values(std::move(v)) {
  if (static_cast<int>(values.size()) != grid.n_interior())
    throw PreconditionError("GridFunction: length does not match grid interior");
}

std::complex<double> inner_l2(const Grid1D& grid,
                              const std::vector<std::complex<double>>& f,
                              const std::vector<std::complex<double>>& g) {
  if (f.size() != g.size() || static_cast<int>(f.size()) != grid.n_interior())
    throw PreconditionError("inner_l2: size mismatch");
  std::complex<double> acc{0.0, 0.0};
  for (size_t j = 0; j < f.size(); ++j) acc += f[j] * std::conj(g[j]);
  return grid.spacing * acc;
}

double norm_l2(const Grid1D& grid, const std::vector<std::complex<double>>& f) {
  double acc = 0.0;
  for (const auto& v : f) acc += std::norm(v);
  return std::sqrt(grid.spacing * acc);
}

}  // namespace specwave
