#pragma once

#include <complex>
#include <vector>

namespace specwave {

// Uniform grid on [-R, R]. Functions live on the interior nodes; the two
// boundary nodes carry the zero-Dirichlet truncation and are never stored.
struct Grid1D {
  double radius = 0.0;
  int n_points = 0;  // total nodes including both boundary nodes
  double spacing = 0.0;

  Grid1D() = default;
  Grid1D(double radius_in, int n_points_in);

  int n_interior() const { return n_points - 2; }
  // Coordinate of interior node j (j = 0 .. n_interior-1).
  double x(int j) const { return -radius + spacing * (j + 1); }
  std::vector<double> interior_nodes() const;

  bool same_as(const Grid1D& other) const {
    return n_points == other.n_points && radius == other.radius;
  }
};

// Checked constructor used by the public pipeline (rejects n_points < 8).
Grid1D build_grid(double radius, int n_points);

// Complex values at the interior nodes of a grid.
struct GridFunction {
  Grid1D grid;
  std::vector<std::complex<double>> values;

  GridFunction() = default;
  GridFunction(const Grid1D& g, std::vector<std::complex<double>> v);
};

// Trapezoid L2 inner product <f, g> = h * sum f_j conj(g_j); with the zero
// boundary values the end weights h/2 drop out, so the interior weight is
// uniformly h.
std::complex<double> inner_l2(const Grid1D& grid,
                              const std::vector<std::complex<double>>& f,
                              const std::vector<std::complex<double>>& g);
double norm_l2(const Grid1D& grid, const std::vector<std::complex<double>>& f);

}  // namespace specwave
