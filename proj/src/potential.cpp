#include "specwave/potential.hpp"

#include <cmath>

#include "specwave/errors.hpp"

namespace specwave {

ComplexPotential ComplexPotential::preset(const std::string& name) {
  ComplexPotential p;
  if (name == "harmonic") {
    p.re_ = Expression::parse("x^2", "x");
    p.has_im_ = false;
  } else if (name == "harmonic_complex") {
    p.re_ = Expression::parse("x^2", "x");
    p.im_ = Expression::parse("x*exp(-x^2)", "x");
    p.has_im_ = true;
  } else {
    throw PreconditionError("unknown potential preset '" + name +
                            "' (valid: harmonic, harmonic_complex)");
  }
  p.tag_ = name;
  return p;
}

ComplexPotential ComplexPotential::custom(const std::string& re_expr,
                                          const std::string& im_expr,
                                          double core_radius) {
  ComplexPotential p;
  p.re_ = Expression::parse(re_expr, "x");
  if (!im_expr.empty()) {
    p.im_ = Expression::parse(im_expr, "x");
    p.has_im_ = true;
  }
  p.core_radius_ = core_radius;
  return p;
}

std::complex<double> ComplexPotential::operator()(double x) const {
  double re = re_(x);
  double im = has_im_ ? im_(x) : 0.0;
  return {re, im};
}

std::vector<std::complex<double>> ComplexPotential::sample(const Grid1D& grid) const {
  std::vector<std::complex<double>> v(grid.n_interior());
  for (int j = 0; j < grid.n_interior(); ++j) {
    v[j] = (*this)(grid.x(j));
    if (!std::isfinite(v[j].real()) || !std::isfinite(v[j].imag()))
      throw NumericalError("potential is non-finite at x = " + std::to_string(grid.x(j)));
  }
  return v;
}

std::vector<std::string> ComplexPotential::validate(const Grid1D& grid) const {
  std::vector<std::string> issues;
  const int n = grid.n_interior();
  double worst_neg = 0.0;
  int neg_at = -1;
  for (int j = 0; j < n; ++j) {
    double re = re_(grid.x(j));
    if (re < worst_neg) {
      worst_neg = re;
      neg_at = j;
    }
  }
  if (neg_at >= 0)
    issues.push_back("Re(V) < 0 at x = " + std::to_string(grid.x(neg_at)) +
                     " (value " + std::to_string(worst_neg) + ")");

  // Growth proxy: outside the core radius Re(V) must be nondecreasing in |x|.
  bool grow_ok = true;
  double bad_x = 0.0;
  for (int j = 0; j + 1 < n && grow_ok; ++j) {
    double x0 = grid.x(j), x1 = grid.x(j + 1);
    if (x1 <= -core_radius_ && re_(x1) > re_(x0) + 1e-12 * (1 + std::abs(re_(x0)))) {
      grow_ok = false;  // moving inward on the left branch, Re(V) must not grow
      bad_x = x1;
    }
    if (x0 >= core_radius_ && re_(x1) < re_(x0) - 1e-12 * (1 + std::abs(re_(x0)))) {
      grow_ok = false;
      bad_x = x0;
    }
  }
  if (!grow_ok)
    issues.push_back("Re(V) not nondecreasing in |x| outside core radius near x = " +
                     std::to_string(bad_x));
  return issues;
}

}  // namespace specwave
