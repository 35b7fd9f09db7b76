#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "specwave/expression.hpp"
#include "specwave/grid.hpp"

namespace specwave {

// Complex multiplication potential V(x) = re(x) + i*im(x).
//
// Presets:
//   harmonic          V(x) = x^2
//   harmonic_complex  V(x) = x^2 + i*x*exp(-x^2)
// Custom potentials are given as expressions in x.
class ComplexPotential {
 public:
  static ComplexPotential preset(const std::string& name);
  static ComplexPotential custom(const std::string& re_expr,
                                 const std::string& im_expr,
                                 double core_radius = 1.0);

  std::complex<double> operator()(double x) const;
  std::vector<std::complex<double>> sample(const Grid1D& grid) const;

  // True when the imaginary part is not identically zero.
  bool is_complex() const { return has_im_; }
  const std::string& tag() const { return tag_; }
  double core_radius() const { return core_radius_; }

  // Confinement proxy check: Re(V) >= 0 at every interior node and
  // nondecreasing in |x| outside the core radius. Returns one message per
  // violated condition; empty means the check passed. Construction never
  // fails on a violating potential, this report is the contract.
  std::vector<std::string> validate(const Grid1D& grid) const;

 private:
  ComplexPotential() = default;
  Expression re_, im_;
  bool has_im_ = false;
  double core_radius_ = 1.0;
  std::string tag_ = "custom";
};

}  // namespace specwave
