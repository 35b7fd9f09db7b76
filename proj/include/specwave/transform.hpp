#pragma once

#include <complex>
#include <string>
#include <vector>

#include "specwave/operator.hpp"

namespace specwave {

// Coefficients of a grid function against the biorthogonal eigensystem:
//   fhat(xi)      = <f, v_xi>   (expansion in the u basis)
//   fhat_star(xi) = <f, u_xi>   (expansion in the v basis)
struct SpectralCoeffs {
  std::vector<std::complex<double>> fhat;
  std::vector<std::complex<double>> fhat_star;
  const EigenSystem* system = nullptr;
};

SpectralCoeffs forward(const GridFunction& f, const EigenSystem& E);
GridFunction inverse(const SpectralCoeffs& c, const EigenSystem& E);

// sum_xi fhat1(xi) * conj(fhat2_star(xi)); equals <f1, f2>_L2 on the
// resolved span.
std::complex<double> parseval_pairing(const SpectralCoeffs& c, const SpectralCoeffs& d);

struct NormReport {
  enum class Kind { L2, Sobolev, Gevrey };
  Kind kind = Kind::L2;
  double s = 0.0;
  double gevrey_A = 0.0;
  double value = 0.0;
  double tail = 0.0;          // contribution of the last retained mode
  double imag_residue = 0.0;  // Sobolev only: |Im sum| / |sum|
  int truncation = 0;
  bool infinite = false;      // Gevrey overflow flag
  int overflow_mode = -1;

  std::string kind_name() const;
};

// (sum <xi>^{2s} fhat conj(fhat_star))^{1/2}, real part taken; the relative
// imaginary residue is recorded. Throws when the real part is negative
// beyond tolerance (broken pairing).
NormReport sobolev_norm(const SpectralCoeffs& c, double s);

// (sum e^{2A <xi>^{1/s}} |fhat|^2)^{1/2} with overflow guard.
NormReport gevrey_norm(const SpectralCoeffs& c, double s, double A);

// Least-squares slope of -log|fhat| against <xi>^{1/s} over the top half of
// the resolved modes; the supremal admissible Gevrey constant A.
double gevrey_radius_fit(const SpectralCoeffs& c, double s);

}  // namespace specwave
