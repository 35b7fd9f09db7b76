#include "specwave/transform.hpp"

#include <cmath>
#include <limits>

#include "specwave/errors.hpp"
#include "specwave/slope_fit.hpp"

namespace specwave {

SpectralCoeffs forward(const GridFunction& f, const EigenSystem& E) {
  if (!f.grid.same_as(E.grid))
    throw PreconditionError("forward: grid mismatch between function and eigensystem");
  SpectralCoeffs c;
  c.system = &E;
  const int M = E.size();
  c.fhat.resize(M);
  c.fhat_star.resize(M);
  for (int k = 0; k < M; ++k) {
    c.fhat[k] = inner_l2(f.grid, f.values, E.modes[k].v);
    c.fhat_star[k] = inner_l2(f.grid, f.values, E.modes[k].u);
  }
  return c;
}

GridFunction inverse(const SpectralCoeffs& c, const EigenSystem& E) {
  if (static_cast<int>(c.fhat.size()) != E.size())
    throw PreconditionError("inverse: coefficient length does not match eigensystem");
  std::vector<std::complex<double>> vals(E.grid.n_interior(), {0.0, 0.0});
  for (int k = 0; k < E.size(); ++k) {
    const auto& u = E.modes[k].u;
    for (size_t j = 0; j < vals.size(); ++j) vals[j] += c.fhat[k] * u[j];
  }
  return GridFunction(E.grid, std::move(vals));
}

std::complex<double> parseval_pairing(const SpectralCoeffs& c, const SpectralCoeffs& d) {
  if (c.system != d.system)
    throw PreconditionError("parseval_pairing: coefficients from different eigensystems");
  if (c.fhat.size() != d.fhat_star.size())
    throw PreconditionError("parseval_pairing: length mismatch");
  std::complex<double> acc{0.0, 0.0};
  for (size_t k = 0; k < c.fhat.size(); ++k) acc += c.fhat[k] * std::conj(d.fhat_star[k]);
  return acc;
}

std::string NormReport::kind_name() const {
  switch (kind) {
    case Kind::L2: return "l2";
    case Kind::Sobolev: return "sobolev";
    case Kind::Gevrey: return "gevrey";
  }
  return "?";
}

NormReport sobolev_norm(const SpectralCoeffs& c, double s) {
  if (!std::isfinite(s)) throw PreconditionError("sobolev_norm: s must be finite");
  if (c.system == nullptr) throw PreconditionError("sobolev_norm: detached coefficients");
  const EigenSystem& E = *c.system;
  std::complex<double> acc{0.0, 0.0};
  std::complex<double> last{0.0, 0.0};
  for (int k = 0; k < E.size(); ++k) {
    last = std::pow(E.weight(k), 2.0 * s) * c.fhat[k] * std::conj(c.fhat_star[k]);
    acc += last;
  }
  NormReport rep;
  rep.kind = NormReport::Kind::Sobolev;
  rep.s = s;
  rep.truncation = E.size();
  rep.tail = std::abs(last);
  double mag = std::abs(acc);
  rep.imag_residue = mag > 0 ? std::abs(acc.imag()) / mag : 0.0;
  constexpr double rel_tol = 1e-6;
  if (acc.real() < -rel_tol * mag)
    throw NumericalError("sobolev_norm: pairing sum has negative real part (" +
                         std::to_string(acc.real()) + "), biorthogonal pairing broken");
  rep.value = std::sqrt(std::max(acc.real(), 0.0));
  return rep;
}

NormReport gevrey_norm(const SpectralCoeffs& c, double s, double A) {
  if (!(s >= 1.0)) throw PreconditionError("gevrey_norm: s must be >= 1");
  if (!(A > 0.0)) throw PreconditionError("gevrey_norm: A must be > 0");
  if (c.system == nullptr) throw PreconditionError("gevrey_norm: detached coefficients");
  const EigenSystem& E = *c.system;

  NormReport rep;
  rep.kind = NormReport::Kind::Gevrey;
  rep.s = s;
  rep.gevrey_A = A;
  rep.truncation = E.size();

  // exp(709) is the edge of double range; anything above flags infinity.
  constexpr double kMaxExponent = 700.0;
  double acc = 0.0, last = 0.0;
  for (int k = 0; k < E.size(); ++k) {
    double expo = 2.0 * A * std::pow(E.weight(k), 1.0 / s);
    double mag2 = std::norm(c.fhat[k]);
    if (mag2 == 0.0) continue;
    if (expo + std::log(mag2) > kMaxExponent) {
      rep.infinite = true;
      rep.overflow_mode = k;
      rep.value = std::numeric_limits<double>::infinity();
      return rep;
    }
    last = std::exp(expo) * mag2;
    acc += last;
  }
  rep.tail = last;
  rep.value = std::sqrt(acc);
  return rep;
}

double gevrey_radius_fit(const SpectralCoeffs& c, double s) {
  if (c.system == nullptr) throw PreconditionError("gevrey_radius_fit: detached coefficients");
  const EigenSystem& E = *c.system;
  const int M = E.size();
  // Top half of the resolved modes only, to avoid low-mode bias.
  std::vector<double> xs, ys;
  for (int k = M / 2; k < M; ++k) {
    double mag = std::abs(c.fhat[k]);
    if (mag <= 0.0 || !std::isfinite(mag)) continue;
    xs.push_back(std::pow(E.weight(k), 1.0 / s));
    ys.push_back(-std::log(mag));
  }
  if (xs.size() < 5)
    throw PreconditionError("gevrey_radius_fit: fewer than 5 usable coefficients");
  return fit_line(xs, ys).slope;
}

}  // namespace specwave
