#include "specwave/profile.hpp"

#include <algorithm>
#include <cmath>

#include "specwave/errors.hpp"

namespace specwave {

DistributionalAtom DistributionalAtom::dirac(double t0, double amplitude) {
  DistributionalAtom a;
  a.kind = Kind::Dirac;
  a.t0 = t0;
  a.amplitude = amplitude;
  return a;
}

DistributionalAtom DistributionalAtom::dirac_prime(double t0, double amplitude) {
  DistributionalAtom a;
  a.kind = Kind::DiracPrime;
  a.t0 = t0;
  a.amplitude = amplitude;
  return a;
}

DistributionalAtom DistributionalAtom::heaviside(double t0, double amplitude) {
  DistributionalAtom a;
  a.kind = Kind::Heaviside;
  a.t0 = t0;
  a.amplitude = amplitude;
  return a;
}

DistributionalAtom DistributionalAtom::regular(const std::string& expr_in_t,
                                               double amplitude) {
  DistributionalAtom a;
  a.kind = Kind::Regular;
  a.expr = Expression::parse(expr_in_t, "t");
  a.amplitude = amplitude;
  return a;
}

int DistributionalAtom::order() const {
  switch (kind) {
    case Kind::Dirac: return 1;
    case Kind::DiracPrime: return 2;
    case Kind::Heaviside:
    case Kind::Regular: return 0;
  }
  return 0;
}

SymbolicCoefficient SymbolicCoefficient::from_expression(const std::string& expr_in_t) {
  SymbolicCoefficient c;
  c.atoms.push_back(DistributionalAtom::regular(expr_in_t));
  return c;
}

SymbolicCoefficient SymbolicCoefficient::zero() { return SymbolicCoefficient{}; }

bool SymbolicCoefficient::purely_regular() const {
  return std::all_of(atoms.begin(), atoms.end(),
                     [](const DistributionalAtom& a) { return a.is_regular(); });
}

double SymbolicCoefficient::operator()(double t) const {
  double v = 0.0;
  for (const auto& atom : atoms) {
    if (!atom.is_regular())
      throw PreconditionError(
          "coefficient contains a distributional atom and must be mollified "
          "before pointwise evaluation");
    v += atom.amplitude * atom.expr(t);
  }
  return v;
}

std::string tag_name(RegularityTag tag) {
  switch (tag) {
    case RegularityTag::Linf1: return "linf1";
    case RegularityTag::HolderNondeg: return "holder_nondeg";
    case RegularityTag::Smooth: return "smooth";
    case RegularityTag::HolderDeg: return "holder_deg";
    case RegularityTag::Distributional: return "distributional";
  }
  return "?";
}

void CoefficientProfile::validate(int n_samples) const {
  if (!(T > 0.0)) throw PreconditionError("profile: time horizon T must be positive");
  if (tag == RegularityTag::Distributional) return;  // nothing samplable to check
  if (!a.purely_regular() || !q.purely_regular())
    throw PreconditionError("profile: non-distributional tag but atoms present");

  double amin = 1e300;
  for (int i = 0; i < n_samples; ++i) {
    double t = T * i / (n_samples - 1);
    amin = std::min(amin, a(t));
  }
  switch (tag) {
    case RegularityTag::Linf1:
    case RegularityTag::HolderNondeg:
      if (!(a0 > 0.0))
        throw PreconditionError("profile: nondegenerate tag requires a0 > 0");
      if (amin < a0)
        throw PreconditionError("profile: sampled min of a (" + std::to_string(amin) +
                                ") dips below declared a0 = " + std::to_string(a0));
      break;
    case RegularityTag::Smooth:
    case RegularityTag::HolderDeg:
      if (amin < -1e-12)
        throw PreconditionError("profile: degenerate tag requires a >= 0, sampled min " +
                                std::to_string(amin));
      break;
    default: break;
  }
  if (tag == RegularityTag::HolderNondeg && !(alpha > 0.0 && alpha < 1.0))
    throw PreconditionError("profile: HolderNondeg requires 0 < alpha < 1");
  if (tag == RegularityTag::HolderDeg && !(alpha > 0.0 && alpha < 2.0))
    throw PreconditionError("profile: HolderDeg requires 0 < alpha < 2");
  if (tag == RegularityTag::Smooth && l < 2)
    throw PreconditionError("profile: Smooth requires l >= 2");
}

SampledProfile sample_profile(const CoefficientProfile& p,
                              const std::vector<double>& t_grid) {
  if (!p.a.purely_regular() || !p.q.purely_regular())
    throw PreconditionError(
        "sample_profile: distributional profile, mollify before sampling");
  SampledProfile out;
  out.t = t_grid;
  out.a.resize(t_grid.size());
  out.q.resize(t_grid.size());
  for (size_t i = 0; i < t_grid.size(); ++i) {
    out.a[i] = p.a(t_grid[i]);
    out.q[i] = p.q(t_grid[i]);
  }
  return out;
}

namespace {

double dyadic_pair_max(const std::vector<double>& t, const std::vector<double>& y,
                       double order) {
  const int n = static_cast<int>(t.size());
  double best = 0.0;
  for (int sep = 1; sep < n; sep *= 2) {
    for (int i = 0; i + sep < n; ++i) {
      double dt = t[i + sep] - t[i];
      if (dt <= 0) continue;
      best = std::max(best, std::abs(y[i + sep] - y[i]) / std::pow(dt, order));
    }
  }
  return best;
}

}  // namespace

double holder_constant(const SymbolicCoefficient& c, double alpha, double T,
                       int n_samples) {
  if (!(alpha > 0.0 && alpha < 2.0))
    throw PreconditionError("holder_constant: need 0 < alpha < 2");
  if (n_samples < 3 || !(T > 0.0))
    throw PreconditionError("holder_constant: degenerate grid");
  std::vector<double> t(n_samples), y(n_samples);
  for (int i = 0; i < n_samples; ++i) {
    t[i] = T * i / (n_samples - 1);
    y[i] = c(t[i]);
  }
  if (alpha <= 1.0) return dyadic_pair_max(t, y, alpha);
  // alpha in (1, 2): Hoelder quotient of the finite-difference derivative.
  std::vector<double> td(n_samples - 1), yd(n_samples - 1);
  for (int i = 0; i + 1 < n_samples; ++i) {
    td[i] = 0.5 * (t[i] + t[i + 1]);
    yd[i] = (y[i + 1] - y[i]) / (t[i + 1] - t[i]);
  }
  return dyadic_pair_max(td, yd, alpha - 1.0);
}

double holder_constant(const CoefficientProfile& p, double alpha, int n_samples) {
  if (!p.a.purely_regular())
    throw PreconditionError("holder_constant: distributional profile");
  return holder_constant(p.a, alpha, p.T, n_samples);
}

double sup_abs(const SymbolicCoefficient& c, double T, int n_samples) {
  double m = 0.0;
  for (int i = 0; i < n_samples; ++i) m = std::max(m, std::abs(c(T * i / (n_samples - 1))));
  return m;
}

double inf_value(const SymbolicCoefficient& c, double T, int n_samples) {
  double m = 1e300;
  for (int i = 0; i < n_samples; ++i) m = std::min(m, c(T * i / (n_samples - 1)));
  return m;
}

double sup_abs_derivative(const SymbolicCoefficient& c, int k, double T, int n_samples) {
  if (k == 0) return sup_abs(c, T, n_samples);
  std::vector<double> y(n_samples);
  for (int i = 0; i < n_samples; ++i) y[i] = c(T * i / (n_samples - 1));
  const double h = T / (n_samples - 1);
  for (int d = 0; d < k; ++d) {
    std::vector<double> yd(y.size() - 1);
    for (size_t i = 0; i + 1 < y.size(); ++i) yd[i] = (y[i + 1] - y[i]) / h;
    y = std::move(yd);
  }
  double m = 0.0;
  for (double v : y) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace specwave
