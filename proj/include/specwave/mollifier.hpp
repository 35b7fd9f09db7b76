#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "specwave/profile.hpp"

namespace specwave {

// Scale rule omega: eps -> mollification width.
struct ScaleRule {
  enum class Kind { Identity, Log };
  Kind kind = Kind::Identity;
  double L = 1.0;  // Log rule: omega(eps) = ((L/C) log(1/eps))^{-1/L}
  double C = 1.0;

  static ScaleRule identity();
  static ScaleRule log_rule(double L, double C);
  double operator()(double eps) const;
  std::string name() const;
};

// Fixed smooth bump psi(x) = kappa * exp(-1/(x(1-x))) on (0, 1), zero
// outside, kappa normalizing the mass to 1 by quadrature. All convolutions
// use the midpoint rule on the n_quad nodes; the bump's derivatives vanish
// to all orders at the endpoints so the rule converges super-algebraically
// for the smooth factors.
class Mollifier {
 public:
  explicit Mollifier(int n_quad = 4096, ScaleRule rule = ScaleRule::identity());

  double psi(double x) const;
  double dpsi(double x) const;
  double ddpsi(double x) const;
  // Cumulative mass int_0^y psi (clamped to [0, 1]).
  double psi_cumulative(double y) const;

  double psi_max() const { return psi_max_; }
  double int_abs_dpsi() const { return 2.0 * psi_max_; }  // psi is unimodal
  double mass_error() const { return mass_error_; }
  const ScaleRule& rule() const { return rule_; }
  int n_quad() const { return n_quad_; }

  // (f * psi_w)(t) = int_0^1 f(t - w x) psi(x) dx for a regular integrand.
  double convolve(const std::function<double(double)>& f, double t, double width) const;
  // Same against psi', divided by the width (the derivative of the above).
  double convolve_dpsi(const std::function<double(double)>& f, double t, double width) const;

 private:
  int n_quad_;
  ScaleRule rule_;
  double kappa_ = 1.0;
  double psi_max_ = 0.0;
  double mass_error_ = 0.0;
  std::vector<double> nodes_, psi_at_nodes_, cumulative_;
};

// Smoothed characteristic root lambda^eps(t) = (sqrt(a) * psi_eps)(t) with a
// extended beyond [0, T] by its edge values.
struct SmoothedRoot {
  double eps = 0.0;
  std::vector<double> t;
  std::vector<double> values;       // lambda^eps at t
  std::vector<double> derivatives;  // d/dt lambda^eps at t
};

SmoothedRoot smooth_root(const CoefficientProfile& p, double eps,
                         const std::vector<double>& t_grid, const Mollifier& m);

// Mollified coefficient family a_eps = a * psi_{omega(eps)}. Distributional
// atoms convolve in closed form; regular parts by quadrature with edge-value
// extension. Owns its inputs, so nets can outlive the profile they came from.
class MollifiedCoefficient {
 public:
  MollifiedCoefficient(SymbolicCoefficient c, double width, double T,
                       std::shared_ptr<const Mollifier> m);

  double operator()(double t) const;
  double derivative(double t) const;
  std::vector<double> sample(const std::vector<double>& t_grid) const;

  // Sup norm of the k-th derivative (k = 0 or 1) over [0, T], evaluated on a
  // coarse grid refined around every atom location so sub-grid bumps are not
  // missed.
  double sup_derivative(int k, int n_coarse = 801, int n_local = 513) const;

  double width() const { return width_; }

 private:
  SymbolicCoefficient coef_;
  double width_;
  double T_;
  std::shared_ptr<const Mollifier> moll_;
};

struct CoefficientNet {
  std::vector<double> eps_list;
  std::vector<double> widths;                  // omega(eps)
  std::vector<MollifiedCoefficient> a_eps;
  std::vector<MollifiedCoefficient> q_eps;
};

CoefficientNet mollify_net(const CoefficientProfile& p, const Mollifier& m,
                           const std::vector<double>& eps_list);

// Geometric grid base^{k_from} .. base^{k_to} (k_from < k_to, both negative
// exponents in the usual configs).
std::vector<double> geometric_eps(double base, int k_from, int k_to);

}  // namespace specwave
