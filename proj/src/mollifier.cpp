#include "specwave/mollifier.hpp"

#include <algorithm>
#include <cmath>

#include "specwave/errors.hpp"

namespace specwave {

ScaleRule ScaleRule::identity() { return ScaleRule{}; }

ScaleRule ScaleRule::log_rule(double L, double C) {
  if (!(L > 0.0) || !(C > 0.0))
    throw PreconditionError("ScaleRule: log rule needs L > 0 and C > 0");
  ScaleRule r;
  r.kind = Kind::Log;
  r.L = L;
  r.C = C;
  return r;
}

double ScaleRule::operator()(double eps) const {
  if (!(eps > 0.0 && eps <= 1.0))
    throw PreconditionError("ScaleRule: eps must lie in (0, 1]");
  if (kind == Kind::Identity) return eps;
  // omega(eps) = (log(eps^{-L/C}))^{-1/L} = ((L/C) log(1/eps))^{-1/L}
  double arg = (L / C) * std::log(1.0 / eps);
  if (!(arg > 0.0))
    throw PreconditionError("ScaleRule: log rule undefined at eps = 1");
  return std::pow(arg, -1.0 / L);
}

std::string ScaleRule::name() const {
  return kind == Kind::Identity ? "identity" : "log";
}

namespace {
double bump_raw(double x) {
  if (x <= 0.0 || x >= 1.0) return 0.0;
  return std::exp(-1.0 / (x * (1.0 - x)));
}
}  // namespace

Mollifier::Mollifier(int n_quad, ScaleRule rule) : n_quad_(n_quad), rule_(rule) {
  if (n_quad_ < 64) throw PreconditionError("Mollifier: n_quad too small");
  nodes_.resize(n_quad_);
  psi_at_nodes_.resize(n_quad_);
  double mass = 0.0;
  for (int i = 0; i < n_quad_; ++i) {
    nodes_[i] = (i + 0.5) / n_quad_;
    psi_at_nodes_[i] = bump_raw(nodes_[i]);
    mass += psi_at_nodes_[i];
  }
  mass /= n_quad_;
  kappa_ = 1.0 / mass;
  double check = 0.0;
  for (int i = 0; i < n_quad_; ++i) {
    psi_at_nodes_[i] *= kappa_;
    check += psi_at_nodes_[i];
  }
  mass_error_ = std::abs(check / n_quad_ - 1.0);
  psi_max_ = kappa_ * std::exp(-4.0);  // attained at x = 1/2
  cumulative_.resize(n_quad_ + 1);
  cumulative_[0] = 0.0;
  for (int i = 0; i < n_quad_; ++i)
    cumulative_[i + 1] = cumulative_[i] + psi_at_nodes_[i] / n_quad_;
}

double Mollifier::psi(double x) const { return kappa_ * bump_raw(x); }

double Mollifier::dpsi(double x) const {
  if (x <= 0.0 || x >= 1.0) return 0.0;
  double u = x * (1.0 - x);
  double up = 1.0 - 2.0 * x;
  return psi(x) * up / (u * u);
}

double Mollifier::ddpsi(double x) const {
  if (x <= 0.0 || x >= 1.0) return 0.0;
  double u = x * (1.0 - x);
  double up = 1.0 - 2.0 * x;
  double g1 = up / (u * u);                          // (d/dx)(-1/u)
  double g2 = (-2.0 * u - 2.0 * up * up) / (u * u * u);
  return psi(x) * (g2 + g1 * g1);
}

double Mollifier::psi_cumulative(double y) const {
  if (y <= 0.0) return 0.0;
  if (y >= 1.0) return cumulative_.back();
  double pos = y * n_quad_;
  int i = std::min(static_cast<int>(pos), n_quad_ - 1);
  double frac = pos - i;
  return cumulative_[i] + frac * (cumulative_[i + 1] - cumulative_[i]);
}

double Mollifier::convolve(const std::function<double(double)>& f, double t,
                           double width) const {
  double acc = 0.0;
  for (int i = 0; i < n_quad_; ++i) acc += f(t - width * nodes_[i]) * psi_at_nodes_[i];
  return acc / n_quad_;
}

double Mollifier::convolve_dpsi(const std::function<double(double)>& f, double t,
                                double width) const {
  double acc = 0.0;
  for (int i = 0; i < n_quad_; ++i) acc += f(t - width * nodes_[i]) * dpsi(nodes_[i]);
  return acc / n_quad_ / width;
}

SmoothedRoot smooth_root(const CoefficientProfile& p, double eps,
                         const std::vector<double>& t_grid, const Mollifier& m) {
  if (!(eps > 0.0 && eps <= 1.0))
    throw PreconditionError("smooth_root: eps must lie in (0, 1]");
  if (!p.a.purely_regular())
    throw PreconditionError("smooth_root: a must be samplable (mollify first)");
  const double T = p.T;
  auto sqrt_a = [&](double t) {
    double tc = std::clamp(t, 0.0, T);  // edge-value extension
    double av = p.a(tc);
    if (av < 0.0)
      throw PreconditionError("smooth_root: negative a sample at t = " + std::to_string(tc));
    return std::sqrt(av);
  };
  SmoothedRoot r;
  r.eps = eps;
  r.t = t_grid;
  r.values.resize(t_grid.size());
  r.derivatives.resize(t_grid.size());
  for (size_t i = 0; i < t_grid.size(); ++i) {
    r.values[i] = m.convolve(sqrt_a, t_grid[i], eps);
    r.derivatives[i] = m.convolve_dpsi(sqrt_a, t_grid[i], eps);
  }
  return r;
}

MollifiedCoefficient::MollifiedCoefficient(SymbolicCoefficient c, double width,
                                           double T, std::shared_ptr<const Mollifier> m)
    : coef_(std::move(c)), width_(width), T_(T), moll_(std::move(m)) {
  if (!(width > 0.0)) throw PreconditionError("MollifiedCoefficient: width must be > 0");
  if (!moll_) throw PreconditionError("MollifiedCoefficient: null mollifier");
}

double MollifiedCoefficient::operator()(double t) const {
  double v = 0.0;
  const double w = width_;
  for (const auto& atom : coef_.atoms) {
    switch (atom.kind) {
      case DistributionalAtom::Kind::Dirac:
        v += atom.amplitude * moll_->psi((t - atom.t0) / w) / w;
        break;
      case DistributionalAtom::Kind::DiracPrime:
        v += atom.amplitude * moll_->dpsi((t - atom.t0) / w) / (w * w);
        break;
      case DistributionalAtom::Kind::Heaviside:
        v += atom.amplitude * moll_->psi_cumulative((t - atom.t0) / w);
        break;
      case DistributionalAtom::Kind::Regular: {
        auto f = [&](double tau) { return atom.expr(std::clamp(tau, 0.0, T_)); };
        v += atom.amplitude * moll_->convolve(f, t, w);
        break;
      }
    }
  }
  return v;
}

double MollifiedCoefficient::derivative(double t) const {
  double v = 0.0;
  const double w = width_;
  for (const auto& atom : coef_.atoms) {
    switch (atom.kind) {
      case DistributionalAtom::Kind::Dirac:
        v += atom.amplitude * moll_->dpsi((t - atom.t0) / w) / (w * w);
        break;
      case DistributionalAtom::Kind::DiracPrime:
        v += atom.amplitude * moll_->ddpsi((t - atom.t0) / w) / (w * w * w);
        break;
      case DistributionalAtom::Kind::Heaviside:
        v += atom.amplitude * moll_->psi((t - atom.t0) / w) / w;
        break;
      case DistributionalAtom::Kind::Regular: {
        auto f = [&](double tau) { return atom.expr(std::clamp(tau, 0.0, T_)); };
        v += atom.amplitude * moll_->convolve_dpsi(f, t, w);
        break;
      }
    }
  }
  return v;
}

std::vector<double> MollifiedCoefficient::sample(const std::vector<double>& t_grid) const {
  std::vector<double> out(t_grid.size());
  for (size_t i = 0; i < t_grid.size(); ++i) out[i] = (*this)(t_grid[i]);
  return out;
}

double MollifiedCoefficient::sup_derivative(int k, int n_coarse, int n_local) const {
  if (k != 0 && k != 1)
    throw PreconditionError("MollifiedCoefficient::sup_derivative: k must be 0 or 1");
  std::vector<double> ts;
  ts.reserve(n_coarse + coef_.atoms.size() * n_local);
  for (int i = 0; i < n_coarse; ++i) ts.push_back(T_ * i / (n_coarse - 1));
  // The mollified bump of an atom lives on [t0, t0 + width]; refine there.
  for (const auto& atom : coef_.atoms) {
    if (atom.is_regular()) continue;
    for (int i = 0; i < n_local; ++i) {
      double t = atom.t0 + width_ * i / (n_local - 1);
      if (t >= 0.0 && t <= T_) ts.push_back(t);
    }
  }
  double m = 0.0;
  for (double t : ts)
    m = std::max(m, std::abs(k == 0 ? (*this)(t) : derivative(t)));
  return m;
}

CoefficientNet mollify_net(const CoefficientProfile& p, const Mollifier& m,
                           const std::vector<double>& eps_list) {
  if (eps_list.empty()) throw PreconditionError("mollify_net: empty eps list");
  CoefficientNet net;
  net.eps_list = eps_list;
  auto shared = std::make_shared<const Mollifier>(m);
  for (double eps : eps_list) {
    double w = m.rule()(eps);
    net.widths.push_back(w);
    net.a_eps.emplace_back(p.a, w, p.T, shared);
    net.q_eps.emplace_back(p.q, w, p.T, shared);
  }
  return net;
}

std::vector<double> geometric_eps(double base, int k_from, int k_to) {
  if (k_from <= k_to)
    throw PreconditionError("geometric_eps: expect k_from > k_to (eps decreasing)");
  std::vector<double> out;
  for (int k = k_from; k >= k_to; --k) out.push_back(std::pow(base, k));
  return out;
}

}  // namespace specwave
