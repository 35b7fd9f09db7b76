#include "specwave/evolution.hpp"

#include <algorithm>
#include <cmath>

#include "specwave/errors.hpp"

namespace specwave {

Eigen::Vector2cd ModeData::initial_state(int xi, double weight) const {
  std::complex<double> v0 = xi < static_cast<int>(v0hat.size()) ? v0hat[xi] : 0.0;
  std::complex<double> v1 = xi < static_cast<int>(v1hat.size()) ? v1hat[xi] : 0.0;
  return {std::complex<double>(0.0, weight) * v0, v1};
}

int mode_step_count(double T, double weight, double sup_sqrt_a, double theta,
                    int min_steps) {
  double h = std::min(T / min_steps, theta / (weight * std::max(1.0, sup_sqrt_a)));
  return static_cast<int>(std::ceil(T / h));
}

ModeSystem make_mode_system(int xi, double weight, double abs_lambda, double T,
                            int n_steps, const std::function<double(double)>& a,
                            const std::function<double(double)>& q,
                            const std::function<std::complex<double>(double)>& f) {
  if (n_steps < 1) throw PreconditionError("make_mode_system: n_steps must be >= 1");
  ModeSystem sys;
  sys.xi = xi;
  sys.weight = weight;
  sys.abs_lambda = abs_lambda;
  sys.T = T;
  sys.n_steps = n_steps;
  const int m = 2 * n_steps + 1;
  sys.t_half.resize(m);
  sys.a_half.resize(m);
  sys.q_half.resize(m);
  sys.f_half.resize(m);
  const double h2 = T / (2.0 * n_steps);
  for (int i = 0; i < m; ++i) {
    double t = i * h2;
    sys.t_half[i] = t;
    sys.a_half[i] = a(t);
    sys.q_half[i] = q(t);
    sys.f_half[i] = f ? f(t) : std::complex<double>{0.0, 0.0};
  }
  return sys;
}

ModeSystem assemble_mode_system(const EigenSystem& E, int xi,
                                const CoefficientProfile& p, const ModeData& data,
                                int n_steps) {
  if (xi < 0 || xi >= E.size())
    throw PreconditionError("assemble_mode_system: mode index out of range");
  if (!p.a.purely_regular() || !p.q.purely_regular())
    throw PreconditionError(
        "assemble_mode_system: distributional profile must be mollified first");
  const double w = E.weight(xi);
  double sup_sqrt_a = std::sqrt(std::max(sup_abs(p.a, p.T), 0.0));
  if (n_steps <= 0) n_steps = mode_step_count(p.T, w, sup_sqrt_a);
  std::function<std::complex<double>(double)> f;
  if (data.has_forcing()) {
    std::complex<double> amp =
        xi < static_cast<int>(data.fhat_space.size()) ? data.fhat_space[xi] : 0.0;
    auto ft = data.f_time;
    f = [amp, ft](double t) { return amp * (ft ? ft(t) : 1.0); };
  }
  return make_mode_system(xi, w, E.abs_lambda(xi), p.T, n_steps,
                          [&p](double t) { return p.a(t); },
                          [&p](double t) { return p.q(t); }, f);
}

ModeTrace integrate_mode(const ModeSystem& sys, const Eigen::Vector2cd& V0) {
  const int n = sys.n_steps;
  const double h = sys.T / n;
  const std::complex<double> iw(0.0, sys.weight);
  const std::complex<double> iw_inv(0.0, 1.0 / sys.weight);

  auto rhs = [&](int half_idx, const Eigen::Vector2cd& V) -> Eigen::Vector2cd {
    const double a = sys.a_half[half_idx];
    const double q = sys.q_half[half_idx];
    Eigen::Vector2cd out;
    out(0) = iw * V(1);
    out(1) = iw * (a * V(0)) + iw_inv * ((q - a) * V(0)) + sys.f_half[half_idx];
    return out;
  };

  constexpr double kBlowup = 1e12;
  ModeTrace trace;
  trace.t.reserve(n + 1);
  trace.states.reserve(n + 1);
  trace.t.push_back(0.0);
  trace.states.push_back(V0);

  Eigen::Vector2cd V = V0;
  for (int j = 0; j < n; ++j) {
    const int i0 = 2 * j;
    Eigen::Vector2cd k1 = rhs(i0, V);
    Eigen::Vector2cd k2 = rhs(i0 + 1, V + (h / 2) * k1);
    Eigen::Vector2cd k3 = rhs(i0 + 1, V + (h / 2) * k2);
    Eigen::Vector2cd k4 = rhs(i0 + 2, V + h * k3);
    V = V + (h / 6) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    double m = std::max(std::abs(V(0)), std::abs(V(1)));
    if (!std::isfinite(m) || m > kBlowup) {
      trace.blew_up = true;
      trace.blowup_step = j;
      return trace;
    }
    trace.t.push_back(sys.t_half[i0 + 2]);
    trace.states.push_back(V);
  }
  return trace;
}

std::pair<std::complex<double>, std::complex<double>> closed_form_oracle(
    double abs_lambda, double a_const, double q_const, std::complex<double> v0,
    std::complex<double> v1, double t) {
  const double om2 = abs_lambda * a_const + q_const;
  if (om2 > 0.0) {
    const double om = std::sqrt(om2);
    return {v0 * std::cos(om * t) + v1 * std::sin(om * t) / om,
            -v0 * om * std::sin(om * t) + v1 * std::cos(om * t)};
  }
  if (om2 == 0.0) return {v0 + v1 * t, v1};
  const double mu = std::sqrt(-om2);
  return {v0 * std::cosh(mu * t) + v1 * std::sinh(mu * t) / mu,
          v0 * mu * std::sinh(mu * t) + v1 * std::cosh(mu * t)};
}

std::vector<double> energy_trace(ModeTrace& trace, const ModeSystem& sys,
                                 EnergyKind kind, double eps) {
  const int m = static_cast<int>(trace.states.size());
  std::vector<double> E(m);
  for (int j = 0; j < m; ++j) {
    const double a = sys.a_at_step(j);
    const double v1 = std::norm(trace.states[j](0));
    const double v2 = std::norm(trace.states[j](1));
    switch (kind) {
      case EnergyKind::SymmetriserS: E[j] = a * v1 + v2; break;
      case EnergyKind::QuasiSymmetriserP: E[j] = (a + eps * eps) * v1 + v2; break;
      case EnergyKind::Case2W:
        throw PreconditionError("energy_trace: Case2W energies come from case2_transform");
    }
  }
  trace.energy = E;
  trace.energy_kind = kind;
  trace.energy_eps = eps;
  return E;
}

Case2Constants case2_constants(const CoefficientProfile& p, const Mollifier& m,
                               double root_holder, double c0_forcing, double root_floor,
                               double lift) {
  if (!(root_floor > 0.0))
    throw PreconditionError("case2_constants: root floor must be positive");
  Case2Constants c;
  c.root_holder = root_holder;
  c.root_floor = root_floor;
  c.lift = lift;
  c.sup_a = sup_abs(p.a, p.T);
  c.sup_q = sup_abs(p.q, p.T);
  c.sup_sqrt_a = std::sqrt(std::max(c.sup_a, 0.0));
  c.int_abs_dpsi = m.int_abs_dpsi();
  c.c0_forcing = c0_forcing;
  // |d/dt lambda^eps| <= (root holder) I_psi' eps^{beta-1} =: c1' eps^{beta-1};
  // the det and H^{-1}dtH terms divide by the root floor.
  const double c1p = root_holder * c.int_abs_dpsi;
  c.c1 = c1p / (2.0 * root_floor);
  c.c2 = c.c1;
  // |a - (lambda^eps)^2| <= (root holder)(2 ||sqrt a|| + lift) eps^beta.
  c.c3 = root_holder * (2.0 * c.sup_sqrt_a + lift) / (2.0 * root_floor);
  c.c4 = (c.sup_a + c.sup_q) / (2.0 * root_floor);
  c.c5 = std::sqrt(2.0) * std::max(c.sup_sqrt_a + lift, 1.0);
  c.k0 = 2.0 * c.c1 + c.c2 + c.c3 + c.c4 + 2.0 * c.c0_forcing * c.c5;
  return c;
}

Case2Frame make_case2_frame(const CoefficientProfile& p, const Mollifier& m,
                            double eps, double s, double k,
                            const std::vector<double>& t_full, double lift) {
  Case2Frame frame;
  frame.eps = eps;
  frame.s = s;
  frame.k = k;
  frame.lift = lift;
  SmoothedRoot root = smooth_root(p, eps, t_full, m);
  frame.lambda_eps = root.values;
  for (auto& v : frame.lambda_eps) v += lift;
  double sup_ratio = 0.0;
  for (double lam : frame.lambda_eps) {
    if (!(lam > 0.0))
      throw NumericalError("make_case2_frame: singular H (lambda_eps <= 0)");
    sup_ratio = std::max(sup_ratio, std::sqrt(2.0) * std::max(1.0, lam) / (2.0 * lam));
  }
  const double lam0 = frame.lambda_eps.front();
  frame.b0 = sup_ratio * (2.0 * lam0) / (std::sqrt(2.0) * std::max(1.0, lam0));
  return frame;
}

Case2TransformResult case2_transform(const ModeTrace& trace, const Case2Frame& frame,
                                     double weight) {
  if (frame.lambda_eps.size() != trace.states.size())
    throw PreconditionError("case2_transform: frame grid does not match trace");
  Case2TransformResult res;
  const double rate = frame.k * std::pow(weight, 1.0 / frame.s);
  res.W.resize(trace.states.size());
  double prev = -1.0;
  for (size_t j = 0; j < trace.states.size(); ++j) {
    const double lam = frame.lambda_eps[j];
    const double f = std::exp(-rate * trace.t[j]);
    // (det H) H^{-1} = [[lambda, -1], [lambda, 1]]
    const auto& V = trace.states[j];
    res.W[j](0) = f * (lam * V(0) - V(1));
    res.W[j](1) = f * (lam * V(0) + V(1));
    const double mag2 = std::norm(res.W[j](0)) + std::norm(res.W[j](1));
    if (j > 0 && prev > 0.0)
      res.max_step_increase = std::max(res.max_step_increase, (mag2 - prev) / prev);
    prev = mag2;
  }
  return res;
}

}  // namespace specwave
