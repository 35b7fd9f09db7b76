#include "specwave/veryweak.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "specwave/errors.hpp"
#include "specwave/slope_fit.hpp"

namespace specwave {

namespace {

constexpr double kZeroFloor = 1e-250;

// Trapezoid of |g|^2 over the trace's full grid.
double time_l2_sq(const std::vector<double>& t, const std::vector<double>& vals_sq) {
  double acc = 0.0;
  for (size_t j = 0; j + 1 < t.size(); ++j)
    acc += 0.5 * (vals_sq[j] + vals_sq[j + 1]) * (t[j + 1] - t[j]);
  return acc;
}

struct NetNorms {
  double v = 0.0, dv = 0.0;
  bool blew_up = false;
};

// Integrates all modes with coefficient callables and accumulates the two
// L2-in-time Sobolev norms.
NetNorms solve_family(const EigenSystem& E, const std::function<double(double)>& a_fn,
                      const std::function<double(double)>& q_fn, double sup_a,
                      const ModeData& data, double s, double T) {
  const int M = E.size();
  double sup_sqrt_a = std::sqrt(std::max(sup_a, 0.0));
  int n = 0;
  for (int xi = 0; xi < M; ++xi) n = std::max(n, mode_step_count(T, E.weight(xi), sup_sqrt_a));
  NetNorms out;
  double acc_v = 0.0, acc_dv = 0.0;
  for (int xi = 0; xi < M; ++xi) {
    Eigen::Vector2cd V0 = data.initial_state(xi, E.weight(xi));
    std::function<std::complex<double>(double)> f;
    if (data.has_forcing() && xi < static_cast<int>(data.fhat_space.size()) &&
        std::abs(data.fhat_space[xi]) > 0.0) {
      std::complex<double> amp = data.fhat_space[xi];
      auto ft = data.f_time;
      f = [amp, ft](double t) { return amp * (ft ? ft(t) : 1.0); };
    }
    if (V0.norm() == 0.0 && !f) continue;  // zero data, zero solution
    ModeSystem sys = make_mode_system(xi, E.weight(xi), E.abs_lambda(xi), T, n, a_fn,
                                      q_fn, f);
    ModeTrace tr = integrate_mode(sys, V0);
    if (tr.blew_up) {
      out.blew_up = true;
      continue;
    }
    const double w2s = std::pow(E.weight(xi), 2.0 * s);
    std::vector<double> v1_sq(tr.states.size()), v2_sq(tr.states.size());
    for (size_t j = 0; j < tr.states.size(); ++j) {
      v1_sq[j] = std::norm(tr.states[j](0));
      v2_sq[j] = std::norm(tr.states[j](1));
    }
    acc_v += w2s * time_l2_sq(tr.t, v1_sq);
    acc_dv += w2s * time_l2_sq(tr.t, v2_sq);
  }
  out.v = std::sqrt(acc_v);
  out.dv = std::sqrt(acc_dv);
  return out;
}

}  // namespace

SolutionNet solve_net(const EigenSystem& E, const CoefficientProfile& p,
                      const Mollifier& m, const ModeData& data, double s,
                      const std::vector<double>& eps_list) {
  if (eps_list.empty()) throw PreconditionError("solve_net: empty eps list");
  CoefficientNet net = mollify_net(p, m, eps_list);
  SolutionNet out;
  out.eps_list = eps_list;
  out.widths = net.widths;
  for (size_t i = 0; i < eps_list.size(); ++i) {
    const auto& a_eps = net.a_eps[i];
    const auto& q_eps = net.q_eps[i];
    double sup_a = a_eps.sup_derivative(0);
    NetNorms nn = solve_family(
        E, [&a_eps](double t) { return a_eps(t); },
        [&q_eps](double t) { return q_eps(t); }, sup_a, data, s, p.T);
    out.norm_v.push_back(nn.v);
    out.norm_dv.push_back(nn.dv);
    out.blew_up.push_back(nn.blew_up);
  }
  return out;
}

std::string NetClassification::kind_name() const {
  switch (kind) {
    case Kind::Moderate: return "moderate";
    case Kind::Negligible: return "negligible";
    case Kind::Indeterminate: return "indeterminate";
  }
  return "?";
}

NetClassification classify_net(const std::vector<double>& eps_list,
                               const std::vector<double>& norms, int q_max) {
  if (eps_list.size() != norms.size() || eps_list.size() < 5)
    throw PreconditionError("classify_net: need >= 5 matching points");
  NetClassification cls;

  double vmax = 0.0;
  for (double v : norms) vmax = std::max(vmax, v);
  if (vmax < kZeroFloor) {
    cls.kind = NetClassification::Kind::Negligible;
    cls.certified_q = q_max;
    cls.tail_slope = std::numeric_limits<double>::infinity();
    cls.note = "identically zero net";
    return cls;
  }

  LineFit full = fit_loglog(eps_list, norms);
  cls.slope = full.slope;
  cls.residual = full.residual_rms;

  // Tail = finer half of the grid (eps decreasing along the list).
  const size_t n = eps_list.size();
  const size_t half = n / 2;
  std::vector<double> te(eps_list.begin() + half, eps_list.end());
  std::vector<double> tn(norms.begin() + half, norms.end());
  bool tail_has_zero = std::any_of(tn.begin(), tn.end(),
                                   [](double v) { return v < kZeroFloor; });
  if (tail_has_zero) {
    // Decay ran below the floating-point floor: steeper than any
    // representable power of eps on this grid.
    cls.kind = NetClassification::Kind::Negligible;
    cls.certified_q = q_max;
    cls.tail_slope = std::numeric_limits<double>::infinity();
    cls.note = "tail underflow";
    return cls;
  }
  cls.tail_slope = fit_loglog(te, tn).slope;

  if (cls.tail_slope >= q_max) {
    cls.kind = NetClassification::Kind::Negligible;
    cls.certified_q = q_max;
    return cls;
  }
  constexpr double kResidualTol = 0.3;  // log-units
  if (cls.residual > kResidualTol) {
    cls.kind = NetClassification::Kind::Indeterminate;
    cls.note = "non-monotone beyond noise (fit residual " + std::to_string(cls.residual) + ")";
    return cls;
  }
  cls.kind = NetClassification::Kind::Moderate;
  cls.N = static_cast<int>(std::ceil(std::max(0.0, -cls.slope) - 1e-6));
  return cls;
}

std::string perturbation_name(PerturbationKind k) {
  switch (k) {
    case PerturbationKind::Identical: return "identical";
    case PerturbationKind::ExpNegligible: return "exp_negligible";
    case PerturbationKind::EpsModerate: return "eps_moderate";
  }
  return "?";
}

UniquenessReport uniqueness_experiment(const EigenSystem& E, const CoefficientProfile& p,
                                       const Mollifier& m, const ModeData& data, double s,
                                       const std::vector<double>& eps_list,
                                       PerturbationKind kind, int q_max) {
  UniquenessReport rep;
  rep.perturbation = kind;
  rep.eps_list = eps_list;

  // Coefficient perturbation delta_eps (constant in t): the L^inf_1
  // hypothesis net is its k = 0 sup norm; the derivative net is zero.
  auto delta_of = [kind](double eps) {
    switch (kind) {
      case PerturbationKind::Identical: return 0.0;
      case PerturbationKind::ExpNegligible: return std::exp(-1.0 / eps);
      case PerturbationKind::EpsModerate: return eps;
    }
    return 0.0;
  };
  std::vector<double> hyp(eps_list.size());
  for (size_t i = 0; i < eps_list.size(); ++i) hyp[i] = delta_of(eps_list[i]);
  rep.hypothesis_class = classify_net(eps_list, hyp, q_max);
  rep.hypothesis_ok =
      rep.hypothesis_class.kind == NetClassification::Kind::Negligible;
  if (!rep.hypothesis_ok) {
    rep.verdict = "hypothesis failure: perturbation net is " +
                  rep.hypothesis_class.kind_name() + ", not negligible";
    rep.pass = false;
    return rep;
  }

  // Difference system per eps: w'' + |lambda| a~ w + q w = -(a~ - a)|lambda| v.
  CoefficientNet net = mollify_net(p, m, eps_list);
  for (size_t i = 0; i < eps_list.size(); ++i) {
    const double delta = delta_of(eps_list[i]);
    const auto& a_eps = net.a_eps[i];
    const auto& q_eps = net.q_eps[i];
    double sup_a = a_eps.sup_derivative(0);
    double sup_sqrt_a = std::sqrt(std::max(sup_a, 0.0));
    int n = 0;
    for (int xi = 0; xi < E.size(); ++xi)
      n = std::max(n, mode_step_count(p.T, E.weight(xi), sup_sqrt_a));
    double acc = 0.0;
    for (int xi = 0; xi < E.size(); ++xi) {
      Eigen::Vector2cd V0 = data.initial_state(xi, E.weight(xi));
      if (V0.norm() == 0.0) continue;
      // Solve v on the doubled grid so its full nodes are the w grid's
      // half nodes.
      ModeSystem vsys = make_mode_system(
          xi, E.weight(xi), E.abs_lambda(xi), p.T, 2 * n,
          [&a_eps](double t) { return a_eps(t); },
          [&q_eps](double t) { return q_eps(t); }, nullptr);
      ModeTrace vtr = integrate_mode(vsys, V0);
      if (vtr.blew_up) continue;
      const double w = E.weight(xi);
      const double lam = E.abs_lambda(xi);
      std::vector<std::complex<double>> vhat_half(vtr.states.size());
      for (size_t j = 0; j < vtr.states.size(); ++j)
        vhat_half[j] = vtr.states[j](0) / std::complex<double>(0.0, w);

      ModeSystem wsys = make_mode_system(
          xi, w, lam, p.T, n,
          [&a_eps, delta](double t) { return a_eps(t) + delta; },
          [&q_eps](double t) { return q_eps(t); }, nullptr);
      wsys.f_half.resize(2 * n + 1);
      for (int j = 0; j <= 2 * n; ++j) wsys.f_half[j] = -delta * lam * vhat_half[j];
      ModeTrace wtr = integrate_mode(wsys, Eigen::Vector2cd::Zero());
      if (wtr.blew_up) continue;
      const double w2s = std::pow(w, 2.0 * s);
      std::vector<double> w1_sq(wtr.states.size());
      for (size_t j = 0; j < wtr.states.size(); ++j) w1_sq[j] = std::norm(wtr.states[j](0));
      acc += w2s * time_l2_sq(wtr.t, w1_sq);
    }
    rep.diff_norms.push_back(std::sqrt(acc));
  }
  rep.difference_class = classify_net(eps_list, rep.diff_norms, q_max);
  rep.pass = rep.difference_class.kind == NetClassification::Kind::Negligible;
  rep.verdict = rep.pass ? "negligible"
                         : "difference net " + rep.difference_class.kind_name();
  return rep;
}

ConsistencyReport consistency_experiment(const EigenSystem& E, const CoefficientProfile& p,
                                         const Mollifier& m, const ModeData& data, double s,
                                         const std::vector<double>& eps_list,
                                         double rel_tol) {
  if (p.tag != RegularityTag::Linf1)
    throw PreconditionError("consistency_experiment: profile must be Case-1 regular (Linf1)");
  p.validate();
  if (eps_list.size() < 5)
    throw PreconditionError("consistency_experiment: need >= 5 eps points");

  ConsistencyReport rep;
  rep.eps_list = eps_list;
  rep.rel_tol = rel_tol;

  const int M = E.size();
  double sup_a = sup_abs(p.a, p.T);
  double sup_sqrt_a = std::sqrt(std::max(sup_a, 0.0));
  int n = 0;
  for (int xi = 0; xi < M; ++xi) n = std::max(n, mode_step_count(p.T, E.weight(xi), sup_sqrt_a));

  // Classical (unmollified) solve, kept per mode for the differences.
  std::vector<ModeTrace> classical(M);
  std::vector<bool> active(M, false);
  double norm_acc = 0.0;
  for (int xi = 0; xi < M; ++xi) {
    Eigen::Vector2cd V0 = data.initial_state(xi, E.weight(xi));
    std::function<std::complex<double>(double)> f;
    if (data.has_forcing() && xi < static_cast<int>(data.fhat_space.size()) &&
        std::abs(data.fhat_space[xi]) > 0.0) {
      std::complex<double> amp = data.fhat_space[xi];
      auto ft = data.f_time;
      f = [amp, ft](double t) { return amp * (ft ? ft(t) : 1.0); };
    }
    if (V0.norm() == 0.0 && !f) continue;
    active[xi] = true;
    ModeSystem sys = make_mode_system(xi, E.weight(xi), E.abs_lambda(xi), p.T, n,
                                      [&p](double t) { return p.a(t); },
                                      [&p](double t) { return p.q(t); }, f);
    classical[xi] = integrate_mode(sys, V0);
    if (classical[xi].blew_up)
      throw NumericalError("consistency_experiment: classical solve blew up");
    const double w2s = std::pow(E.weight(xi), 2.0 * s);
    std::vector<double> v1_sq(classical[xi].states.size());
    for (size_t j = 0; j < v1_sq.size(); ++j) v1_sq[j] = std::norm(classical[xi].states[j](0));
    norm_acc += w2s * time_l2_sq(classical[xi].t, v1_sq);
  }
  rep.classical_norm = std::sqrt(norm_acc);

  CoefficientNet net = mollify_net(p, m, eps_list);
  for (size_t i = 0; i < eps_list.size(); ++i) {
    const auto& a_eps = net.a_eps[i];
    const auto& q_eps = net.q_eps[i];
    double acc = 0.0;
    for (int xi = 0; xi < M; ++xi) {
      if (!active[xi]) continue;
      Eigen::Vector2cd V0 = data.initial_state(xi, E.weight(xi));
      std::function<std::complex<double>(double)> f;
      if (data.has_forcing() && xi < static_cast<int>(data.fhat_space.size()) &&
          std::abs(data.fhat_space[xi]) > 0.0) {
        std::complex<double> amp = data.fhat_space[xi];
        auto ft = data.f_time;
        f = [amp, ft](double t) { return amp * (ft ? ft(t) : 1.0); };
      }
      // Edge-value mollification keeps sup a_eps <= sup a, so the classical
      // step grid is valid for the whole net.
      ModeSystem sys = make_mode_system(xi, E.weight(xi), E.abs_lambda(xi), p.T, n,
                                        [&a_eps](double t) { return a_eps(t); },
                                        [&q_eps](double t) { return q_eps(t); }, f);
      ModeTrace tr = integrate_mode(sys, V0);
      if (tr.blew_up) throw NumericalError("consistency_experiment: mollified solve blew up");
      const double w2s = std::pow(E.weight(xi), 2.0 * s);
      std::vector<double> d_sq(tr.states.size());
      for (size_t j = 0; j < tr.states.size(); ++j)
        d_sq[j] = std::norm(tr.states[j](0) - classical[xi].states[j](0));
      acc += w2s * time_l2_sq(tr.t, d_sq);
    }
    rep.diff_norms.push_back(std::sqrt(acc));
  }

  rep.fitted_order = fit_loglog(eps_list, rep.diff_norms).slope;
  const size_t nn = rep.diff_norms.size();
  rep.tail_decreasing = true;
  for (size_t i = nn - 4; i + 1 < nn; ++i)
    if (!(rep.diff_norms[i] > rep.diff_norms[i + 1])) rep.tail_decreasing = false;
  rep.final_rel = rep.diff_norms.back() / rep.classical_norm;
  rep.pass = rep.tail_decreasing && rep.final_rel <= rel_tol;
  return rep;
}

CalibratedScale calibrate_scale(const CoefficientProfile& p, const Mollifier& m,
                                double coarsest_eps) {
  CalibratedScale cal;
  for (const auto& atom : p.a.atoms) cal.L1 = std::max(cal.L1, atom.order());
  for (const auto& atom : p.q.atoms) cal.L2 = std::max(cal.L2, atom.order());
  cal.L = std::max(cal.L1 + 1, cal.L2);
  cal.coarsest_eps = coarsest_eps;

  // Case-1 Gronwall constant of the mollified problem at the coarsest eps,
  // normalized by the structure-bound powers of omega.
  const double w0 = coarsest_eps;  // identity rule at the calibration point
  MollifiedCoefficient a_eps(p.a, w0, p.T, std::make_shared<const Mollifier>(m));
  MollifiedCoefficient q_eps(p.q, w0, p.T, std::make_shared<const Mollifier>(m));
  const double sup_a = a_eps.sup_derivative(0);
  const double sup_da = a_eps.sup_derivative(1);
  const double sup_q = q_eps.sup_derivative(0);
  cal.cprime_coarsest = 1.0 + sup_da + 2.0 * sup_a + sup_q;
  const double denom = 1.0 + std::pow(w0, -(cal.L1 + 1.0)) + std::pow(w0, -cal.L1) +
                       std::pow(w0, -static_cast<double>(cal.L2));
  cal.c0_estimate = cal.cprime_coarsest / denom;
  cal.C = 4.0 * std::max(cal.c0_estimate * p.T, 1.0);
  return cal;
}

StructureSlopes coefficient_net_slopes(const SymbolicCoefficient& c, double T,
                                       const Mollifier& m,
                                       const std::vector<double>& eps_list) {
  auto shared = std::make_shared<const Mollifier>(m);
  std::vector<double> s0, s1;
  for (double eps : eps_list) {
    MollifiedCoefficient mc(c, eps, T, shared);  // omega(eps) = eps here
    s0.push_back(mc.sup_derivative(0));
    s1.push_back(mc.sup_derivative(1));
  }
  StructureSlopes out;
  out.slope_k0 = fit_loglog(eps_list, s0).slope;
  out.slope_k1 = fit_loglog(eps_list, s1).slope;
  return out;
}

}  // namespace specwave
