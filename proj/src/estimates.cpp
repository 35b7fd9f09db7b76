#include "specwave/estimates.hpp"

#include <algorithm>
#include <cmath>

#include "specwave/errors.hpp"
#include "specwave/slope_fit.hpp"

namespace specwave {

double MarginBlock::min_value() const {
  double m = 1e300;
  for (double v : values) m = std::min(m, v);
  return values.empty() ? 1.0 : m;
}

void BoundReport::finalize() {
  pass = true;
  worst_margin = 1e300;
  for (const auto& b : blocks) {
    for (size_t i = 0; i < b.values.size(); ++i) {
      if (b.values[i] < worst_margin) {
        worst_margin = b.values[i];
        worst_mode = b.modes[i];
        worst_block = b.label;
      }
      if (b.values[i] < -tol_margin) pass = false;
    }
  }
  if (blocks.empty()) worst_margin = 0.0;
}

namespace {

// Relative margin of lhs <= rhs computed in log space; safe for rhs that
// would overflow as exp().
double log_margin(double log_lhs, double log_rhs) {
  return 1.0 - std::exp(log_lhs - log_rhs);
}

struct Sweep {
  std::vector<ModeSystem> systems;
  std::vector<ModeTrace> traces;
  std::vector<int> active;   // modes with nonzero initial data or forcing
  std::vector<int> skipped;
  int n_steps = 0;
};

// Integrates all modes on a common step grid (the finest mode's rule).
Sweep run_sweep(const EigenSystem& E, const CoefficientProfile& p, const ModeData& data,
                int n_steps_override) {
  Sweep sw;
  const int M = E.size();
  double sup_sqrt_a = std::sqrt(std::max(sup_abs(p.a, p.T), 0.0));
  int n = n_steps_override;
  if (n <= 0)
    for (int xi = 0; xi < M; ++xi)
      n = std::max(n, mode_step_count(p.T, E.weight(xi), sup_sqrt_a));
  sw.n_steps = n;
  sw.systems.reserve(M);
  sw.traces.reserve(M);
  for (int xi = 0; xi < M; ++xi) {
    sw.systems.push_back(assemble_mode_system(E, xi, p, data, n));
    Eigen::Vector2cd V0 = data.initial_state(xi, E.weight(xi));
    bool zero_data = V0.norm() == 0.0;
    bool zero_forcing = !data.has_forcing() ||
                        (xi < static_cast<int>(data.fhat_space.size()) &&
                         std::abs(data.fhat_space[xi]) == 0.0) ||
                        xi >= static_cast<int>(data.fhat_space.size());
    if (zero_data && zero_forcing) {
      sw.skipped.push_back(xi);
      ModeTrace tr;  // identically zero solution
      tr.t.assign(1, 0.0);
      tr.states.assign(1, Eigen::Vector2cd::Zero());
      sw.traces.push_back(std::move(tr));
      continue;
    }
    sw.active.push_back(xi);
    sw.traces.push_back(integrate_mode(sw.systems[xi], V0));
    if (sw.traces[xi].blew_up)
      throw NumericalError("mode " + std::to_string(xi) + " blew up during verification");
  }
  return sw;
}

double sup_time_profile(const std::function<double(double)>& f, double T, int n = 1001) {
  double m = 0.0;
  for (int i = 0; i < n; ++i) m = std::max(m, std::abs(f(T * i / (n - 1))));
  return m;
}

// Gevrey amplitude of the forcing: c0 with |fhat(t,xi)| <= c0 e^{-A <xi>^{1/s}}.
double forcing_amplitude(const EigenSystem& E, const ModeData& data, double s, double T) {
  if (!data.has_forcing()) return 0.0;
  double A = 0.0;
  try {
    A = std::max(0.0, gevrey_radius_fit_raw(
                          [&] {
                            std::vector<double> w(E.size());
                            for (int i = 0; i < E.size(); ++i) w[i] = E.weight(i);
                            return w;
                          }(),
                          data.fhat_space, std::max(s, 1.0)));
  } catch (const PreconditionError&) {
    A = 0.0;  // too few nonzero coefficients for a fit; fall back to A = 0
  }
  double sup_t = data.f_time ? sup_time_profile(data.f_time, T) : 1.0;
  double c0 = 0.0;
  for (int xi = 0; xi < E.size() && xi < static_cast<int>(data.fhat_space.size()); ++xi) {
    double mag = std::abs(data.fhat_space[xi]);
    if (mag == 0.0) continue;
    c0 = std::max(c0, mag * std::exp(A * std::pow(E.weight(xi), 1.0 / std::max(s, 1.0))));
  }
  return c0 * sup_t;
}

}  // namespace

double gevrey_radius_fit_raw(const std::vector<double>& weights,
                             const std::vector<std::complex<double>>& coeffs, double s) {
  const int M = static_cast<int>(std::min(weights.size(), coeffs.size()));
  std::vector<double> xs, ys;
  for (int k = M / 2; k < M; ++k) {
    double mag = std::abs(coeffs[k]);
    if (mag <= 0.0 || !std::isfinite(mag)) continue;
    xs.push_back(std::pow(weights[k], 1.0 / s));
    ys.push_back(-std::log(mag));
  }
  if (xs.size() < 5)
    throw PreconditionError("gevrey fit: fewer than 5 usable coefficients");
  return fit_line(xs, ys).slope;
}

ModeData make_gevrey_data(const EigenSystem& E, double A, double s) {
  ModeData d;
  const double expo = 1.0 / std::max(s, 1.0);
  d.v0hat.resize(E.size());
  d.v1hat.resize(E.size());
  for (int xi = 0; xi < E.size(); ++xi) {
    double decay = std::exp(-A * std::pow(E.weight(xi), expo));
    d.v0hat[xi] = decay;
    d.v1hat[xi] = 0.5 * decay;
  }
  return d;
}

// ---------------------------------------------------------------------------
// Case 1
// ---------------------------------------------------------------------------

BoundReport verify_case1(const EigenSystem& E, const CoefficientProfile& p,
                         const ModeData& data, double s, const CaseOptions& opts) {
  if (p.tag != RegularityTag::Linf1)
    throw PreconditionError("verify_case1: profile tag must be Linf1");
  p.validate();

  BoundReport rep;
  rep.case_id = 1;
  rep.tol_margin = opts.tol_margin;

  const double sup_a = sup_abs(p.a, p.T);
  const double sup_q = sup_abs(p.q, p.T);
  const double sup_da = sup_abs_derivative(p.a, 1, p.T);
  const double inf_a = inf_value(p.a, p.T);
  const double cprime = 1.0 + sup_da + 2.0 * sup_a + sup_q;
  const double csecond = 1.0 + sup_a;
  const double c0 = std::max(sup_a, 1.0);
  const double c1 = std::min(inf_a, 1.0);
  const double C = (c0 / c1) * std::exp(cprime * p.T) * std::max(1.0, csecond);
  rep.constants = {{"c_prime", cprime}, {"c_second", csecond}, {"c0", c0},
                   {"c1", c1},          {"C", C},              {"s", s}};

  Sweep sw = run_sweep(E, p, data, opts.n_steps);
  rep.skipped_modes = sw.skipped;
  const int M = E.size();
  const int nt = sw.n_steps + 1;

  // Data norms: ||v0||^2_{H^{1+s}} + ||v1||^2_{H^s} = sum <xi>^{2s} |V(0)|^2,
  // plus the forcing integral.
  double rhs_data = 0.0;
  std::vector<double> w2s(M);
  for (int xi = 0; xi < M; ++xi) {
    w2s[xi] = std::pow(E.weight(xi), 2.0 * s);
    rhs_data += w2s[xi] * data.initial_state(xi, E.weight(xi)).squaredNorm();
  }
  double rhs_forcing = 0.0;
  if (data.has_forcing()) {
    for (int xi : sw.active) {
      const auto& sys = sw.systems[xi];
      double acc = 0.0;
      const double h = sys.T / sys.n_steps;
      for (int j = 0; j <= sys.n_steps; ++j) {
        double term = std::norm(sys.f_half[2 * j]);
        acc += (j == 0 || j == sys.n_steps) ? 0.5 * term : term;
      }
      rhs_forcing += w2s[xi] * acc * h;
    }
  }
  const double RHS = C * (rhs_data + rhs_forcing);

  // Sobolev inequality at every sampled t.
  MarginBlock sob{"sobolev_estimate", {}, {}};
  for (int j = 0; j < nt; ++j) {
    double lhs = 0.0;
    for (int xi : sw.active) lhs += w2s[xi] * sw.traces[xi].states[j].squaredNorm();
    sob.modes.push_back(-1);
    sob.values.push_back((RHS - lhs) / RHS);
  }
  rep.blocks.push_back(std::move(sob));

  // Per-mode Gronwall bound with the same constant.
  MarginBlock gron{"mode_gronwall", {}, {}};
  for (int xi : sw.active) {
    double rhs_mode = data.initial_state(xi, E.weight(xi)).squaredNorm();
    if (data.has_forcing()) {
      const auto& sys = sw.systems[xi];
      const double h = sys.T / sys.n_steps;
      double acc = 0.0;
      for (int j = 0; j <= sys.n_steps; ++j) {
        double term = std::norm(sys.f_half[2 * j]);
        acc += (j == 0 || j == sys.n_steps) ? 0.5 * term : term;
      }
      rhs_mode += acc * h;
    }
    rhs_mode *= C;
    double lhs = 0.0;
    for (const auto& st : sw.traces[xi].states) lhs = std::max(lhs, st.squaredNorm());
    gron.modes.push_back(xi);
    gron.values.push_back((rhs_mode - lhs) / rhs_mode);
  }
  rep.blocks.push_back(std::move(gron));

  rep.finalize();
  return rep;
}

// ---------------------------------------------------------------------------
// Cases 2 and 4 share the root-frame machinery.
// ---------------------------------------------------------------------------

namespace {

struct RootCaseSetup {
  double beta;          // Hoelder order of the root
  double root_holder;   // Hoelder constant of the root
  double root_floor;    // uniform lower bound of the (lifted) root
  double lift;          // additive lift, 0 in the nondegenerate case
  double threshold;     // admissible s upper bound
};

void root_slope_checks(BoundReport& rep, const CoefficientProfile& p, const Mollifier& m,
                       double beta, const CaseOptions& opts) {
  // sup_t |lambda^eps - sqrt(a)| ~ eps^beta and sup_t |d/dt lambda^eps| ~
  // eps^{beta-1} on a log-log grid eps = 2^{-3} .. 2^{-10}.
  std::vector<double> eval(4001);
  for (size_t i = 0; i < eval.size(); ++i) eval[i] = p.T * i / (eval.size() - 1);
  std::vector<double> eps = geometric_eps(2.0, -3, -10);
  std::vector<double> sup_diff, sup_der;
  for (double e : eps) {
    SmoothedRoot r = smooth_root(p, e, eval, m);
    double d = 0.0, dd = 0.0;
    for (size_t i = 0; i < eval.size(); ++i) {
      d = std::max(d, std::abs(r.values[i] - std::sqrt(std::max(p.a(eval[i]), 0.0))));
      dd = std::max(dd, std::abs(r.derivatives[i]));
    }
    sup_diff.push_back(d);
    sup_der.push_back(dd);
  }
  double slope_diff = fit_loglog(eps, sup_diff).slope;
  double slope_der = fit_loglog(eps, sup_der).slope;
  rep.constants["root_slope_diff"] = slope_diff;
  rep.constants["root_slope_deriv"] = slope_der;
  MarginBlock blk{"root_slopes", {}, {}};
  blk.modes = {-1, -1};
  blk.values = {(opts.slope_tol - std::abs(slope_diff - beta)) / opts.slope_tol,
                (opts.slope_tol - std::abs(slope_der - (beta - 1.0))) / opts.slope_tol};
  rep.blocks.push_back(std::move(blk));
}

BoundReport verify_root_case(int case_id, const EigenSystem& E,
                             const CoefficientProfile& p, const ModeData& data, double s,
                             const CaseOptions& opts, const RootCaseSetup& setup) {
  BoundReport rep;
  rep.case_id = case_id;
  rep.tol_margin = opts.tol_margin;
  if (!(s >= 1.0 && s < setup.threshold))
    rep.scope_note = "outside theorem scope: s = " + std::to_string(s) +
                     ", admissible [1, " + std::to_string(setup.threshold) + ")";

  Mollifier moll(opts.mollifier_quad);
  // Data must actually be Gevrey-s: fitted decay constant above the floor.
  {
    std::vector<double> w(E.size());
    for (int i = 0; i < E.size(); ++i) w[i] = E.weight(i);
    double Afit = gevrey_radius_fit_raw(w, data.v0hat, std::max(s, 1.0));
    rep.constants["data_gevrey_A"] = Afit;
    if (Afit < opts.gevrey_floor)
      rep.scope_note += (rep.scope_note.empty() ? "" : "; ") +
                        std::string("data not Gevrey-certified (A = ") +
                        std::to_string(Afit) + ")";
  }

  const double c0f = forcing_amplitude(E, data, s, p.T);
  Sweep sw = run_sweep(E, p, data, opts.n_steps);
  rep.skipped_modes = sw.skipped;

  // Frames first: Case 4 needs the per-mode root floors before k is fixed.
  const int M = E.size();
  std::vector<Case2Frame> frames(M);
  std::vector<double> k0_per_mode(M, 0.0);
  for (int xi : sw.active) {
    double eps = 1.0 / E.weight(xi);
    double lift = setup.lift > 0.0 ? setup.lift * std::pow(eps, setup.beta) : 0.0;
    frames[xi] = make_case2_frame(p, moll, eps, s, 0.0, sw.traces[xi].t, lift);
    double floor = setup.root_floor;
    if (floor <= 0.0) {
      floor = 1e300;
      for (double v : frames[xi].lambda_eps) floor = std::min(floor, v);
    }
    frames[xi].constants = case2_constants(p, moll, setup.root_holder, c0f, floor, lift);
    k0_per_mode[xi] = frames[xi].constants.k0;
  }
  double k = 0.0;
  for (int xi : sw.active) k = std::max(k, k0_per_mode[xi]);
  rep.constants["k0"] = k;
  rep.constants["k"] = k;
  rep.envelope_rate = k;
  if (!sw.active.empty()) {
    const auto& c = frames[sw.active.front()].constants;
    rep.constants["c1"] = c.c1;
    rep.constants["c2"] = c.c2;
    rep.constants["c3"] = c.c3;
    rep.constants["c4"] = c.c4;
    rep.constants["c5"] = c.c5;
    rep.constants["c0_forcing"] = c.c0_forcing;
    rep.constants["holder"] = setup.root_holder;
  }
  rep.constants["threshold"] = setup.threshold;
  rep.constants["s"] = s;

  MarginBlock envelope{"envelope", {}, {}};
  MarginBlock mono{"w_monotonicity", {}, {}};
  std::vector<double> fit_x, fit_y;
  double b0_max = 0.0;
  for (int xi : sw.active) {
    frames[xi].k = k;
    const auto& tr = sw.traces[xi];
    const double w = E.weight(xi);
    double V0 = tr.states[0].norm();
    if (V0 == 0.0) continue;
    double supV = 0.0;
    for (const auto& st : tr.states) supV = std::max(supV, st.norm());
    double log_rhs = std::log(frames[xi].b0) + k * p.T * std::pow(w, 1.0 / s) + std::log(V0);
    envelope.modes.push_back(xi);
    envelope.values.push_back(log_margin(std::log(supV), log_rhs));
    b0_max = std::max(b0_max, frames[xi].b0);
    // Monotonicity of |W|^2 with k = k0 (> k0/2, the proof's requirement).
    auto res = case2_transform(tr, frames[xi], w);
    mono.modes.push_back(xi);
    mono.values.push_back((opts.mono_tol - res.max_step_increase) / opts.mono_tol);
    fit_x.push_back(std::pow(w, 1.0 / s));
    fit_y.push_back(std::log(supV / V0));
  }
  rep.constants["b0_max"] = b0_max;
  rep.blocks.push_back(std::move(envelope));
  if (case_id == 2) rep.blocks.push_back(std::move(mono));

  if (fit_x.size() >= 2) {
    rep.growth_fit = fit_line(fit_x, fit_y).slope;
    MarginBlock gf{"growth_fit", {-1}, {}};
    double cap = (1.0 + opts.growth_slack) * k;
    gf.values.push_back((cap - rep.growth_fit) / std::max(cap, 1e-300));
    rep.blocks.push_back(std::move(gf));
  }

  root_slope_checks(rep, p, moll, setup.beta, opts);
  rep.finalize();
  return rep;
}

}  // namespace

BoundReport verify_case2(const EigenSystem& E, const CoefficientProfile& p,
                         const ModeData& data, double s, const CaseOptions& opts) {
  if (p.tag != RegularityTag::HolderNondeg)
    throw PreconditionError("verify_case2: profile tag must be HolderNondeg");
  p.validate();
  RootCaseSetup setup;
  // a in C^alpha with a >= a0 > 0 transfers to the root: sqrt(a) is
  // C^alpha with constant ||a||_{C^alpha}/(2 sqrt(a0)).
  double Ma = holder_constant(p, p.alpha);
  setup.beta = p.alpha;
  setup.root_holder = Ma / (2.0 * std::sqrt(p.a0));
  setup.root_floor = std::sqrt(p.a0);
  setup.lift = 0.0;
  setup.threshold = 1.0 + p.alpha / (1.0 - p.alpha);
  BoundReport rep = verify_root_case(2, E, p, data, s, opts, setup);
  rep.constants["alpha"] = p.alpha;
  rep.constants["holder_a"] = Ma;
  return rep;
}

BoundReport verify_case4(const EigenSystem& E, const CoefficientProfile& p,
                         const ModeData& data, double s, const CaseOptions& opts) {
  if (p.tag != RegularityTag::HolderDeg)
    throw PreconditionError("verify_case4: profile tag must be HolderDeg");
  if (!(p.alpha > 0.0 && p.alpha < 2.0))
    throw PreconditionError("verify_case4: need 0 < alpha < 2");
  p.validate();
  RootCaseSetup setup;
  // Degenerate roots: sqrt(a) is Hoelder of order alpha/2; its constant is
  // estimated directly from samples of sqrt(a).
  setup.beta = p.alpha / 2.0;
  auto root = [&p](double t) { return std::sqrt(std::max(p.a(t), 0.0)); };
  {
    const int n = 2001;
    std::vector<double> tg(n), y(n);
    for (int i = 0; i < n; ++i) {
      tg[i] = p.T * i / (n - 1);
      y[i] = root(tg[i]);
    }
    double best = 0.0;
    for (int sep = 1; sep < n; sep *= 2)
      for (int i = 0; i + sep < n; ++i)
        best = std::max(best, std::abs(y[i + sep] - y[i]) /
                                  std::pow(tg[i + sep] - tg[i], setup.beta));
    setup.root_holder = best;
  }
  setup.root_floor = 0.0;            // per-mode floors from the lifted frames
  setup.lift = std::max(setup.root_holder, 1e-8);
  // Case-2 formula with alpha/2 gives 1 + (alpha/2)/(1 - alpha/2); the
  // theorem's threshold 1 + alpha/2 is the smaller of the two.
  setup.threshold = 1.0 + p.alpha / 2.0;
  BoundReport rep = verify_root_case(4, E, p, data, s, opts, setup);
  rep.constants["alpha"] = p.alpha;
  rep.constants["beta"] = setup.beta;
  rep.constants["lift"] = setup.lift;
  return rep;
}

// ---------------------------------------------------------------------------
// Case 3
// ---------------------------------------------------------------------------

BoundReport verify_case3(const EigenSystem& E, const CoefficientProfile& p,
                         const ModeData& data, double s, const CaseOptions& opts) {
  if (p.tag != RegularityTag::Smooth)
    throw PreconditionError("verify_case3: profile tag must be Smooth");
  if (p.l < 2) throw PreconditionError("verify_case3: need l >= 2");
  p.validate();

  BoundReport rep;
  rep.case_id = 3;
  rep.tol_margin = opts.tol_margin;
  const double sigma = 1.0 + p.l / 2.0;
  if (!(s >= 1.0 && s < sigma))
    rep.scope_note = "outside theorem scope: s = " + std::to_string(s) +
                     ", admissible [1, " + std::to_string(sigma) + ")";

  const double sup_a = sup_abs(p.a, p.T);
  double norm_cl = sup_a;
  for (int kd = 1; kd <= p.l; ++kd)
    norm_cl = std::max(norm_cl, sup_abs_derivative(p.a, kd, p.T));
  double qa_sup = 0.0;
  for (int i = 0; i < 2001; ++i) {
    double t = p.T * i / 2000.0;
    qa_sup = std::max(qa_sup, std::abs(p.q(t) - p.a(t)));
  }
  const double c0f = forcing_amplitude(E, data, s, p.T);
  const double c1 = qa_sup;          // PQ - Q*P constant, eps-uniform via eps<xi> >= 1
  const double c4 = 2.0 * c0f;
  const double c5 = c1 + c4;
  const double c6 = std::exp(c5 * p.T);
  const double c2 = sup_a + 1.0;     // P_eps sandwich constant

  Sweep sw = run_sweep(E, p, data, opts.n_steps);
  rep.skipped_modes = sw.skipped;

  MarginBlock comm{"commutator", {}, {}};
  MarginBlock sandwich{"p_eps_sandwich", {}, {}};
  std::vector<double> integrals, eps_used;
  std::vector<int> int_modes;
  for (int xi : sw.active) {
    const auto& tr = sw.traces[xi];
    const auto& sys = sw.systems[xi];
    const double w = E.weight(xi);
    const double eps = std::pow(w, -p.l / (2.0 * sigma));
    const int nt = static_cast<int>(tr.states.size());
    const double h = sys.T / sys.n_steps;
    double comm_margin = 1.0, sandw_margin = 1.0;
    double integral = 0.0;
    for (int j = 0; j < nt; ++j) {
      const double a = sys.a_at_step(j);
      const auto& V = tr.states[j];
      const double v1 = std::norm(V(0)), v2 = std::norm(V(1));
      const double Eval = (a + eps * eps) * v1 + v2;
      if (Eval > 0.0) {
        // i((P_eps A - A* P_eps)V, V) = 2 eps^2 Im(V1 conj(V2)) <= eps (P V, V)
        double lhs = 2.0 * eps * eps * std::imag(V(0) * std::conj(V(1)));
        comm_margin = std::min(comm_margin, (eps * Eval - lhs) / (eps * Eval));
        // c2^{-1} eps^2 |V|^2 <= (P V, V) <= c2 |V|^2
        double low = eps * eps * (v1 + v2) / c2;
        double high = c2 * (v1 + v2);
        sandw_margin = std::min(sandw_margin,
                                std::min((Eval - low) / std::max(high, 1e-300),
                                         (high - Eval) / std::max(high, 1e-300)));
        // dtP integrand a'(t) |V1|^2 / (P V, V), a' by central differences.
        int ih = 2 * j;
        double ap;
        if (ih == 0)
          ap = (sys.a_half[1] - sys.a_half[0]) / (h / 2);
        else if (ih == 2 * sys.n_steps)
          ap = (sys.a_half[ih] - sys.a_half[ih - 1]) / (h / 2);
        else
          ap = (sys.a_half[ih + 1] - sys.a_half[ih - 1]) / h;
        double term = ap * v1 / Eval;
        integral += (j == 0 || j == nt - 1) ? 0.5 * term * h : term * h;
      }
    }
    comm.modes.push_back(xi);
    comm.values.push_back(comm_margin);
    sandwich.modes.push_back(xi);
    sandwich.values.push_back(sandw_margin);
    integrals.push_back(integral);
    eps_used.push_back(eps);
    int_modes.push_back(xi);
  }

  // Fitted C0 in int <= C0 eps^{-2/l} ||a||_{C^l}^{1/l}.
  double C0 = 0.0;
  for (size_t i = 0; i < integrals.size(); ++i)
    C0 = std::max(C0, integrals[i] * std::pow(eps_used[i], 2.0 / p.l) /
                          std::pow(norm_cl, 1.0 / p.l));
  const double K0 = C0 * std::pow(norm_cl, 1.0 / p.l);
  const double K00 = 2.0 * std::max(K0, 1.0) * p.T;
  rep.constants = {{"sigma", sigma}, {"l", static_cast<double>(p.l)}, {"C0", C0},
                   {"K0", K0},       {"K00", K00},  {"c1", c1},
                   {"c2", c2},       {"c4", c4},    {"c5", c5},
                   {"c6", c6},       {"norm_a_Cl", norm_cl}, {"s", s}};
  rep.envelope_rate = K00;

  MarginBlock egrow{"energy_growth", {}, {}};
  MarginBlock vbound{"v_bound", {}, {}};
  std::vector<double> fit_x, fit_y;
  for (size_t i = 0; i < int_modes.size(); ++i) {
    int xi = int_modes[i];
    const auto& tr = sw.traces[xi];
    const auto& sys = sw.systems[xi];
    const double w = E.weight(xi);
    const double eps = eps_used[i];
    double E0 = (sys.a_at_step(0) + eps * eps) * std::norm(tr.states[0](0)) +
                std::norm(tr.states[0](1));
    if (E0 <= 0.0) continue;
    double Emax = 0.0, supV = 0.0;
    for (size_t j = 0; j < tr.states.size(); ++j) {
      double a = sys.a_at_step(static_cast<int>(j));
      Emax = std::max(Emax, (a + eps * eps) * std::norm(tr.states[j](0)) +
                                std::norm(tr.states[j](1)));
      supV = std::max(supV, tr.states[j].norm());
    }
    double log_rhs = std::log(c6) + K00 * std::pow(w, 1.0 / sigma) + std::log(E0);
    egrow.modes.push_back(xi);
    egrow.values.push_back(log_margin(std::log(Emax), log_rhs));
    // |V(t)|^2 <= c2^2 c6^2 <xi>^{l/sigma} e^{K00 <xi>^{1/sigma}} |V(0)|^2
    double V0 = tr.states[0].norm();
    if (V0 > 0.0) {
      double log_rhs_v = 2.0 * std::log(c2) + 2.0 * std::log(c6) +
                         (p.l / sigma) * std::log(w) + K00 * std::pow(w, 1.0 / sigma) +
                         2.0 * std::log(V0);
      vbound.modes.push_back(xi);
      vbound.values.push_back(log_margin(2.0 * std::log(supV), log_rhs_v));
      fit_x.push_back(std::pow(w, 1.0 / sigma));
      fit_y.push_back(std::log(supV / V0));
    }
  }
  rep.blocks.push_back(std::move(comm));
  rep.blocks.push_back(std::move(sandwich));
  rep.blocks.push_back(std::move(egrow));
  rep.blocks.push_back(std::move(vbound));
  if (fit_x.size() >= 2) {
    rep.growth_fit = fit_line(fit_x, fit_y).slope;
    MarginBlock gf{"growth_fit", {-1}, {}};
    double cap = (1.0 + opts.growth_slack) * K00;
    gf.values.push_back((cap - rep.growth_fit) / std::max(cap, 1e-300));
    rep.blocks.push_back(std::move(gf));
  }
  rep.finalize();
  return rep;
}

}  // namespace specwave
