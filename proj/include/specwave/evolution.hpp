#pragma once

#include <Eigen/Dense>
#include <complex>
#include <functional>
#include <memory>
#include <vector>

#include "specwave/mollifier.hpp"
#include "specwave/operator.hpp"
#include "specwave/profile.hpp"

namespace specwave {

// Per-mode first-order system
//   dV/dt = i<xi> A(t) V + i<xi>^{-1} Q(t) V + F(t),
//   A = [[0, 1], [a, 0]],  Q = [[0, 0], [q - a, 0]],  F = (0, fhat),
// equivalent to vhat'' + |lambda| a vhat + q vhat = fhat under
// V = (i<xi> vhat, vhat').
//
// Coefficients and forcing are sampled on the half-step grid so the RK4
// stages never interpolate.
struct ModeSystem {
  int xi = 0;
  double weight = 1.0;      // <xi>
  double abs_lambda = 0.0;  // |lambda_xi| (shift included)
  double T = 1.0;
  int n_steps = 0;
  std::vector<double> t_half;  // 2 n_steps + 1 nodes
  std::vector<double> a_half;
  std::vector<double> q_half;
  std::vector<std::complex<double>> f_half;

  double a_at_step(int j) const { return a_half[2 * j]; }
  double t_at_step(int j) const { return t_half[2 * j]; }
};

// Spectral data (v0, v1, f) truncated to the resolved modes. The forcing is
// separable: fhat(t, xi) = fhat_space[xi] * f_time(t).
struct ModeData {
  std::vector<std::complex<double>> v0hat;
  std::vector<std::complex<double>> v1hat;
  std::vector<std::complex<double>> fhat_space;  // empty means f = 0
  std::function<double(double)> f_time;          // null means 1

  Eigen::Vector2cd initial_state(int xi, double weight) const;
  bool has_forcing() const { return !fhat_space.empty(); }
};

// Fixed-step rule h = min(T/min_steps, theta/(<xi> max(1, sup sqrt a))).
// theta = 0.005 keeps the worst constant-coefficient phase error below 1e-8
// at |lambda| = 1e3 over [0, 1].
int mode_step_count(double T, double weight, double sup_sqrt_a,
                    double theta = 0.005, int min_steps = 200);

// Builds the sampled system from callables (used for mollified coefficients).
ModeSystem make_mode_system(int xi, double weight, double abs_lambda, double T,
                            int n_steps, const std::function<double(double)>& a,
                            const std::function<double(double)>& q,
                            const std::function<std::complex<double>(double)>& f);

// Samples a regular profile; throws on distributional profiles.
ModeSystem assemble_mode_system(const EigenSystem& E, int xi,
                                const CoefficientProfile& p, const ModeData& data,
                                int n_steps = 0);

enum class EnergyKind { SymmetriserS, QuasiSymmetriserP, Case2W };

struct ModeTrace {
  std::vector<double> t;                  // full-step nodes
  std::vector<Eigen::Vector2cd> states;   // V at full steps
  std::vector<double> energy;             // filled by energy_trace
  EnergyKind energy_kind = EnergyKind::SymmetriserS;
  double energy_eps = 0.0;
  bool blew_up = false;
  int blowup_step = -1;

  double abs_state(int j) const { return states[j].norm(); }
};

// Classical RK4 with the system's fixed step; any state component exceeding
// 1e12 (or going non-finite) flags the trace and stops the mode.
ModeTrace integrate_mode(const ModeSystem& sys, const Eigen::Vector2cd& V0);

// Exact solution of vhat'' + (|lambda| a + q) vhat = 0 with constant a, q:
// oscillatory, linear, or hyperbolic branch by the sign of |lambda| a + q.
std::pair<std::complex<double>, std::complex<double>> closed_form_oracle(
    double abs_lambda, double a_const, double q_const, std::complex<double> v0,
    std::complex<double> v1, double t);

// E(t) = a(t)|V1|^2 + |V2|^2 (S) or (a(t) + eps^2)|V1|^2 + |V2|^2 (P_eps).
// Fills trace.energy and returns it.
std::vector<double> energy_trace(ModeTrace& trace, const ModeSystem& sys,
                                 EnergyKind kind, double eps = 0.0);

// Constants of the Hoelder-root estimates, in terms of the root's Hoelder
// constant M (for nondegenerate profiles M = ||a||_{C^alpha}/(2 sqrt a0)):
//   c1 = c2 = M I_psi' / (2 floor),   c3 = M (2 ||sqrt a|| + lift)/(2 floor),
//   c4 = (||a|| + ||q||)/(2 floor),   c5 = sqrt(2) max(||sqrt a|| + lift, 1),
//   k0 = 2 c1 + c2 + c3 + c4 + 2 c0 c5,
// where floor is the uniform lower bound of the (lifted) smoothed root.
struct Case2Constants {
  double root_holder = 0.0;
  double root_floor = 0.0;
  double lift = 0.0;
  double sup_a = 0.0, sup_q = 0.0, sup_sqrt_a = 0.0;
  double int_abs_dpsi = 0.0;
  double c0_forcing = 0.0;
  double c1 = 0.0, c2 = 0.0, c3 = 0.0, c4 = 0.0, c5 = 0.0;
  double k0 = 0.0;
};

Case2Constants case2_constants(const CoefficientProfile& p, const Mollifier& m,
                               double root_holder, double c0_forcing, double root_floor,
                               double lift = 0.0);

struct Case2Frame {
  double eps = 0.0;
  double s = 1.0;
  double k = 0.0;                  // decay rate, rho(t) = -k t
  double lift = 0.0;               // additive root lift (degenerate profiles)
  std::vector<double> lambda_eps;  // smoothed root at the trace's full nodes
  double b0 = 0.0;                 // sup_t ||H||/|det H| * |det H(0)|/||H(0)||
  Case2Constants constants;
};

// H(t) = [[1, 1], [-lambda_eps, lambda_eps]], so ||H|| = sqrt(2) max(1, lambda)
// and det H = 2 lambda. Throws if the (possibly lifted) root is not positive.
Case2Frame make_case2_frame(const CoefficientProfile& p, const Mollifier& m,
                            double eps, double s, double k,
                            const std::vector<double>& t_full, double lift = 0.0);

struct Case2TransformResult {
  std::vector<Eigen::Vector2cd> W;      // W = e^{rho <xi>^{1/s}} (det H) H^{-1} V
  double max_step_increase = 0.0;       // max relative growth of |W|^2 per step
  bool monotone(double tol = 1e-7) const { return max_step_increase <= tol; }
};

Case2TransformResult case2_transform(const ModeTrace& trace, const Case2Frame& frame,
                                     double weight);

}  // namespace specwave
