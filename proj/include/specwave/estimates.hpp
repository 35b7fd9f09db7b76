#pragma once

#include <map>
#include <string>
#include <vector>

#include "specwave/evolution.hpp"

namespace specwave {

// One family of relative margins (RHS - LHS)/RHS for a named inequality;
// mode -1 marks a global (not per-mode) entry.
struct MarginBlock {
  std::string label;
  std::vector<int> modes;
  std::vector<double> values;

  double min_value() const;
};

struct BoundReport {
  int case_id = 0;
  bool pass = false;
  double tol_margin = 1e-9;
  std::string scope_note;  // set when s lies outside the theorem's range
  std::vector<MarginBlock> blocks;
  std::map<std::string, double> constants;
  std::vector<int> skipped_modes;  // zero initial data, nothing to bound
  double growth_fit = 0.0;
  double envelope_rate = 0.0;  // k (Cases 2/4) or K00 (Case 3)
  int worst_mode = -1;
  double worst_margin = 0.0;
  std::string worst_block;

  // pass <=> every margin >= -tol_margin.
  void finalize();
};

struct CaseOptions {
  double tol_margin = 1e-9;
  double mono_tol = 1e-7;        // per-step |W|^2 increase tolerance
  double slope_tol = 0.15;       // mollified-root slope window
  double growth_slack = 0.10;    // growth fit may exceed the envelope rate by 10%
  double gevrey_floor = 0.05;    // minimal fitted A for "Gevrey-certified" data
  int n_steps = 0;               // 0 = per-sweep automatic step rule
  int mollifier_quad = 2048;
};

// Case 1: a in L^inf_1 with a0 > 0. Checks the Sobolev estimate
//   ||v(t)||^2_{H^{1+s}} + ||v_t(t)||^2_{H^s}
//     <= C (||v0||^2_{H^{1+s}} + ||v1||^2_{H^s} + ||f||^2_{L2 H^s})
// at every sampled t with C = (c0/c1) e^{c'T} max(1, c''), plus the per-mode
// Gronwall bound with the same constant. Norms are truncated to the resolved
// modes (spectral-side weighted sums of the mode traces).
BoundReport verify_case1(const EigenSystem& E, const CoefficientProfile& p,
                         const ModeData& data, double s, const CaseOptions& opts = {});

// Case 2: a Hoelder(alpha) nondegenerate, Gevrey-s data, threshold
// s < 1 + alpha/(1-alpha). Per mode eps = <xi>^{-1}; checks the envelope
// |V(t,xi)| <= b0 e^{kT <xi>^{1/s}} |V(0,xi)| with k = k0, W-monotonicity,
// the mollified-root slope estimates, and fits the actual growth exponent.
BoundReport verify_case2(const EigenSystem& E, const CoefficientProfile& p,
                         const ModeData& data, double s, const CaseOptions& opts = {});

// Case 3: a in C^l, l >= 2, a >= 0, sigma = 1 + l/2, eps = <xi>^{-l/(2 sigma)}.
// Checks the quasi-symmetriser energy bound E_eps(t) <= c6 e^{K00 <xi>^{1/sigma}}
// E_eps(0), the derived |V| bound, the commutator inequality pointwise, the
// P_eps sandwich, and evaluates the dtP integral estimate (C0 fitted).
BoundReport verify_case3(const EigenSystem& E, const CoefficientProfile& p,
                         const ModeData& data, double s, const CaseOptions& opts = {});

// Case 4: a Hoelder(alpha) degenerate, 0 < alpha < 2; Case-2 machinery on the
// root sqrt(a) with order alpha/2 and an additive eps^{alpha/2} lift;
// threshold capped to 1 + alpha/2.
BoundReport verify_case4(const EigenSystem& E, const CoefficientProfile& p,
                         const ModeData& data, double s, const CaseOptions& opts = {});

// Gevrey-decay spectral data e^{-A <xi>^{1/max(s,1)}} on v0 (v1 = A/2 scaled).
ModeData make_gevrey_data(const EigenSystem& E, double A, double s);

// Gevrey fit on raw weighted coefficients (top half of the modes).
double gevrey_radius_fit_raw(const std::vector<double>& weights,
                             const std::vector<std::complex<double>>& coeffs, double s);

}  // namespace specwave
