#pragma once

#include <string>
#include <vector>

#include "specwave/estimates.hpp"
#include "specwave/evolution.hpp"
#include "specwave/mollifier.hpp"

namespace specwave {

// Per-eps solution norms of the regularised family.
struct SolutionNet {
  std::vector<double> eps_list;
  std::vector<double> widths;    // omega(eps)
  std::vector<double> norm_v;    // ||v_eps||_{L2([0,T]; H^{1+s})}
  std::vector<double> norm_dv;   // ||dt v_eps||_{L2([0,T]; H^s)}
  std::vector<bool> blew_up;
};

SolutionNet solve_net(const EigenSystem& E, const CoefficientProfile& p,
                      const Mollifier& m, const ModeData& data, double s,
                      const std::vector<double>& eps_list);

struct NetClassification {
  enum class Kind { Moderate, Negligible, Indeterminate };
  Kind kind = Kind::Indeterminate;
  int N = -1;              // moderate order, ||.|| <~ eps^{-N}
  double slope = 0.0;      // full log-log fit
  double residual = 0.0;   // RMS residual of the fit
  double tail_slope = 0.0; // fit over the finer half of the grid
  int certified_q = 0;     // negligible: decay certified up to eps^q
  std::string note;

  std::string kind_name() const;
};

// Least-squares classification of a norm net against the eps grid.
// Negligibility is certified empirically up to q_max (tail slope >= q_max);
// a fit residual above 0.3 log-units marks the net indeterminate.
NetClassification classify_net(const std::vector<double>& eps_list,
                               const std::vector<double>& norms, int q_max = 6);

enum class PerturbationKind { Identical, ExpNegligible, EpsModerate };

std::string perturbation_name(PerturbationKind k);

struct UniquenessReport {
  PerturbationKind perturbation{};
  NetClassification hypothesis_class;  // of the coefficient perturbation net
  bool hypothesis_ok = false;
  NetClassification difference_class;  // of ||v_eps - v~_eps||, when run
  std::vector<double> eps_list;
  std::vector<double> diff_norms;
  std::string verdict;  // "negligible" | "hypothesis failure" | ...
  bool pass = false;
};

// Solves the mollified problem and the perturbed one; the difference is
// integrated as its own forced system (forcing (a~ - a)|lambda| vhat), which
// keeps e^{-1/eps}-sized differences well above the floating-point floor of
// a direct subtraction of the two solutions.
UniquenessReport uniqueness_experiment(const EigenSystem& E, const CoefficientProfile& p,
                                       const Mollifier& m, const ModeData& data, double s,
                                       const std::vector<double>& eps_list,
                                       PerturbationKind kind, int q_max = 6);

struct ConsistencyReport {
  std::vector<double> eps_list;
  std::vector<double> diff_norms;  // ||v_eps - v||_{L2([0,T]; H^{1+s})}
  double classical_norm = 0.0;
  double fitted_order = 0.0;
  bool tail_decreasing = false;  // strictly decreasing on the finest 4 points
  double final_rel = 0.0;        // diff/||v|| at the finest eps
  double rel_tol = 1e-4;
  bool pass = false;
};

ConsistencyReport consistency_experiment(const EigenSystem& E, const CoefficientProfile& p,
                                         const Mollifier& m, const ModeData& data, double s,
                                         const std::vector<double>& eps_list,
                                         double rel_tol = 1e-4);

// Structure-theorem calibration of the log scale rule.
struct CalibratedScale {
  int L1 = 0, L2 = 0, L = 1;
  double C = 1.0;
  double c0_estimate = 0.0;       // Gronwall rate at the coarsest eps
  double cprime_coarsest = 0.0;   // Case-1 constant of the mollified problem
  double coarsest_eps = 0.0;
  ScaleRule rule() const { return ScaleRule::log_rule(L, C); }
};

CalibratedScale calibrate_scale(const CoefficientProfile& p, const Mollifier& m,
                                double coarsest_eps = 0.125);

// Sup-norm slope fits ||d^k a_eps|| ~ omega(eps)^{-(L1+k)} for k = 0, 1 with
// omega(eps) = eps; the verification companion of calibrate_scale.
struct StructureSlopes {
  double slope_k0 = 0.0;
  double slope_k1 = 0.0;
};
StructureSlopes coefficient_net_slopes(const SymbolicCoefficient& c, double T,
                                       const Mollifier& m,
                                       const std::vector<double>& eps_list);

}  // namespace specwave
