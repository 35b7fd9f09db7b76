#pragma once

#include <optional>
#include <string>
#include <vector>

#include "specwave/expression.hpp"

namespace specwave {

// One term of a symbolic time coefficient. The closed family keeps
// distributional parts exactly representable so their mollifications can be
// evaluated without sampling a spike.
struct DistributionalAtom {
  enum class Kind { Dirac, DiracPrime, Heaviside, Regular };
  Kind kind = Kind::Regular;
  double t0 = 0.0;       // location (Dirac/DiracPrime/Heaviside)
  double amplitude = 1.0;
  Expression expr;       // Regular only, in t

  static DistributionalAtom dirac(double t0, double amplitude = 1.0);
  static DistributionalAtom dirac_prime(double t0, double amplitude = 1.0);
  static DistributionalAtom heaviside(double t0, double amplitude = 1.0);
  static DistributionalAtom regular(const std::string& expr_in_t, double amplitude = 1.0);

  bool is_regular() const { return kind == Kind::Regular; }
  // Structure-theorem order: dirac -> 1, dirac' -> 2, heaviside/regular -> 0.
  int order() const;
};

// Sum of atoms; the representation of one time coefficient.
struct SymbolicCoefficient {
  std::vector<DistributionalAtom> atoms;

  static SymbolicCoefficient from_expression(const std::string& expr_in_t);
  static SymbolicCoefficient zero();

  bool purely_regular() const;
  // Pointwise value; throws when a non-regular atom is present.
  double operator()(double t) const;
};

enum class RegularityTag { Linf1, HolderNondeg, Smooth, HolderDeg, Distributional };

std::string tag_name(RegularityTag tag);

// Time coefficients a(t), q(t) with their declared regularity class.
struct CoefficientProfile {
  SymbolicCoefficient a;
  SymbolicCoefficient q;
  RegularityTag tag = RegularityTag::Linf1;
  double a0 = 0.0;      // declared lower bound inf a >= a0
  double T = 1.0;       // time horizon
  double alpha = 0.0;   // Hoelder order (HolderNondeg / HolderDeg)
  int l = 0;            // smoothness order (Smooth)

  // Checks the declared class invariants on a sampled grid; throws on
  // violation. n_samples controls the sampling density.
  void validate(int n_samples = 2001) const;
};

// Pointwise samples of a and q on a time grid; rejects distributional
// profiles (they must be mollified first).
struct SampledProfile {
  std::vector<double> t;
  std::vector<double> a;
  std::vector<double> q;
};
SampledProfile sample_profile(const CoefficientProfile& p, const std::vector<double>& t_grid);

// Dyadic-pair estimate of the Hoelder constant of a coefficient on [0, T]:
// for alpha <= 1 the plain difference quotient, for alpha in (1, 2) the
// quotient of the finite-difference derivative at order alpha - 1. A lower
// bound on the true constant.
double holder_constant(const SymbolicCoefficient& c, double alpha, double T,
                       int n_samples = 2001);
double holder_constant(const CoefficientProfile& p, double alpha, int n_samples = 2001);

// Sampled sup-norm helpers on [0, T] (uniform grid).
double sup_abs(const SymbolicCoefficient& c, double T, int n_samples = 2001);
double inf_value(const SymbolicCoefficient& c, double T, int n_samples = 2001);
// Sup-norm of the k-th derivative by central finite differences.
double sup_abs_derivative(const SymbolicCoefficient& c, int k, double T,
                          int n_samples = 2001);

}  // namespace specwave
