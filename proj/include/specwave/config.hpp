#pragma once

#include <optional>
#include <string>
#include <vector>

#include "specwave/estimates.hpp"
#include "specwave/mollifier.hpp"
#include "specwave/operator.hpp"
#include "specwave/profile.hpp"
#include "specwave/veryweak.hpp"

namespace specwave {

// Declarative experiment description. Single file, no includes; named
// presets are compiled in. Unknown keys are errors, not warnings.
struct ExperimentConfig {
  // grid
  double radius = 12.0;
  int n_points = 481;
  int fd_order = 2;
  std::vector<int> refinements;  // optional extra levels for spectrum runs

  // potential
  std::string potential_preset;  // empty = custom
  std::string potential_re, potential_im;
  double core_radius = 1.0;

  int m_modes = 10;

  // profile
  CoefficientProfile profile;

  // data (spectral): preset name + parameters, resolved against the
  // eigensystem at run time.
  struct DataSpec {
    enum class Kind { Zero, Mode, Gevrey, Coeffs };
    Kind kind = Kind::Zero;
    int index = 0;        // Mode
    double amplitude = 1.0;
    std::vector<std::complex<double>> coeffs;  // Coeffs
  };
  DataSpec v0, v1, f_space;
  std::string f_time;  // expression in t, empty = 1

  double s = 0.0;
  int case_id = 1;

  // veryweak block
  struct VeryWeak {
    std::string experiment = "existence";  // existence | uniqueness | consistency
    std::string rule = "identity";         // identity | log | calibrated
    double L = 1.0, C = 1.0;               // log rule parameters
    double eps_base = 2.0;
    int eps_from = -3, eps_to = -12;
    int q_max = 6;
    std::string perturbation = "exp_negligible";
    double rel_tol = 1e-4;
  };
  VeryWeak veryweak;

  int transform_samples = 100;
  std::string output_dir = "out";
  unsigned long long seed = 12345;

  std::string echo;  // canonical serialization of the parsed config

  ComplexPotential make_potential() const;
  ModeData make_data(const EigenSystem& E) const;
  ScaleRule make_rule(const Mollifier& m) const;  // resolves "calibrated"
  std::vector<double> eps_grid() const;
};

// Parses and validates a JSON config. Collects all field-level problems and
// throws ConfigError listing them.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig parse_config_file(const std::string& path);

}  // namespace specwave
