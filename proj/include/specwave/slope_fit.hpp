#pragma once

#include <vector>

namespace specwave {

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double residual_rms = 0.0;  // RMS deviation of y from the fitted line
  int n = 0;
};

// Ordinary least squares y ~ slope * x + intercept. Requires >= 2 points.
LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

// Fit of log(y) against log(x); points with y <= 0 are rejected.
LineFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace specwave
