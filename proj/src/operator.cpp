#include "specwave/operator.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "specwave/errors.hpp"

namespace specwave {

namespace {

// Central difference taps for -d^2/dx^2, highest-order coefficient first.
const std::vector<double>& laplacian_stencil(int order) {
  static const std::vector<double> s2{1.0, -2.0, 1.0};
  static const std::vector<double> s4{-1.0 / 12, 4.0 / 3, -5.0 / 2, 4.0 / 3, -1.0 / 12};
  static const std::vector<double> s6{1.0 / 90,  -3.0 / 20, 3.0 / 2, -49.0 / 18,
                                      3.0 / 2,   -3.0 / 20, 1.0 / 90};
  static const std::vector<double> s8{-1.0 / 560, 8.0 / 315, -1.0 / 5,  8.0 / 5, -205.0 / 72,
                                      8.0 / 5,    -1.0 / 5,  8.0 / 315, -1.0 / 560};
  switch (order) {
    case 2: return s2;
    case 4: return s4;
    case 6: return s6;
    case 8: return s8;
    default:
      throw PreconditionError("assemble_operator: fd_order must be 2, 4, 6 or 8");
  }
}

}  // namespace

OperatorMatrix assemble_operator(const Grid1D& grid, const ComplexPotential& V,
                                 int fd_order) {
  const auto& st = laplacian_stencil(fd_order);
  const int off = fd_order / 2;
  const int n = grid.n_interior();
  const double inv_h2 = 1.0 / (grid.spacing * grid.spacing);

  Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(n, n);
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < static_cast<int>(st.size()); ++k) {
      int m = j + k - off;
      if (m < 0 || m >= n) continue;  // zero-Dirichlet truncation
      A(j, m) += -st[k] * inv_h2;
    }
  }
  auto vals = V.sample(grid);  // throws on non-finite values
  for (int j = 0; j < n; ++j) A(j, j) += vals[j];
  return OperatorMatrix{std::move(A), grid, V, fd_order};
}

namespace {

struct RawMode {
  std::complex<double> lambda;
  int col;
};

std::vector<RawMode> sorted_modes(const Eigen::VectorXcd& lambdas) {
  std::vector<RawMode> out(lambdas.size());
  for (int i = 0; i < lambdas.size(); ++i) out[i] = {lambdas(i), i};
  std::sort(out.begin(), out.end(), [](const RawMode& a, const RawMode& b) {
    double ma = std::abs(a.lambda), mb = std::abs(b.lambda);
    if (ma != mb) return ma < mb;
    if (a.lambda.real() != b.lambda.real()) return a.lambda.real() < b.lambda.real();
    return a.lambda.imag() < b.lambda.imag();
  });
  return out;
}

// Deterministic phase: rotate so the largest-magnitude entry is real positive.
void fix_phase(std::vector<std::complex<double>>& vec) {
  size_t imax = 0;
  double best = -1.0;
  for (size_t j = 0; j < vec.size(); ++j) {
    double m = std::abs(vec[j]);
    if (m > best + 1e-15 * best) {
      best = m;
      imax = j;
    }
  }
  if (best <= 0.0) return;
  std::complex<double> phase = vec[imax] / best;
  for (auto& v : vec) v /= phase;
}

}  // namespace

EigenSystem compute_eigensystem(const OperatorMatrix& A, const EigenOptions& opts) {
  const int n = static_cast<int>(A.matrix.rows());
  const int M = opts.m_modes;
  if (M < 1 || M > n)
    throw PreconditionError("compute_eigensystem: m_modes must be in [1, dim]");
  if (!A.matrix.allFinite())
    throw PreconditionError("compute_eigensystem: matrix has non-finite entries");

  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> right(A.matrix, true);
  if (right.info() != Eigen::Success)
    throw NumericalError("compute_eigensystem: right eigendecomposition failed");
  Eigen::MatrixXcd adj = A.matrix.adjoint();
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> left(adj, true);
  if (left.info() != Eigen::Success)
    throw NumericalError("compute_eigensystem: adjoint eigendecomposition failed");

  auto rs = sorted_modes(right.eigenvalues());
  const Eigen::VectorXcd& llam = left.eigenvalues();

  EigenSystem sys;
  sys.grid = A.grid;
  sys.complex_potential = A.potential.is_complex();
  sys.modes.resize(M);

  // Match each retained right mode with the adjoint mode of conjugate
  // eigenvalue; each adjoint column is consumed at most once.
  std::vector<bool> used(n, false);
  for (int k = 0; k < M; ++k) {
    const auto lam = rs[k].lambda;
    const std::complex<double> target = std::conj(lam);
    int best = -1;
    double best_d = 0.0;
    for (int j = 0; j < n; ++j) {
      if (used[j]) continue;
      double d = std::abs(llam(j) - target);
      if (best < 0 || d < best_d) {
        best = j;
        best_d = d;
      }
    }
    if (best < 0 || best_d > opts.match_tol * (1.0 + std::abs(lam)))
      throw NumericalError("compute_eigensystem: unmatched adjoint pair for mode " +
                           std::to_string(k) + " (distance " + std::to_string(best_d) + ")");
    used[best] = true;

    Mode& mode = sys.modes[k];
    mode.lambda = lam;
    mode.u.resize(n);
    mode.v.resize(n);
    for (int j = 0; j < n; ++j) {
      mode.u[j] = right.eigenvectors()(j, rs[k].col);
      mode.v[j] = left.eigenvectors()(j, best);
    }
    // ||u||_L2 = 1, deterministic phase, then v scaled so <u, v> = 1.
    double nu = norm_l2(A.grid, mode.u);
    for (auto& z : mode.u) z /= nu;
    fix_phase(mode.u);
    std::complex<double> ip = inner_l2(A.grid, mode.u, mode.v);
    if (std::abs(ip) < 1e-300)
      throw NumericalError("compute_eigensystem: degenerate pairing <u, v> for mode " +
                           std::to_string(k));
    // <u, v/s> = <u,v>/conj(s); choose s so the pairing becomes 1.
    std::complex<double> scale = std::conj(ip);
    for (auto& z : mode.v) z /= scale;

    // Relative eigen-residual of the right pair.
    double num = 0.0, den = 0.0;
    for (int j = 0; j < n; ++j) {
      std::complex<double> r = -lam * mode.u[j];
      for (int m = 0; m < n; ++m) r += A.matrix(j, m) * mode.u[m];
      num += std::norm(r);
      den += std::norm(mode.u[j]);
    }
    mode.residual = std::sqrt(num / den);
  }

  // Zero-eigenvalue shift keeps the weights well defined.
  double min_abs = 1e300;
  for (const auto& m : sys.modes) min_abs = std::min(min_abs, std::abs(m.lambda));
  sys.shift_c = (min_abs < opts.lambda_floor) ? opts.shift_c : 0.0;
  for (auto& m : sys.modes) {
    m.abs_lambda = std::abs(m.lambda) + sys.shift_c;
    m.weight = std::sqrt(1.0 + m.abs_lambda);
  }

  // Biorthogonality residual over the retained block.
  double tol_biorth = opts.tol_biorth > 0
                          ? opts.tol_biorth
                          : (sys.complex_potential ? 1e-6 : 1e-8);
  double worst = 0.0;
  for (int i = 0; i < M; ++i)
    for (int j = 0; j < M; ++j) {
      std::complex<double> g = inner_l2(A.grid, sys.modes[i].u, sys.modes[j].v);
      double d = std::abs(g - ((i == j) ? 1.0 : 0.0));
      worst = std::max(worst, d);
    }
  sys.biorth_residual = worst;
  if (worst > tol_biorth)
    throw NumericalError("compute_eigensystem: biorthogonality residual " +
                         std::to_string(worst) + " exceeds tolerance " +
                         std::to_string(tol_biorth));
  double worst_resid = 0.0;
  for (const auto& m : sys.modes) worst_resid = std::max(worst_resid, m.residual);
  if (worst_resid > opts.tol_resid * (1.0 + std::abs(sys.modes.back().lambda)))
    throw NumericalError("compute_eigensystem: eigen-residual " +
                         std::to_string(worst_resid) + " exceeds tolerance");
  return sys;
}

EigenSystem compute_eigensystem(const OperatorMatrix& A, int m_modes) {
  EigenOptions opts;
  opts.m_modes = m_modes;
  return compute_eigensystem(A, opts);
}

EigenSystem synthetic_eigensystem(const std::vector<std::complex<double>>& lambdas) {
  const int M = static_cast<int>(lambdas.size());
  EigenSystem sys;
  sys.grid = Grid1D(1.0, M + 2);
  sys.modes.resize(M);
  const double h = sys.grid.spacing;
  for (int k = 0; k < M; ++k) {
    Mode& m = sys.modes[k];
    m.lambda = lambdas[k];
    m.abs_lambda = std::abs(m.lambda);
    m.weight = std::sqrt(1.0 + m.abs_lambda);
    m.u.assign(M, {0.0, 0.0});
    m.v.assign(M, {0.0, 0.0});
    m.u[k] = 1.0 / std::sqrt(h);  // unit trapezoid norm
    m.v[k] = 1.0 / h / std::conj(m.u[k]);
  }
  return sys;
}

SpectralReport verify_discreteness(const ComplexPotential& V, double radius,
                                   const std::vector<int>& n_points_levels,
                                   int m_modes, int fd_order) {
  if (n_points_levels.size() < 2)
    throw PreconditionError("verify_discreteness: need at least 2 refinement levels");

  SpectralReport rep;
  rep.n_points_levels = n_points_levels;
  std::vector<std::vector<std::complex<double>>> lam_per_level;
  for (int n : n_points_levels) {
    auto sys = compute_eigensystem(assemble_operator(build_grid(radius, n), V, fd_order),
                                   m_modes);
    std::vector<std::complex<double>> ls(m_modes);
    for (int k = 0; k < m_modes; ++k) ls[k] = sys.modes[k].lambda;
    lam_per_level.push_back(std::move(ls));
  }
  for (size_t r = 0; r + 1 < lam_per_level.size(); ++r) {
    std::vector<double> d(m_modes);
    for (int k = 0; k < m_modes; ++k)
      d[k] = std::abs(lam_per_level[r + 1][k] - lam_per_level[r][k]);
    rep.drift.push_back(std::move(d));
  }
  rep.finest_lambdas = lam_per_level.back();
  rep.gaps.resize(m_modes);
  for (int i = 0; i < m_modes; ++i) {
    double gap = 1e300;
    for (int j = 0; j < m_modes; ++j)
      if (j != i) gap = std::min(gap, std::abs(rep.finest_lambdas[i] - rep.finest_lambdas[j]));
    rep.gaps[i] = gap;
  }
  for (int k = 0; k < m_modes; ++k)
    if (rep.drift.back()[k] > rep.gaps[k] / 10.0) rep.flagged.push_back(k);
  return rep;
}

}  // namespace specwave
