#pragma once

// Brute-force check on the secular solver: a second-order finite-volume
// discretization of P_h, solved by Sturm-sequence bisection.
//
// Unknowns live at cell centres x_i = x_lo + (i - 1/2) dx and the well edge a
// sits on a cell face, so the jump of the potential never straddles a node.
// Radial sectors use the flux form -(r^{d-1} U')' / r^{d-1}; the origin face
// carries zero flux, which is the regularity condition for every nu. After
// symmetrizing with sqrt(r^{d-1}) the matrix is symmetric tridiagonal.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "pwell/types.hpp"

namespace pwell::oracle {

struct FDGrid {
  double r_min = 0.0;      // first face (0 for radial, -R for the line)
  double r_max = 0.0;      // last face
  int n = 0;               // number of cells
  double spacing = 0.0;
  int weight_exponent = 0;  // d - 1 for radial sectors, 0 for the line
  double interface = 0.0;   // a, on a face

  double node(int i) const { return r_min + (i + 0.5) * spacing; }  // 0-based
};

struct Tridiag {
  std::vector<double> diag;
  std::vector<double> off;
};

// ---------------------------------------------------------------- eigensolver

/// Number of eigenvalues of T strictly below x (Sturm count via LDL^T pivots).
inline int sturm_count(const Tridiag& t, double x) {
  const std::size_t n = t.diag.size();
  int count = 0;
  double q = 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double e2 = i == 0 ? 0.0 : t.off[i - 1] * t.off[i - 1];
    q = t.diag[i] - x - (i == 0 ? 0.0 : e2 / q);
    if (q == 0.0) q = -std::numeric_limits<double>::epsilon() * (std::abs(t.diag[i]) + 1.0);
    if (q < 0.0) ++count;
  }
  return count;
}

inline double inf_norm(const Tridiag& t) {
  double m = 0.0;
  const std::size_t n = t.diag.size();
  for (std::size_t i = 0; i < n; ++i) {
    double s = std::abs(t.diag[i]);
    if (i > 0) s += std::abs(t.off[i - 1]);
    if (i + 1 < n) s += std::abs(t.off[i]);
    m = std::max(m, s);
  }
  return m;
}

/// k-th smallest eigenvalue (0-based) by bisection down to rounding level.
inline double tridiag_eig(const Tridiag& t, int k) {
  const std::size_t n = t.diag.size();
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (std::size_t i = 0; i < n; ++i) {
    double r = 0.0;
    if (i > 0) r += std::abs(t.off[i - 1]);
    if (i + 1 < n) r += std::abs(t.off[i]);
    lo = std::min(lo, t.diag[i] - r);
    hi = std::max(hi, t.diag[i] + r);
  }
  const double pad = 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, inf_norm(t));
  lo -= pad;
  hi += pad;
  for (int it = 0; it < 400; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (sturm_count(t, mid) > k) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return 0.5 * (lo + hi);
}

/// Lowest `count` eigenvalues, ascending.
inline std::vector<double> tridiag_eigs(const std::vector<double>& diag,
                                        const std::vector<double>& offdiag, int count) {
  if (diag.empty()) throw std::invalid_argument("tridiag_eigs: empty matrix");
  if (offdiag.size() + 1 != diag.size()) {
    throw std::invalid_argument("tridiag_eigs: off-diagonal must have n-1 entries");
  }
  if (count < 1 || count > static_cast<int>(diag.size())) {
    throw std::invalid_argument("tridiag_eigs: count must lie in [1, n]");
  }
  const Tridiag t{diag, offdiag};
  std::vector<double> out(count);
  for (int k = 0; k < count; ++k) out[k] = tridiag_eig(t, k);
  return out;
}

/// Solve (T - shift I) x = b with partial pivoting (T need not be definite).
inline std::vector<double> tridiag_solve(const Tridiag& t, double shift, std::vector<double> b) {
  const std::size_t n = t.diag.size();
  // rows of U carry up to two super-diagonals after pivoting
  std::vector<double> d(n), u1(n, 0.0), u2(n, 0.0), l(n, 0.0);
  std::vector<char> swapped(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    d[i] = t.diag[i] - shift;
    if (i + 1 < n) u1[i] = t.off[i];
  }
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double sub = t.off[i];
    if (std::abs(d[i]) >= std::abs(sub)) {
      if (d[i] == 0.0) d[i] = std::numeric_limits<double>::min();
      l[i] = sub / d[i];
      d[i + 1] -= l[i] * u1[i];
      // u2[i] stays 0
    } else {
      // swap rows i and i+1
      swapped[i] = 1;
      l[i] = d[i] / sub;
      const double nd = sub;
      const double nu1 = d[i + 1];
      const double nu2 = i + 1 < n - 1 ? u1[i + 1] : 0.0;
      const double rd = u1[i] - l[i] * nu1;
      const double ru = -l[i] * nu2;
      d[i] = nd;
      u1[i] = nu1;
      u2[i] = nu2;
      d[i + 1] = rd;
      if (i + 1 < n - 1) u1[i + 1] = ru;
      std::swap(b[i], b[i + 1]);
    }
    b[i + 1] -= l[i] * b[i];
  }
  if (d[n - 1] == 0.0) d[n - 1] = std::numeric_limits<double>::min();
  std::vector<double> x(n);
  for (std::size_t k = n; k-- > 0;) {
    double s = b[k];
    if (k + 1 < n) s -= u1[k] * x[k + 1];
    if (k + 2 < n) s -= u2[k] * x[k + 2];
    x[k] = s / d[k];
  }
  return x;
}

/// Unit eigenvector (Euclidean) for an eigenvalue from tridiag_eig, by inverse
/// iteration.
inline std::vector<double> tridiag_eigvec(const Tridiag& t, double lambda) {
  const std::size_t n = t.diag.size();
  const double shift = lambda + 1e3 * std::numeric_limits<double>::epsilon() *
                                    std::max(1.0, inf_norm(t));
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = 1.0 + 0.5 * std::sin(1.0 + 0.37 * i);
  for (int it = 0; it < 3; ++it) {
    x = tridiag_solve(t, shift, x);
    double nrm = 0.0;
    for (double v : x) nrm += v * v;
    nrm = std::sqrt(nrm);
    for (double& v : x) v /= nrm;
  }
  return x;
}

// ------------------------------------------------------------------ operators

struct FDOptions {
  double spacing = 0.0;  // <= 0: a / round(a / (min(a, h) / 32))
  double margin = 0.0;   // <= 0: 40 h + 1 beyond a
  bool wall = false;     // drop the potential and put a Dirichlet wall at a
};

inline constexpr int kMaxCells = 200000;

inline double default_spacing(double a, double h) {
  const double target = std::min(a, h) / 32.0;
  return a / std::max(1.0, std::round(a / target));
}

namespace detail {

inline FDGrid make_grid(bool line, int d, double a, double h, const FDOptions& opt) {
  FDGrid g;
  g.interface = a;
  g.weight_exponent = line ? 0 : d - 1;
  g.spacing = opt.spacing > 0.0 ? opt.spacing : default_spacing(a, h);
  const double cells_a = a / g.spacing;
  if (std::abs(cells_a - std::round(cells_a)) > 1e-9 * cells_a) {
    throw std::invalid_argument("FD spacing must divide the radius");
  }
  const int na = static_cast<int>(std::round(cells_a));
  int nm = 0;
  if (!opt.wall) {
    const double margin = opt.margin > 0.0 ? opt.margin : 40.0 * h + 1.0;
    nm = static_cast<int>(std::ceil(margin / g.spacing - 1e-9));
  }
  const int half = na + nm;
  g.n = line ? 2 * half : half;
  if (g.n > kMaxCells) throw std::invalid_argument("FD grid exceeds the cell cap");
  g.r_max = half * g.spacing;
  g.r_min = line ? -g.r_max : 0.0;
  return g;
}

}  // namespace detail

inline FDGrid fd_line_grid(double a, double h, const FDOptions& opt = {}) {
  return detail::make_grid(true, 1, a, h, opt);
}

inline FDGrid fd_radial_grid(int d, double a, double h, const FDOptions& opt = {}) {
  if (d < 2) throw std::invalid_argument("radial grid requires d >= 2");
  return detail::make_grid(false, d, a, h, opt);
}

/// Sector description of the discrete operator: centrifugal term nu(nu+d-2)
/// (radial only) and the well depth (0 for the wall variant).
struct SectorOp {
  int d = 1;
  int nu = 0;
  double depth = 0.0;
};

inline double face_weight(const FDGrid& g, double r) {
  return g.weight_exponent == 0 ? 1.0 : std::pow(std::abs(r), g.weight_exponent);
}

inline double node_weight(const FDGrid& g, int i) { return face_weight(g, g.node(i)); }

/// Symmetrized stiffness part: -div(w grad) / w plus the centrifugal term.
/// Dirichlet conditions on outer faces use a mirrored ghost cell.
inline Tridiag assemble_stiffness(const FDGrid& g, const SectorOp& op) {
  Tridiag t;
  const int n = g.n;
  const double dx2 = g.spacing * g.spacing;
  t.diag.assign(n, 0.0);
  t.off.assign(n > 0 ? n - 1 : 0, 0.0);
  const double ang = g.weight_exponent == 0 ? 0.0 : op.nu * (op.nu + op.d - 2.0);
  for (int i = 0; i < n; ++i) {
    const double r = g.node(i);
    const double w = node_weight(g, i);
    double fl = face_weight(g, r - 0.5 * g.spacing);
    double fr = face_weight(g, r + 0.5 * g.spacing);
    if (i == 0 && g.weight_exponent == 0) fl *= 2.0;  // Dirichlet at r_min
    if (i == n - 1) fr *= 2.0;                        // Dirichlet at r_max
    t.diag[i] = (fl + fr) / (w * dx2);
    if (ang != 0.0) t.diag[i] += ang / (r * r);
    if (i + 1 < n) {
      const double f = face_weight(g, r + 0.5 * g.spacing);
      t.off[i] = -f / (dx2 * std::sqrt(w * node_weight(g, i + 1)));
    }
  }
  return t;
}

inline Tridiag assemble(const FDGrid& g, const SectorOp& op) {
  Tridiag t = assemble_stiffness(g, op);
  for (int i = 0; i < g.n; ++i) {
    if (std::abs(g.node(i)) > g.interface) t.diag[i] += op.depth;
  }
  return t;
}

// ------------------------------------------------------------------- spectra

struct FDSpectrum {
  std::vector<double> eigenvalues;  // spacing dx
  std::vector<double> refined;      // spacing dx/2
  std::vector<double> richardson;   // (4 refined - eigenvalues) / 3
  FDGrid grid;
  std::vector<std::string> warnings;
};

struct SpectrumRequest {
  int count = 0;            // > 0: exactly this many (lowest) eigenvalues
  double lambda_max = 0.0;  // used when count <= 0; <= 0 means h^-2 / 2
  bool check_truncation = false;
  bool check_origin = false;  // radial: compare a dx/4 solve with the prediction
};

namespace detail {

inline std::vector<double> lowest(const FDGrid& g, const SectorOp& op, int count) {
  const Tridiag t = assemble(g, op);
  return tridiag_eigs(t.diag, t.off, std::min(count, g.n));
}

inline FDSpectrum solve(bool line, int d, int nu, double a, double h, const FDOptions& opt,
                        const SpectrumRequest& req) {
  WellParams params(h);
  const SectorOp op{d, nu, opt.wall ? 0.0 : params.depth()};
  FDSpectrum out;
  out.grid = make_grid(line, d, a, h, opt);
  FDOptions fine_opt = opt;
  fine_opt.spacing = 0.5 * out.grid.spacing;
  fine_opt.margin = out.grid.r_max - a;
  const FDGrid fine = make_grid(line, d, a, h, fine_opt);

  int count = req.count;
  if (count <= 0) {
    const double lmax = req.lambda_max > 0.0 ? req.lambda_max : 0.5 * params.depth();
    const int c1 = sturm_count(assemble(out.grid, op), lmax);
    const int c2 = sturm_count(assemble(fine, op), lmax);
    if (c1 != c2) {
      out.warnings.push_back("eigenvalue count below lambda_max changed under refinement (" +
                             std::to_string(c1) + " -> " + std::to_string(c2) + ")");
    }
    count = std::min(c1, c2);
  }
  if (count <= 0) return out;
  out.eigenvalues = lowest(out.grid, op, count);
  out.refined = lowest(fine, op, count);
  const std::size_t m = std::min(out.eigenvalues.size(), out.refined.size());
  out.richardson.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    out.richardson[i] = (4.0 * out.refined[i] - out.eigenvalues[i]) / 3.0;
  }

  if (req.check_truncation && !opt.wall) {
    FDOptions wide = opt;
    wide.spacing = out.grid.spacing;
    wide.margin = 2.0 * (out.grid.r_max - a) + a;
    const std::vector<double> ev = lowest(make_grid(line, d, a, h, wide), op, count);
    for (std::size_t i = 0; i < std::min(ev.size(), out.eigenvalues.size()); ++i) {
      if (std::abs(ev[i] - out.eigenvalues[i]) > 1e-8) {
        out.warnings.push_back("truncation: doubling the extent moved eigenvalue " +
                               std::to_string(i + 1));
      }
    }
  }
  if (req.check_origin && !line && !out.refined.empty()) {
    FDOptions quarter = opt;
    quarter.spacing = 0.25 * out.grid.spacing;
    quarter.margin = out.grid.r_max - a;
    const double l4 = lowest(make_grid(line, d, a, h, quarter), op, 1)[0];
    const double predicted = std::abs(out.refined[0] - out.eigenvalues[0]) / 4.0;
    if (std::abs(l4 - out.refined[0]) > 10.0 * predicted) {
      out.warnings.push_back("origin: halving the spacing moved lambda_1 by more than 10x the "
                             "Richardson prediction");
    }
  }
  return out;
}

}  // namespace detail

/// Interval (-a, a) on the line, truncated at +-(a + margin).
inline FDSpectrum fd_line_spectrum(double a, double h, const FDOptions& opt = {},
                                   const SpectrumRequest& req = {}) {
  return detail::solve(true, 1, 0, a, h, opt, req);
}

/// One angular sector nu of the d-ball.
inline FDSpectrum fd_radial_spectrum(int d, int nu, double a, double h,
                                     const FDOptions& opt = {}, const SpectrumRequest& req = {}) {
  if (d < 2) throw std::invalid_argument("fd_radial_spectrum requires d >= 2");
  if (nu < 0) throw std::invalid_argument("nu must be >= 0");
  return detail::solve(false, d, nu, a, h, opt, req);
}

// --------------------------------------------------------------- H^-1 norms

/// A point mass g * delta at x = position (a face of the grid).
struct PointDelta {
  double position;
  double coeff;
};

/// sqrt of sup_v <r, v>^2 / ||v||_{H^1}^2 over grid functions v, where
/// <r, v> = sum_i dx w_i r_i v_i + sum_j g_j w(x_j) v(x_j) and v(x_j) is the
/// mean of the two cells sharing the face x_j. The H^1 form is the stiffness
/// of the sector (centrifugal term included) plus the identity.
inline double discrete_hminus1_norm(const std::vector<double>& residual,
                                    const std::vector<PointDelta>& deltas, const FDGrid& g,
                                    int d = 1, int nu = 0) {
  if (static_cast<int>(residual.size()) != g.n) {
    throw std::invalid_argument("residual must be sampled at every cell");
  }
  std::vector<double> b(g.n);
  for (int i = 0; i < g.n; ++i) b[i] = g.spacing * std::sqrt(node_weight(g, i)) * residual[i];
  for (const PointDelta& pd : deltas) {
    if (pd.coeff == 0.0) continue;
    const double face = (pd.position - g.r_min) / g.spacing;
    const int j = static_cast<int>(std::lround(face));
    if (std::abs(face - j) > 1e-9 || j < 1 || j > g.n - 1) {
      throw std::invalid_argument("delta must sit on an interior face");
    }
    const double wf = face_weight(g, pd.position);
    b[j - 1] += 0.5 * pd.coeff * wf / std::sqrt(node_weight(g, j - 1));
    b[j] += 0.5 * pd.coeff * wf / std::sqrt(node_weight(g, j));
  }
  const Tridiag t = assemble_stiffness(g, SectorOp{d, nu, 0.0});
  const std::vector<double> y = tridiag_solve(t, -1.0, b);
  double s = 0.0;
  for (int i = 0; i < g.n; ++i) s += b[i] * y[i];
  return std::sqrt(std::max(0.0, s / g.spacing));
}

/// Discrete L^2 norm of a sampled function in the sector measure.
inline double discrete_l2_norm(const std::vector<double>& f, const FDGrid& g) {
  double s = 0.0;
  for (int i = 0; i < g.n; ++i) s += g.spacing * node_weight(g, i) * f[i] * f[i];
  return std::sqrt(s);
}

// ---------------------------------------------------------------- min-max

/// max Rayleigh quotient of the discrete energy over span(trials); an upper
/// bound for the n-th discrete eigenvalue, n = trials.size(). Trial functions
/// are plain (unsymmetrized) values at the cell centres.
inline double rayleigh_check(const FDGrid& g, const SectorOp& op,
                             const std::vector<std::vector<double>>& trials) {
  const int m = static_cast<int>(trials.size());
  if (m < 1) throw std::invalid_argument("rayleigh_check: empty trial basis");
  const Tridiag t = assemble(g, op);
  std::vector<std::vector<double>> v(m, std::vector<double>(g.n));
  for (int k = 0; k < m; ++k) {
    if (static_cast<int>(trials[k].size()) != g.n) {
      throw std::invalid_argument("rayleigh_check: trial not sampled on the grid");
    }
    for (int i = 0; i < g.n; ++i) v[k][i] = std::sqrt(node_weight(g, i)) * trials[k][i];
  }
  Eigen::MatrixXd kmat(m, m), mmat(m, m);
  for (int p = 0; p < m; ++p) {
    std::vector<double> tv(g.n);
    for (int i = 0; i < g.n; ++i) {
      double s = t.diag[i] * v[p][i];
      if (i > 0) s += t.off[i - 1] * v[p][i - 1];
      if (i + 1 < g.n) s += t.off[i] * v[p][i + 1];
      tv[i] = s;
    }
    for (int q = 0; q < m; ++q) {
      double kk = 0.0, mm = 0.0;
      for (int i = 0; i < g.n; ++i) {
        kk += v[q][i] * tv[i];
        mm += v[q][i] * v[p][i];
      }
      kmat(q, p) = g.spacing * kk;
      mmat(q, p) = g.spacing * mm;
    }
  }
  kmat = 0.5 * (kmat + kmat.transpose()).eval();
  mmat = 0.5 * (mmat + mmat.transpose()).eval();
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> gram(mmat);
  const double gmax = gram.eigenvalues().maxCoeff();
  if (!(gram.eigenvalues().minCoeff() > 1e-12 * gmax)) {
    throw std::invalid_argument("rayleigh_check: trial basis is rank deficient");
  }
  const Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> ges(kmat, mmat);
  return ges.eigenvalues().maxCoeff();
}

/// Samples f at the cell centres of g.
inline std::vector<double> sample(const FDGrid& g, const std::function<double(double)>& f) {
  std::vector<double> out(g.n);
  for (int i = 0; i < g.n; ++i) out[i] = f(g.node(i));
  return out;
}

/// The k-th discrete eigenvector as plain values at the cell centres,
/// normalized in the discrete sector L^2 norm.
inline std::vector<double> fd_eigenfunction(const FDGrid& g, const SectorOp& op, int k) {
  const Tridiag t = assemble(g, op);
  const double lam = tridiag_eig(t, k);
  std::vector<double> v = tridiag_eigvec(t, lam);
  for (int i = 0; i < g.n; ++i) v[i] /= std::sqrt(node_weight(g, i) * g.spacing);
  return v;
}

}  // namespace pwell::oracle
