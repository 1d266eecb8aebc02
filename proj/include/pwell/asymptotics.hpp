#pragma once

// Boundary-layer asymptotics for the deep well.
//
// Near the edge write rho = r - a and rho_hat = rho / h. To leading order P_h
// becomes the model operator P_hat = -d^2/drho_hat^2 + H(rho_hat), whose
// bounded Green function is G = 1 (rho_hat <= 0), exp(-rho_hat) (rho_hat > 0).
// Quasimodes are assembled per angular sector from
//   order 0:  U0 - h c G(rho/h) chi(rho),                     c = U0'(a)
//   order 1:  + h w + h^2 chi(rho) u_hat(rho/h),  lambda = lambda0 - h |d_nu u0|^2
// where w solves the Grushin problem for f = (L - lambda0)(c chi) and u_hat
// absorbs the layer's O(1) curvature term and the delta from w'(a).

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "pwell/dirichlet.hpp"
#include "pwell/oracle.hpp"
#include "pwell/quadrature.hpp"
#include "pwell/types.hpp"

namespace pwell::asymptotics {

// ------------------------------------------------------------- model problem

inline double model_green(double rho_hat) { return rho_hat <= 0.0 ? 1.0 : std::exp(-rho_hat); }

/// P_hat u = smooth + delta_coeff * delta(rho_hat); smooth lives on rho_hat > 0.
struct LayerRHS {
  std::function<double(double)> smooth;  // empty: zero
  double delta_coeff = 0.0;
};

/// Bounded solution of the model problem: constant left_value on rho_hat < 0,
///   right(s) = 1/2 int_0^inf exp(-|s - t|) v(t) dt + A exp(-s)   on s >= 0.
class LayerFunction {
 public:
  LayerFunction() = default;
  LayerFunction(std::function<double(double)> v, double amplitude, double left)
      : v_(std::move(v)), amplitude_(amplitude), left_(left) {}

  double left_value() const { return left_; }
  double amplitude() const { return amplitude_; }

  double operator()(double s) const {
    if (s <= 0.0) return left_;
    const auto [lo, hi] = duhamel(s);
    return 0.5 * (lo + hi) + amplitude_ * std::exp(-s);
  }

  /// d/ds; the one-sided value at 0 from the right for s == 0.
  double derivative(double s) const {
    if (s < 0.0) return 0.0;
    const auto [lo, hi] = duhamel(s);
    return 0.5 * (hi - lo) - amplitude_ * std::exp(-s);
  }

  /// Second derivative on s > 0, from the equation: u'' = u - v.
  double second_derivative(double s) const {
    if (s <= 0.0) return 0.0;
    return (*this)(s) - source(s);
  }

  double source(double s) const { return v_ && s > 0.0 ? v_(s) : 0.0; }

  /// int_0^inf e^{-t} v(t) dt
  double exp_moment() const { return duhamel(0.0).second; }

 private:
  // {int_0^s e^{-(s-t)} v, int_s^{s+T} e^{-(t-s)} v} on unit panels.
  std::pair<double, double> duhamel(double s) const {
    if (!v_) return {0.0, 0.0};
    static const quad::Rule rule = quad::gauss_legendre(24);
    constexpr double kTail = 40.0;
    auto lo_f = [&](double t) { return std::exp(-(s - t)) * v_(t); };
    auto hi_f = [&](double t) { return std::exp(-(t - s)) * v_(t); };
    double lo = 0.0, hi = 0.0;
    const int nlo = static_cast<int>(std::ceil(s));
    for (int p = 0; p < nlo; ++p) lo += quad::integrate(rule, s * p / nlo, s * (p + 1) / nlo, lo_f);
    for (int p = 0; p < static_cast<int>(kTail); ++p) {
      hi += quad::integrate(rule, s + p, s + p + 1, hi_f);
    }
    return {lo, hi};
  }

  std::function<double(double)> v_;
  double amplitude_ = 0.0;
  double left_ = 0.0;
};

/// Unique bounded solution of P_hat u = rhs. Rejects a smooth part that has
/// not decayed by rho_hat = 40.
inline LayerFunction model_solve(const LayerRHS& rhs) {
  if (rhs.smooth) {
    double sup = 0.0;
    for (int i = 0; i <= 1000; ++i) sup = std::max(sup, std::abs(rhs.smooth(0.01 * i)));
    const double tol = 1e-10 * std::max(1.0, sup);
    for (double s : {40.0, 60.0, 80.0}) {
      if (!(std::abs(rhs.smooth(s)) <= tol)) {
        throw std::invalid_argument("model_solve: right-hand side does not decay");
      }
    }
  }
  // I = int_0^inf e^{-t} v(t) dt.  u'(0+) - u'(0-) = I/2 - A = -c and
  // continuity gives left = I/2 + A.
  const double moment = rhs.smooth ? LayerFunction(rhs.smooth, 0.0, 0.0).exp_moment() : 0.0;
  const double amplitude = 0.5 * moment + rhs.delta_coeff;
  return LayerFunction(rhs.smooth, amplitude, moment + rhs.delta_coeff);
}

// ------------------------------------------------------------------- cutoff

/// chi(rho) = 1 on |rho| <= delta/2, 0 on |rho| >= delta, quintic smoothstep
/// in between.
struct Cutoff {
  double delta;

  double value(double rho) const {
    const double s = std::abs(rho);
    if (s <= 0.5 * delta) return 1.0;
    if (s >= delta) return 0.0;
    const double t = (delta - s) / (0.5 * delta);
    return t * t * t * (10.0 + t * (-15.0 + 6.0 * t));
  }
  double d1(double rho) const {
    const double s = std::abs(rho);
    if (s <= 0.5 * delta || s >= delta) return 0.0;
    const double t = (delta - s) / (0.5 * delta);
    const double ds = 30.0 * t * t * (1.0 - t) * (1.0 - t);
    return ds * (-2.0 / delta) * (rho < 0.0 ? -1.0 : 1.0);
  }
  double d2(double rho) const {
    const double s = std::abs(rho);
    if (s <= 0.5 * delta || s >= delta) return 0.0;
    const double t = (delta - s) / (0.5 * delta);
    return 60.0 * t * (1.0 - t) * (1.0 - 2.0 * t) * (4.0 / (delta * delta));
  }
};

inline double default_collar(const WellDomain& domain) { return std::min(0.5 * domain.radius, 0.5); }

// ---------------------------------------------------------- sector operator

/// L = -d^2/dr^2 - (d-1)/r d/dr + nu(nu+d-2)/r^2 (+ h^-2 outside) on one
/// sector; the interval is the half-line with d = 1.
struct SectorOperator {
  WellDomain domain;
  int nu = 0;

  double centrifugal(double r) const {
    if (domain.is_interval()) return 0.0;
    return nu * (nu + domain.dim - 2.0) / (r * r);
  }
  double drift(double r) const { return domain.is_interval() ? 0.0 : (domain.dim - 1.0) / r; }

  /// (L + pot - lambda)(A chi(r - a)) from A, A', A'' at r.
  double apply(double a0, double a1, double a2, const Cutoff& chi, double r, double pot,
               double lambda) const {
    const double rho = r - domain.radius;
    const double c0 = chi.value(rho), c1 = chi.d1(rho), c2 = chi.d2(rho);
    return -(a2 * c0 + 2.0 * a1 * c1 + a0 * c2) - drift(r) * (a1 * c0 + a0 * c1) +
           (centrifugal(r) + pot - lambda) * a0 * c0;
  }
};

// ---------------------------------------------------------------- Grushin

struct GrushinSolution {
  std::vector<double> w;  // coefficients in the sector basis; w[index] = 0
  double gamma = 0.0;
};

/// Solves (L_D - lambda0) w + gamma u0 = f, <w, u0> = 0 in a truncated sector
/// basis with eigenvalues `lambdas`; u0 is basis element `index` (0-based).
inline GrushinSolution grushin_solve(const std::vector<double>& lambdas, int index,
                                     const std::vector<double>& f) {
  if (f.size() != lambdas.size()) throw std::invalid_argument("grushin_solve: size mismatch");
  if (index < 0 || index >= static_cast<int>(lambdas.size())) {
    throw std::invalid_argument("grushin_solve: index out of range");
  }
  const double lam0 = lambdas[index];
  GrushinSolution sol;
  sol.w.assign(f.size(), 0.0);
  sol.gamma = f[index];
  for (std::size_t k = 0; k < f.size(); ++k) {
    if (static_cast<int>(k) == index) continue;
    const double gap = lambdas[k] - lam0;
    if (std::abs(gap) < 1e-8 * lam0) {
      throw DegeneracyError("grushin_solve: eigenvalue " + std::to_string(k + 1) +
                            " is degenerate with the bordered mode");
    }
    sol.w[k] = f[k] / gap;
  }
  return sol;
}

/// Sector basis eigenvalues as the solver consumes them.
inline std::vector<double> basis_eigenvalues(const dirichlet::SectorBasis& basis) {
  std::vector<double> out(basis.size());
  for (int k = 0; k < basis.size(); ++k) out[k] = basis[k].lambda_D();
  return out;
}

inline GrushinSolution grushin_solve(const dirichlet::SectorBasis& basis, const Mode& mode,
                                     const std::vector<double>& f) {
  if (mode.nu != basis.nu()) throw std::invalid_argument("grushin_solve: mode outside sector");
  return grushin_solve(basis_eigenvalues(basis), mode.l - 1, f);
}

inline constexpr int kGrushinModes = 256;
inline constexpr int kCollarNodes = 256;

/// Coefficients <f, u_k> of f = (L - lambda0)(c chi) with c = U0'(a), by
/// Gauss-Legendre on the two collar pieces.
inline std::vector<double> collar_load(const dirichlet::SectorBasis& basis, const Mode& mode,
                                       double collar) {
  const WellDomain& dom = basis.domain();
  const dirichlet::DirichletMode& u0 = basis[mode.l - 1];
  const double a = dom.radius;
  const double c = u0.derivative(a);
  const double lam0 = u0.lambda_D();
  const Cutoff chi{collar};
  const SectorOperator op{dom, mode.nu};
  static const quad::Rule rule = quad::gauss_legendre(kCollarNodes);
  std::vector<double> xs, ws;
  for (auto [lo, hi] : {std::pair{a - collar, a - 0.5 * collar}, std::pair{a - 0.5 * collar, a}}) {
    auto [x, w] = quad::mapped(rule, lo, hi);
    for (std::size_t i = 0; i < x.size(); ++i) {
      xs.push_back(x[i]);
      ws.push_back(w[i] * op.apply(c, 0.0, 0.0, chi, x[i], 0.0, lam0) *
                   dirichlet::sector_weight(dom, x[i]));
    }
  }
  std::vector<double> f(basis.size(), 0.0);
  for (int k = 0; k < basis.size(); ++k) {
    double s = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) s += ws[i] * basis[k].value(xs[i]);
    f[k] = s;
  }
  return f;
}

// --------------------------------------------------- first order & splitting

inline void require_simple(const WellDomain& domain, const Mode& mode) {
  if (harmonic_multiplicity(domain, mode.nu) > 1) {
    throw DegeneracyError("mode (nu=" + std::to_string(mode.nu) + ", l=" +
                          std::to_string(mode.l) +
                          ") is degenerate; choose a basis vector via splitting_matrix");
  }
}

/// lambda_1 = -|d_nu u0|^2 for a simple mode.
inline double first_order_coefficient(const WellDomain& domain, const Mode& mode) {
  validate(domain, mode);
  require_simple(domain, mode);
  return -dirichlet::normal_derivative_norm(domain, mode).normal_derivative_norm_sq;
}

struct SplittingMatrix {
  std::vector<std::vector<double>> entries;  // A_ij = <d_nu psi_i, d_nu psi_j>
  std::vector<std::string> labels;
  std::vector<double> candidates;                 // -eigenvalues of A, ascending A order
  std::vector<std::vector<double>> coefficients;  // unit eigenvectors z
  bool degenerate = false;  // A11 = A22 and A12 = A21 = 0 (all diagonal entries equal)
};

/// Boundary pairings of psi_i = U(r) sum_m C_im Y_m, Y_m orthonormal harmonics
/// of the mode's degree. No orthonormality check.
inline std::vector<std::vector<double>> boundary_pairing(
    const WellDomain& domain, const Mode& mode, const std::vector<std::vector<double>>& basis) {
  const dirichlet::DirichletMode u(domain, mode);
  const double up = u.derivative(domain.radius);
  const double scale = up * up * dirichlet::boundary_measure(domain);
  const std::size_t m = basis.size();
  std::vector<std::vector<double>> a(m, std::vector<double>(m, 0.0));
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      double g = 0.0;
      for (std::size_t q = 0; q < basis[i].size(); ++q) g += basis[i][q] * basis[j][q];
      a[i][j] = scale * g;
    }
  }
  return a;
}

inline SplittingMatrix splitting_matrix_from(std::vector<std::vector<double>> a,
                                             std::vector<std::string> labels,
                                             double tol = 1e-10) {
  const int m = static_cast<int>(a.size());
  SplittingMatrix s;
  s.entries = a;
  s.labels = std::move(labels);
  Eigen::MatrixXd mat(m, m);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) mat(i, j) = a[i][j];
  }
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (mat + mat.transpose()));
  for (int k = 0; k < m; ++k) {
    s.candidates.push_back(-es.eigenvalues()(k));
    std::vector<double> z(m);
    // fix the sign so the largest component is positive
    int big = 0;
    for (int i = 0; i < m; ++i) {
      if (std::abs(es.eigenvectors()(i, k)) > std::abs(es.eigenvectors()(big, k))) big = i;
    }
    const double sgn = es.eigenvectors()(big, k) < 0.0 ? -1.0 : 1.0;
    for (int i = 0; i < m; ++i) z[i] = sgn * es.eigenvectors()(i, k);
    s.coefficients.push_back(std::move(z));
  }
  const double scale = std::max(1.0, std::abs(a.empty() ? 0.0 : a[0][0]));
  s.degenerate = true;
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      const double target = i == j ? a[0][0] : 0.0;
      if (std::abs(a[i][j] - target) > tol * scale) s.degenerate = false;
    }
  }
  return s;
}

/// Splitting matrix over an orthonormal basis of a degenerate eigenspace. The
/// basis is given by coefficient vectors over orthonormal degree-nu harmonics
/// (d = 2: cos(nu phi)/sqrt(pi), sin(nu phi)/sqrt(pi)).
inline SplittingMatrix splitting_matrix(const WellDomain& domain, const Mode& mode,
                                        const std::vector<std::vector<double>>& basis) {
  validate(domain, mode);
  const int mult = harmonic_multiplicity(domain, mode.nu);
  if (basis.empty()) throw std::invalid_argument("splitting_matrix: empty basis");
  const dirichlet::DirichletMode u(domain, mode);
  const double radial = dirichlet::inner(u, u);
  for (std::size_t i = 0; i < basis.size(); ++i) {
    if (static_cast<int>(basis[i].size()) != mult) {
      throw std::invalid_argument("splitting_matrix: basis vector has the wrong length");
    }
    for (std::size_t j = 0; j < basis.size(); ++j) {
      double g = 0.0;
      for (int q = 0; q < mult; ++q) g += basis[i][q] * basis[j][q];
      if (std::abs(g * radial - (i == j ? 1.0 : 0.0)) > 1e-8) {
        throw std::invalid_argument("splitting_matrix: basis is not orthonormal");
      }
    }
  }
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < basis.size(); ++i) labels.push_back("psi" + std::to_string(i + 1));
  return splitting_matrix_from(boundary_pairing(domain, mode, basis), std::move(labels));
}

/// The standard basis of the mode's harmonic space (d = 2: cos, sin).
inline std::vector<std::vector<double>> standard_basis(const WellDomain& domain, const Mode& mode) {
  const int m = harmonic_multiplicity(domain, mode.nu);
  std::vector<std::vector<double>> b(m, std::vector<double>(m, 0.0));
  for (int i = 0; i < m; ++i) b[i][i] = 1.0;
  return b;
}

/// -z^T A z / |z|^2 for a chosen direction z in a degenerate eigenspace.
inline double first_order_coefficient(const WellDomain& domain, const Mode& mode,
                                      const std::vector<double>& z) {
  validate(domain, mode);
  if (static_cast<int>(z.size()) != harmonic_multiplicity(domain, mode.nu)) {
    throw std::invalid_argument("first_order_coefficient: z has the wrong length");
  }
  double n2 = 0.0;
  for (double v : z) n2 += v * v;
  if (!(n2 > 0.0)) throw std::invalid_argument("first_order_coefficient: z = 0");
  const auto a = boundary_pairing(domain, mode, standard_basis(domain, mode));
  double q = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    for (std::size_t j = 0; j < z.size(); ++j) q += z[i] * a[i][j] * z[j];
  }
  return -q / n2;
}

// ---------------------------------------------------------------- quasimodes

struct QuasimodeOptions {
  int basis_size = kGrushinModes;
  double collar = 0.0;                   // <= 0: min(a/2, 1/2)
  std::optional<std::vector<double>> z;  // direction in a degenerate eigenspace
};

class QuasimodeProfile {
 public:
  const WellDomain& domain() const { return domain_; }
  const Mode& mode() const { return mode_; }
  int order() const { return order_; }
  double h() const { return h_; }
  double layer_coeff() const { return c_; }
  double collar() const { return chi_.delta; }
  double lambda0() const { return lambda0_; }
  double lambda1() const { return lambda1_; }
  double lambda_tilde() const { return lambda0_ + h_ * lambda1_; }
  const std::vector<double>& w_coefficients() const { return w_; }
  double w_boundary_slope() const { return cw_; }
  const LayerFunction& front_face() const { return layer_; }
  const std::string& caveat() const { return caveat_; }

  /// Sector profile at r >= 0 (the interval uses r = |x|).
  double value(double r) const {
    const double a = domain_.radius;
    const double rho = r - a;
    const double chi = chi_.value(rho);
    if (r <= a) {
      double v = basis_->operator[](mode_.l - 1).value(r) - h_ * c_ * chi;
      if (order_ >= 1) v += h_ * w_value(r) + h_ * h_ * layer_.left_value() * chi;
      return v;
    }
    if (chi == 0.0) return 0.0;
    double v = -h_ * c_ * std::exp(-rho / h_) * chi;
    if (order_ >= 1) v += h_ * h_ * layer_(rho / h_) * chi;
    return v;
  }

  /// Residual (P_h - lambda_tilde) u at r != a, smooth part.
  double residual(double r) const {
    const double a = domain_.radius;
    const double rho = r - a;
    const double lt = lambda_tilde();
    const SectorOperator op{domain_, mode_.nu};
    double res = 0.0;
    if (r < a) {
      res += (lambda0_ - lt) * basis_->operator[](mode_.l - 1).value(r);
      res += op.apply(-h_ * c_, 0.0, 0.0, chi_, r, 0.0, lt);
      if (order_ >= 1) {
        double lw = 0.0, ww = 0.0;
        for (int k = 0; k < basis_->size(); ++k) {
          if (w_[k] == 0.0) continue;
          const double uk = basis_->operator[](k).value(r);
          lw += w_[k] * basis_->operator[](k).lambda_D() * uk;
          ww += w_[k] * uk;
        }
        res += h_ * (lw - lt * ww);
        res += op.apply(h_ * h_ * layer_.left_value(), 0.0, 0.0, chi_, r, 0.0, lt);
      }
      return res;
    }
    if (chi_.value(rho) == 0.0 && chi_.d1(rho) == 0.0) return 0.0;
    const double depth = 1.0 / (h_ * h_);
    const double e = std::exp(-rho / h_);
    res += op.apply(-h_ * c_ * e, c_ * e, -c_ * e / h_, chi_, r, depth, lt);
    if (order_ >= 1) {
      const double s = rho / h_;
      res += op.apply(h_ * h_ * layer_(s), h_ * layer_.derivative(s), layer_.second_derivative(s),
                      chi_, r, depth, lt);
    }
    return res;
  }

  /// Coefficient of delta(r - a) in the residual: -(u'(a+) - u'(a-)).
  double delta_coeff() const {
    const double a = domain_.radius;
    double inside = basis_->operator[](mode_.l - 1).derivative(a);
    double outside = c_;
    if (order_ >= 1) {
      inside += h_ * cw_;
      outside += h_ * layer_.derivative(0.0);
    }
    return -(outside - inside);
  }

  /// ||u||_{L^2} by composite Gauss-Legendre on the sector.
  double norm() const {
    static const quad::Rule rule = quad::gauss_legendre(32);
    const double a = domain_.radius;
    auto f = [&](double r) {
      const double v = value(r);
      return v * v * dirichlet::sector_weight(domain_, r);
    };
    std::vector<double> br;
    const int inner = 64;
    for (int i = 0; i <= inner; ++i) br.push_back(a * i / inner);
    for (double r = a + h_; r < a + chi_.delta; r += h_) br.push_back(r);
    br.push_back(a + chi_.delta);
    return std::sqrt(quad::integrate_panels(rule, br, f));
  }

 private:
  friend QuasimodeProfile build_quasimode(const WellDomain&, const Mode&, double, int,
                                          const QuasimodeOptions&);

  double w_value(double r) const {
    double s = 0.0;
    for (int k = 0; k < basis_->size(); ++k) {
      if (w_[k] != 0.0) s += w_[k] * basis_->operator[](k).value(r);
    }
    return s;
  }

  WellDomain domain_;
  Mode mode_;
  int order_ = 0;
  double h_ = 0.0;
  double c_ = 0.0;
  Cutoff chi_{0.5};
  double lambda0_ = 0.0;
  double lambda1_ = 0.0;
  std::shared_ptr<const dirichlet::SectorBasis> basis_;
  std::vector<double> w_;
  double cw_ = 0.0;
  LayerFunction layer_;
  std::string caveat_;
};

/// Order-0 or order-1 quasimode of a Dirichlet mode. Requires h < collar / 2
/// so the layer G(rho/h) has decayed well inside the cutoff's support.
inline QuasimodeProfile build_quasimode(const WellDomain& domain, const Mode& mode, double h,
                                        int order, const QuasimodeOptions& opts = {}) {
  validate(domain, mode);
  const WellParams params(h);
  if (order != 0 && order != 1) throw std::invalid_argument("quasimode order must be 0 or 1");
  QuasimodeProfile q;
  q.chi_ = Cutoff{opts.collar > 0.0 ? opts.collar : default_collar(domain)};
  if (!(h < 0.5 * q.chi_.delta)) {
    throw std::invalid_argument("h too large for the collar (need h < collar/2)");
  }
  if (harmonic_multiplicity(domain, mode.nu) > 1) {
    if (!opts.z) require_simple(domain, mode);
    q.caveat_ =
        "degenerate eigenspace: every direction has the same first-order shift, so the chosen z "
        "is not singled out at this order";
  }
  q.domain_ = domain;
  q.mode_ = mode;
  q.order_ = order;
  q.h_ = params.h;
  const int n = std::max(mode.l + 1, order >= 1 ? opts.basis_size : mode.l);
  q.basis_ = std::make_shared<const dirichlet::SectorBasis>(domain, mode.nu, n);
  const dirichlet::DirichletMode& u0 = (*q.basis_)[mode.l - 1];
  q.c_ = u0.derivative(domain.radius);
  q.lambda0_ = u0.lambda_D();
  q.w_.assign(q.basis_->size(), 0.0);
  if (order >= 1) {
    const std::vector<double> f = collar_load(*q.basis_, mode, q.chi_.delta);
    const GrushinSolution g = grushin_solve(*q.basis_, mode, f);
    q.lambda1_ = -g.gamma;
    q.w_ = g.w;
    for (int k = 0; k < q.basis_->size(); ++k) {
      q.cw_ += q.w_[k] * (*q.basis_)[k].derivative(domain.radius);
    }
    const double curv = domain.is_interval() ? 0.0 : q.c_ * (domain.dim - 1.0) / domain.radius;
    LayerRHS rhs;
    if (curv != 0.0) rhs.smooth = [curv](double s) { return curv * std::exp(-s); };
    rhs.delta_coeff = -q.cw_;
    q.layer_ = model_solve(rhs);
  }
  return q;
}

// --------------------------------------------------------------- residuals

struct QuasimodeResidual {
  double l2 = 0.0;
  double hminus1 = 0.0;
  double delta_coeff = 0.0;
  double norm = 0.0;  // discrete L^2 norm of the profile on the same grid
};

/// FD grid matching the profile's sector: the full line for intervals.
inline oracle::FDGrid residual_grid(const QuasimodeProfile& q) {
  const WellDomain& dom = q.domain();
  return dom.is_interval() ? oracle::fd_line_grid(dom.radius, q.h())
                           : oracle::fd_radial_grid(dom.dim, dom.radius, q.h());
}

/// (P_h - lambda_tilde) u sampled at the cell centres of `grid`, plus the
/// symbolic delta at the edge, measured in L^2 and the discrete H^-1 norm.
inline QuasimodeResidual quasimode_residual(const QuasimodeProfile& q, const oracle::FDGrid& grid) {
  if (grid.spacing > q.h() / 16.0 * (1.0 + 1e-12)) {
    throw std::invalid_argument("grid too coarse for the boundary layer (need 16 cells per h)");
  }
  const WellDomain& dom = q.domain();
  const double parity_sign = dom.is_interval() && q.mode().nu == 1 ? -1.0 : 1.0;
  std::vector<double> res(grid.n), val(grid.n);
  for (int i = 0; i < grid.n; ++i) {
    const double x = grid.node(i);
    const double r = std::abs(x);
    const double s = x < 0.0 ? parity_sign : 1.0;
    res[i] = s * q.residual(r);
    val[i] = s * q.value(r);
  }
  QuasimodeResidual out;
  out.delta_coeff = q.delta_coeff();
  std::vector<oracle::PointDelta> deltas{{dom.radius, out.delta_coeff}};
  if (dom.is_interval()) deltas.push_back({-dom.radius, parity_sign * out.delta_coeff});
  out.l2 = oracle::discrete_l2_norm(res, grid);
  out.hminus1 = oracle::discrete_hminus1_norm(res, deltas, grid, dom.is_interval() ? 1 : dom.dim,
                                              dom.is_interval() ? 0 : q.mode().nu);
  out.norm = oracle::discrete_l2_norm(val, grid);
  return out;
}

inline QuasimodeResidual quasimode_residual(const QuasimodeProfile& q) {
  return quasimode_residual(q, residual_grid(q));
}

}  // namespace pwell::asymptotics
