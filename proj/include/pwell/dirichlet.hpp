#pragma once

// Dirichlet eigenpairs of the interval and the ball, reduced to one angular
// sector. A mode is u(x) = U(r) Y(theta) with Y unit-normalized on the sphere
// (interval: Y = 1 for even, sign(x) for odd), so every pairing over Omega or
// dOmega is a radial integral against the sector weight w(r):
//   interval: w = 2 (the two half-lines), ball: w = r^{d-1}.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "pwell/quadrature.hpp"
#include "pwell/special.hpp"
#include "pwell/types.hpp"

namespace pwell::dirichlet {

inline constexpr int kNormNodes = 256;

inline const quad::Rule& norm_rule() {
  static const quad::Rule rule = quad::gauss_legendre(kNormNodes);
  return rule;
}

/// Radial measure of the sector.
inline double sector_weight(const WellDomain& domain, double r) {
  return domain.is_interval() ? 2.0 : std::pow(r, domain.dim - 1);
}

/// Bessel order of the radial profile: nu + d/2 - 1 (unused for intervals).
inline double profile_order(const WellDomain& domain, int nu) {
  return nu + 0.5 * domain.dim - 1.0;
}

/// Sector Dirichlet value z_l (so lambda_D = (z_l / a)^2).
inline double sector_zero(const WellDomain& domain, const Mode& mode) {
  validate(domain, mode);
  if (domain.is_interval()) {
    return (mode.l - (mode.nu == 0 ? 0.5 : 0.0)) * std::numbers::pi;
  }
  return special::bessel_j_zero(special::BesselOrder(profile_order(domain, mode.nu)), mode.l);
}

inline double dirichlet_eigenvalue(const WellDomain& domain, const Mode& mode) {
  const double z = sector_zero(domain, mode);
  return (z / domain.radius) * (z / domain.radius);
}

class DirichletMode {
 public:
  DirichletMode(const WellDomain& domain, const Mode& mode)
      : DirichletMode(domain, mode, sector_zero(domain, mode)) {}

  enum class Norm { Quadrature, ClosedForm };

  /// Profile built on an explicit zero (used to probe checks with perturbed
  /// data; for the true zero this is the Dirichlet eigenfunction).
  /// Quadrature: composite 256-point Gauss-Legendre, one panel per 64 units of
  /// k*a. ClosedForm: 1/sqrt(a) on the interval, Lommel's integral on balls.
  DirichletMode(const WellDomain& domain, const Mode& mode, double zero,
                Norm norm = Norm::Quadrature)
      : domain_(domain), mode_(mode), zero_(zero) {
    validate(domain, mode);
    k_ = zero / domain.radius;
    lambda_ = k_ * k_;
    order_ = profile_order(domain, mode.nu);
    coeff_ = 1.0;
    coeff_ = 1.0 / std::sqrt(norm == Norm::Quadrature ? quadrature_norm_sq() : lommel_norm_sq());
  }

  const WellDomain& domain() const { return domain_; }
  const Mode& mode() const { return mode_; }
  double zero() const { return zero_; }
  double lambda_D() const { return lambda_; }
  double radial_coeff() const { return coeff_; }

  /// U(r), 0 <= r <= a.
  double value(double r) const {
    if (domain_.is_interval()) {
      return coeff_ * (mode_.nu == 0 ? std::cos(k_ * r) : std::sin(k_ * r));
    }
    const special::BesselOrder mu(order_);
    if (domain_.dim == 2) return coeff_ * special::bessel_j(mu, k_ * r);
    if (r == 0.0) {
      // r^{1-d/2} J_mu(k r) -> k^mu / (2^mu Gamma(mu+1)) r^nu
      return mode_.nu == 0 ? coeff_ * std::pow(0.5 * k_, order_) / std::tgamma(order_ + 1.0) : 0.0;
    }
    return coeff_ * std::pow(r, 1.0 - 0.5 * domain_.dim) * special::bessel_j(mu, k_ * r);
  }

  /// U'(r).
  double derivative(double r) const {
    if (domain_.is_interval()) {
      return coeff_ * k_ * (mode_.nu == 0 ? -std::sin(k_ * r) : std::cos(k_ * r));
    }
    const special::BesselOrder mu(order_);
    if (domain_.dim == 2) return coeff_ * k_ * special::bessel_j_derivative(mu, k_ * r);
    if (r == 0.0) {
      if (mode_.nu == 1) return coeff_ * std::pow(0.5 * k_, order_) / std::tgamma(order_ + 1.0);
      return 0.0;
    }
    const double s = 1.0 - 0.5 * domain_.dim;
    return coeff_ * (s * std::pow(r, s - 1.0) * special::bessel_j(mu, k_ * r) +
                     std::pow(r, s) * k_ * special::bessel_j_derivative(mu, k_ * r));
  }

 private:
  double quadrature_norm_sq() const {
    const double a = domain_.radius;
    const int panels = std::max(1, static_cast<int>(std::ceil(zero_ / 64.0)));
    double s = 0.0;
    for (int p = 0; p < panels; ++p) {
      s += quad::integrate(norm_rule(), a * p / panels, a * (p + 1) / panels, [&](double r) {
        const double u = value(r);
        return u * u * sector_weight(domain_, r);
      });
    }
    return s;
  }

  // int_0^a r J_mu(kr)^2 dr = a^2/2 [J_mu'(ka)^2 + (1 - mu^2/(ka)^2) J_mu(ka)^2]
  double lommel_norm_sq() const {
    const double a = domain_.radius;
    if (domain_.is_interval()) {
      const double s2 = std::sin(2.0 * zero_) / (2.0 * k_);
      return 2.0 * (mode_.nu == 0 ? 0.5 * (a + s2) : 0.5 * (a - s2));
    }
    const special::BesselOrder mu(order_);
    const double j = special::bessel_j(mu, zero_);
    const double jp = special::bessel_j_derivative(mu, zero_);
    return 0.5 * a * a * (jp * jp + (1.0 - order_ * order_ / (zero_ * zero_)) * j * j);
  }

  WellDomain domain_;
  Mode mode_;
  double zero_;
  double k_ = 0.0;
  double lambda_ = 0.0;
  double order_ = 0.0;
  double coeff_ = 1.0;
};

inline double dirichlet_eigenfunction(const WellDomain& domain, const Mode& mode, double r) {
  if (!(r >= 0.0) || r > domain.radius) {
    throw std::domain_error("radial coordinate must lie in [0, a]");
  }
  return DirichletMode(domain, mode).value(r);
}

/// <u, v> over Omega for two profiles of the same sector.
inline double inner(const DirichletMode& u, const DirichletMode& v) {
  const WellDomain& dom = u.domain();
  const double z = std::max(u.zero(), v.zero());
  const int panels = std::max(1, static_cast<int>(std::ceil(z / 64.0)));
  double s = 0.0;
  for (int p = 0; p < panels; ++p) {
    s += quad::integrate(norm_rule(), dom.radius * p / panels, dom.radius * (p + 1) / panels,
                         [&](double r) { return u.value(r) * v.value(r) * sector_weight(dom, r); });
  }
  return s;
}

/// |dOmega| in sector units: the number of endpoints, or a^{d-1}.
inline double boundary_measure(const WellDomain& domain) {
  return sector_weight(domain, domain.radius);
}

struct BoundaryData {
  double normal_derivative_norm_sq = 0.0;
  /// <d_nu psi_i, d_nu psi_j> for the orthonormal harmonic basis psi_i of the
  /// eigenspace generated by the mode's sector (identity times the norm).
  std::vector<std::vector<double>> pairing;
};

inline BoundaryData normal_derivative_norm(const DirichletMode& u) {
  const double up = u.derivative(u.domain().radius);
  BoundaryData out;
  out.normal_derivative_norm_sq = up * up * boundary_measure(u.domain());
  const int m = harmonic_multiplicity(u.domain(), u.mode().nu);
  out.pairing.assign(m, std::vector<double>(m, 0.0));
  for (int i = 0; i < m; ++i) out.pairing[i][i] = out.normal_derivative_norm_sq;
  return out;
}

inline BoundaryData normal_derivative_norm(const WellDomain& domain, const Mode& mode) {
  return normal_derivative_norm(DirichletMode(domain, mode));
}

/// |lambda - (1/4) int_{dB} (d_nu u)^2 d_nu|x|^2 / ||u||^2| / lambda, with
/// both norms by quadrature. `zero_shift` perturbs the Bessel zero the profile
/// is built on (a sensitivity probe; 0 for the real check).
inline double rellich_check(const WellDomain& domain, const Mode& mode, double zero_shift = 0.0) {
  if (domain.is_interval()) throw std::invalid_argument("rellich_check requires a ball");
  const DirichletMode u(domain, mode, sector_zero(domain, mode) + zero_shift);
  const double a = domain.radius;
  const double norm_sq = inner(u, u);
  const double up = u.derivative(a);
  const double boundary = up * up * boundary_measure(domain) * (2.0 * a);
  const double rhs = 0.25 * boundary / norm_sq;
  return std::abs(u.lambda_D() - rhs) / u.lambda_D();
}

/// The first n Dirichlet modes of one angular sector.
class SectorBasis {
 public:
  SectorBasis(const WellDomain& domain, int nu, int n) : domain_(domain), nu_(nu) {
    if (n < 1) throw std::invalid_argument("SectorBasis: n must be >= 1");
    std::vector<double> zeros;
    if (domain.is_interval()) {
      for (int l = 1; l <= n; ++l) zeros.push_back(sector_zero(domain, Mode{nu, l}));
    } else {
      zeros = special::bessel_j_zeros(special::BesselOrder(profile_order(domain, nu)), n);
    }
    modes_.reserve(n);
    for (int l = 1; l <= n; ++l) {
      modes_.emplace_back(domain, Mode{nu, l}, zeros[l - 1], DirichletMode::Norm::ClosedForm);
    }
  }

  const WellDomain& domain() const { return domain_; }
  int nu() const { return nu_; }
  int size() const { return static_cast<int>(modes_.size()); }
  const DirichletMode& operator[](int i) const { return modes_[static_cast<std::size_t>(i)]; }

 private:
  WellDomain domain_;
  int nu_;
  std::vector<DirichletMode> modes_;
};

}  // namespace pwell::dirichlet
