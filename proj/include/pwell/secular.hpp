#pragma once

// Secular (matching) functions for P_h = -Delta + h^-2 1_{complement} on an
// interval or a ball, and the root solver built on them.
//
// Roots of each angular sector are bracketed by consecutive Dirichlet values of
// that sector: the l-th root lies in ((z_{l-1}/a)^2, (z_l/a)^2] with z_0 = 0.
// (On each such interval kJ'/J decreases in lambda while kappa K'/K increases,
// so there is exactly one crossing when the bracket is not cut by the window.)

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "pwell/roots.hpp"
#include "pwell/special.hpp"
#include "pwell/types.hpp"

namespace pwell::secular {

namespace detail {

inline void check_lambda(double lambda, const WellParams& params) {
  if (!(lambda > 0.0 && lambda < params.depth())) {
    throw std::domain_error("lambda must lie in (0, h^-2), got " + std::to_string(lambda));
  }
}

inline void require_interval(const WellDomain& domain) {
  if (!domain.is_interval()) throw std::invalid_argument("interval secular function on a ball");
}

}  // namespace detail

inline double secular_interval_even(double lambda, const WellParams& params,
                                    const WellDomain& domain) {
  detail::require_interval(domain);
  detail::check_lambda(lambda, params);
  const double k = std::sqrt(lambda);
  const double kappa = std::sqrt(params.depth() - lambda);
  const double a = domain.radius;
  return kappa * std::cos(k * a) - k * std::sin(k * a);
}

inline double secular_interval_odd(double lambda, const WellParams& params,
                                   const WellDomain& domain) {
  detail::require_interval(domain);
  detail::check_lambda(lambda, params);
  const double k = std::sqrt(lambda);
  const double kappa = std::sqrt(params.depth() - lambda);
  const double a = domain.radius;
  return k * std::cos(k * a) + kappa * std::sin(k * a);
}

/// even * odd, in the simplified double-angle form.
inline double secular_interval_combined(double lambda, const WellParams& params,
                                        const WellDomain& domain) {
  detail::require_interval(domain);
  detail::check_lambda(lambda, params);
  const double k = std::sqrt(lambda);
  const double kappa = std::sqrt(params.depth() - lambda);
  const double a = domain.radius;
  return k * kappa * std::cos(2.0 * k * a) +
         0.5 * (params.depth() - 2.0 * lambda) * std::sin(2.0 * k * a);
}

/// J'K - JK' for r^{1-d/2} J_mu(k r) and r^{1-d/2} K_mu(kappa r) at r = a,
/// mu = nu + d/2 - 1, multiplied by exp(kappa a). For d = 2 this is
/// k J_nu'(ka) K_nu(kappa a) - kappa J_nu(ka) K_nu'(kappa a) (times e^{kappa a}).
inline double secular_ball(double lambda, const WellParams& params, const WellDomain& domain,
                           double nu) {
  if (domain.is_interval()) throw std::invalid_argument("ball secular function on an interval");
  detail::check_lambda(lambda, params);
  const int d = domain.dim;
  const special::BesselOrder mu(nu + 0.5 * d - 1.0);
  const double a = domain.radius;
  const double k = std::sqrt(lambda);
  const double kappa = std::sqrt(params.depth() - lambda);
  const double j = special::bessel_j(mu, k * a);
  const double jp = special::bessel_j_derivative(mu, k * a);
  const special::KPair kk = special::bessel_k_pair(mu, kappa * a);
  // the (1 - d/2) r^{-d/2} terms of both derivatives cancel in the determinant
  const double det = k * jp * kk.k - kappa * j * kk.kp;
  return std::pow(a, 2.0 - d) * det * std::exp(kk.log_scale + kappa * a);
}

/// Secular function governing the sector of `mode` (interval: parity; ball: nu).
inline double secular_sector(double lambda, const WellParams& params, const WellDomain& domain,
                             int nu) {
  if (domain.is_interval()) {
    return nu == 0 ? secular_interval_even(lambda, params, domain)
                   : secular_interval_odd(lambda, params, domain);
  }
  return secular_ball(lambda, params, domain, nu);
}

/// Dirichlet values z with u(a) = 0 for the sector, scaled to the unit radius:
/// every z <= z_max, then the first one beyond.
inline std::vector<double> sector_zeros_through(const WellDomain& domain, int nu, double z_max) {
  std::vector<double> zeros;
  if (domain.is_interval()) {
    const double offset = nu == 0 ? 0.5 : 0.0;
    for (int m = 1;; ++m) {
      zeros.push_back((m - offset) * std::numbers::pi);
      if (zeros.back() > z_max) break;
    }
    return zeros;
  }
  return special::bessel_j_zeros_through(special::BesselOrder(nu + 0.5 * domain.dim - 1.0), z_max);
}

struct Window {
  double lo;
  double hi;
  bool extended;
};

/// (eps, h^-2/2] by default; up to just below h^-2 when extended.
inline Window search_window(const WellParams& params, double lambda_max, bool extended) {
  const double depth = params.depth();
  Window w{1e-12 * depth, 0.0, extended};
  const double cap = extended ? depth * (1.0 - 1e-9) : 0.5 * depth;
  w.hi = lambda_max > 0.0 ? std::min(lambda_max, cap) : cap;
  if (!(w.hi > w.lo)) throw std::invalid_argument("empty search window");
  return w;
}

namespace detail {

template <class F>
Eigenvalue refine(F&& f, double lo, double hi, double flo, double fhi, Mode mode, int mult) {
  double x = roots::brent(f, lo, hi, flo, fhi);
  double fx = f(x);
  // one Newton step with a central difference; kept only if it helps
  const double step = 1e-6 * std::max(x, 1e-300);
  if (x - step > lo && x + step < hi && fx != 0.0) {
    const double slope = (f(x + step) - f(x - step)) / (2.0 * step);
    if (slope != 0.0 && std::isfinite(slope)) {
      const double y = x - fx / slope;
      if (y > lo && y < hi) {
        const double fy = f(y);
        if (std::abs(fy) < std::abs(fx)) {
          x = y;
          fx = fy;
        }
      }
    }
  }
  return Eigenvalue{x, mult, mode, std::abs(fx)};
}

// Smallest-ish point of a geometric search in (lo, hi] where f > 0 can be
// seen, given f == 0 (underflow) at lo and f positive below its first root.
template <class F>
double first_visible_positive(F&& f, double lo, double hi) {
  double under = lo;  // f == 0 here
  double upper = hi;
  for (int it = 0; it < 400; ++it) {
    const double mid = std::sqrt(under * upper);
    const double fm = f(mid);
    if (fm > 0.0) return mid;
    if (fm == 0.0) {
      under = mid;
    } else {
      upper = mid;
    }
  }
  return lo;
}

}  // namespace detail

/// All roots of one sector inside the window, ordered by l.
inline std::vector<Eigenvalue> solve_sector(const WellDomain& domain, const WellParams& params,
                                            int nu, const Window& window) {
  const double a = domain.radius;
  const auto f = [&](double lam) { return secular_sector(lam, params, domain, nu); };
  const int mult = harmonic_multiplicity(domain, nu);
  const std::vector<double> zeros = sector_zeros_through(domain, nu, a * std::sqrt(window.hi));

  std::vector<Eigenvalue> out;
  double lo = window.lo;
  double flo = f(lo);
  if (flo == 0.0) {
    // J_mu underflows near lambda = 0 for large orders; the sector function is
    // positive below its first root, so lift lo to where that sign is visible.
    const double first_d = (zeros[0] / a) * (zeros[0] / a);
    lo = detail::first_visible_positive(f, window.lo, std::min(window.hi, first_d));
    flo = f(lo);
  }
  for (std::size_t m = 0; m < zeros.size(); ++m) {
    const double lam_d = (zeros[m] / a) * (zeros[m] / a);
    const bool truncated = lam_d > window.hi;
    const double hi = truncated ? window.hi : lam_d;
    if (!(hi > lo)) break;
    const double fhi = f(hi);
    const Mode mode{nu, static_cast<int>(m) + 1};
    if ((flo > 0.0) != (fhi > 0.0) || fhi == 0.0 || flo == 0.0) {
      out.push_back(detail::refine(f, lo, hi, flo, fhi, mode, mult));
    } else if (!truncated) {
      throw ScanError("no sign change in sector nu=" + std::to_string(nu) + " bracket l=" +
                      std::to_string(m + 1));
    }
    if (truncated) break;
    lo = hi;
    flo = fhi;
  }
  return out;
}

/// The root of one mode, if it lies in the window.
inline std::optional<Eigenvalue> solve_mode(const WellDomain& domain, const WellParams& params,
                                            const Mode& mode, bool extended = false) {
  validate(domain, mode);
  const Window window = search_window(params, 0.0, extended);
  const std::vector<Eigenvalue> roots = solve_sector(domain, params, mode.nu, window);
  if (static_cast<int>(roots.size()) < mode.l) return std::nullopt;
  return roots[static_cast<std::size_t>(mode.l - 1)];
}

struct SpectrumOptions {
  double lambda_max = 0.0;  // <= 0: the default window edge
  int nu_max = 200;
  bool extended = false;
};

/// Eigenvalues in the window, sorted by (lambda, nu, l). Ball sectors are
/// visited in increasing nu until one has no root (the lowest root of each
/// sector increases with nu).
inline std::vector<Eigenvalue> solve_spectrum(const WellDomain& domain, const WellParams& params,
                                              const SpectrumOptions& opts = {}) {
  const Window window = search_window(params, opts.lambda_max, opts.extended);
  std::vector<Eigenvalue> all;
  const int nu_last = domain.is_interval() ? 1 : opts.nu_max;
  for (int nu = 0; nu <= nu_last; ++nu) {
    std::vector<Eigenvalue> part = solve_sector(domain, params, nu, window);
    if (part.empty() && !domain.is_interval()) break;
    all.insert(all.end(), part.begin(), part.end());
  }
  std::sort(all.begin(), all.end(), [](const Eigenvalue& x, const Eigenvalue& y) {
    if (x.lambda != y.lambda) return x.lambda < y.lambda;
    if (x.mode.nu != y.mode.nu) return x.mode.nu < y.mode.nu;
    return x.mode.l < y.mode.l;
  });
  return all;
}

/// Eigenvalues counted with multiplicity.
inline int count_with_multiplicity(const std::vector<Eigenvalue>& evs) {
  int n = 0;
  for (const auto& e : evs) n += e.multiplicity;
  return n;
}

}  // namespace pwell::secular
