#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace pwell {

/// Omega: the interval (-a, a) or the ball B_a(0) in R^d.
struct WellDomain {
  enum class Kind { Interval, Ball };

  Kind kind = Kind::Interval;
  double radius = 1.0;
  int dim = 1;

  static WellDomain interval(double a) { return make(Kind::Interval, a, 1); }
  static WellDomain ball(int d, double a) { return make(Kind::Ball, a, d); }

  bool is_interval() const { return kind == Kind::Interval; }

 private:
  static WellDomain make(Kind kind, double a, int d) {
    if (!(a > 0.0) || !std::isfinite(a)) throw std::invalid_argument("radius must be > 0");
    if (kind == Kind::Interval && d != 1) throw std::invalid_argument("interval requires d = 1");
    if (kind == Kind::Ball && d < 2) throw std::invalid_argument("ball requires d >= 2");
    WellDomain w;
    w.kind = kind;
    w.radius = a;
    w.dim = d;
    return w;
  }
};

/// Semiclassical parameter h in (0, 1); the well depth is h^-2.
struct WellParams {
  double h;

  explicit WellParams(double h_) : h(h_) {
    if (!(h_ > 0.0 && h_ < 1.0)) throw std::invalid_argument("h must lie in (0, 1)");
  }
  double depth() const { return 1.0 / (h * h); }
};

/// Spectral label. For balls nu is the angular degree. For intervals nu is the
/// degree of the harmonic on S^0: 0 = even, 1 = odd. l >= 1 is the ordinal
/// within that sector.
struct Mode {
  int nu = 0;
  int l = 1;

  static Mode even(int l) { return {0, l}; }
  static Mode odd(int l) { return {1, l}; }

  /// Interval mode with global index n = 1, 2, ... (odd n are even functions).
  static Mode interval_index(int n) {
    if (n < 1) throw std::invalid_argument("interval index must be >= 1");
    return n % 2 == 1 ? even((n + 1) / 2) : odd(n / 2);
  }
  int interval_n() const { return nu == 0 ? 2 * l - 1 : 2 * l; }

  friend bool operator==(const Mode&, const Mode&) = default;
};

inline void validate(const WellDomain& domain, const Mode& mode) {
  if (mode.l < 1) throw std::invalid_argument("mode index l must be >= 1");
  if (mode.nu < 0) throw std::invalid_argument("mode index nu must be >= 0");
  if (domain.is_interval() && mode.nu > 1) {
    throw std::invalid_argument("interval modes have nu in {0 (even), 1 (odd)}");
  }
}

inline std::string parity_label(const WellDomain& domain, const Mode& mode) {
  if (domain.is_interval()) return mode.nu == 0 ? "even" : "odd";
  return mode.nu % 2 == 0 ? "even" : "odd";
}

/// Dimension of the space of spherical harmonics of degree nu on S^{d-1}.
inline int harmonic_multiplicity(const WellDomain& domain, int nu) {
  if (domain.is_interval() || nu == 0) return 1;
  const int d = domain.dim;
  if (d == 2) return 2;
  auto binom = [](int n, int k) -> double {
    if (k < 0 || n < k) return 0.0;
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
  };
  return static_cast<int>(std::lround(binom(nu + d - 1, d - 1) - binom(nu + d - 3, d - 1)));
}

struct Eigenvalue {
  double lambda = 0.0;
  int multiplicity = 1;
  Mode mode;
  double residual = 0.0;
};

/// A bracket that must contain a root showed no sign change.
class ScanError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DegeneracyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace pwell
