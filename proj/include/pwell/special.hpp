#pragma once

// Bessel functions of the first kind J_nu and modified Bessel functions of the
// second kind K_nu for real order nu >= 0 and real argument, together with
// derivatives and positive zeros of J_nu.
//
// J_nu: power series (long double accumulation) for small arguments, Steed's
// continued-fraction method (CF1 + CF2) otherwise.
// K_nu: Temme's series for x < 2, Steed's CF2 for x >= 2, followed by stable
// upward recurrence. K is always carried with an explicit exponential scale.

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace pwell::special {

/// Order of a Bessel function; nonnegative and finite.
class BesselOrder {
 public:
  explicit BesselOrder(double nu) : nu_(nu) {
    if (!std::isfinite(nu) || nu < 0.0) {
      throw std::domain_error("Bessel order must be finite and >= 0, got " + std::to_string(nu));
    }
  }
  double value() const { return nu_; }

 private:
  double nu_;
};

/// A real number stored as mantissa * exp(log_scale) with |mantissa| in [1, e)
/// (or mantissa == 0, log_scale == 0).
class ScaledValue {
 public:
  ScaledValue() = default;

  static ScaledValue from(double mantissa, double log_scale) {
    ScaledValue s;
    if (mantissa == 0.0) return s;
    if (!std::isfinite(mantissa) || !std::isfinite(log_scale)) {
      throw std::overflow_error("ScaledValue: non-finite component");
    }
    const double shift = std::floor(std::log(std::abs(mantissa)));
    s.mantissa_ = mantissa * std::exp(-shift);
    s.log_scale_ = log_scale + shift;
    // exp/log rounding can leave |m| a hair outside [1, e)
    if (std::abs(s.mantissa_) >= std::numbers::e) {
      s.mantissa_ /= std::numbers::e;
      s.log_scale_ += 1.0;
    } else if (std::abs(s.mantissa_) < 1.0) {
      s.mantissa_ *= std::numbers::e;
      s.log_scale_ -= 1.0;
    }
    return s;
  }

  double mantissa() const { return mantissa_; }
  double log_scale() const { return log_scale_; }
  /// May overflow to +-inf or underflow to 0.
  double value() const { return mantissa_ == 0.0 ? 0.0 : mantissa_ * std::exp(log_scale_); }
  /// value * exp(-shift), evaluated without forming value itself.
  double value_times_exp(double shift) const {
    return mantissa_ == 0.0 ? 0.0 : mantissa_ * std::exp(log_scale_ + shift);
  }

 private:
  double mantissa_ = 0.0;
  double log_scale_ = 0.0;
};

/// K_nu(x) and K_nu'(x) sharing one exponential scale:
/// K = k * exp(log_scale), K' = kp * exp(log_scale).
struct KPair {
  double k;
  double kp;
  double log_scale;
};

namespace detail {

inline constexpr double kEps = 1e-16;
inline constexpr double kTiny = 1e-300;

// Taylor coefficients of 1/Gamma(1+z) about z = 0.
inline constexpr std::array<double, 31> kRecipGammaTaylor = {
    1.0,
    0.5772156649015328606065,
    -0.655878071520253881077,
    -0.042002635034095235529,
    0.1665386113822914895017,
    -0.04219773455554433674821,
    -0.009621971527876973562115,
    0.007218943246663099542395,
    -0.001165167591859065112114,
    -0.0002152416741149509728157,
    0.0001280502823881161861532,
    -0.00002013485478078823865569,
    -0.000001250493482142670657345,
    0.000001133027231981695882374,
    -0.000000205633841697760710345,
    0.000000006116095104481415817862,
    0.000000005002007644469222930056,
    -0.000000001181274570487020144588,
    0.0000000001043426711691100510492,
    0.00000000000778226343990507125405,
    -0.000000000003696805618642205708188,
    0.0000000000005100370287454475979015,
    -0.00000000000002058326053566506783222,
    -0.00000000000000534812253942301798237,
    0.000000000000001226778628238260790159,
    -0.0000000000000001181259301697458769514,
    0.00000000000000000118669225475160033258,
    0.000000000000000001412380655318031781556,
    -0.0000000000000000002298745684435370206592,
    0.00000000000000000001714406321927337433384,
    0.0000000000000000000001337351730493693114865,
};

// Temme's auxiliary gamma combinations for |mu| <= 1/2:
//   gam1 = (1/Gamma(1-mu) - 1/Gamma(1+mu)) / (2 mu),
//   gam2 = (1/Gamma(1-mu) + 1/Gamma(1+mu)) / 2.
struct TemmeGammas {
  double gam1, gam2, gampl, gammi;
};

inline TemmeGammas temme_gammas(double mu) {
  double odd = 0.0, even = 0.0;
  for (std::size_t k = kRecipGammaTaylor.size(); k-- > 0;) {
    if (k % 2 == 1) {
      odd = odd * mu * mu + kRecipGammaTaylor[k];
    } else {
      even = even * mu * mu + kRecipGammaTaylor[k];
    }
  }
  // 1/Gamma(1+mu) = even(mu^2) + mu * odd(mu^2)
  const double gampl = even + mu * odd;
  const double gammi = even - mu * odd;
  return {-odd, even, gampl, gammi};
}

inline double j_series(double nu, double x) {
  using ld = long double;
  const ld half = static_cast<ld>(x) / 2;
  ld term = std::pow(half, static_cast<ld>(nu)) / std::tgamma(static_cast<ld>(nu) + 1);
  ld sum = term;
  const ld q = -half * half;
  for (int k = 1; k < 2000; ++k) {
    term *= q / (static_cast<ld>(k) * (k + static_cast<ld>(nu)));
    sum += term;
    if (std::abs(term) <= std::numeric_limits<ld>::epsilon() * std::abs(sum)) break;
  }
  return static_cast<double>(sum);
}

// Steed's method, x >= 2. Returns {J_nu(x), J_nu'(x)}.
inline std::array<double, 2> j_steed(double nu, double x) {
  const int nl = std::max(0, static_cast<int>(nu - x + 1.5));
  const double mu = nu - nl;
  const double xi = 1.0 / x;
  const double xi2 = 2.0 * xi;
  const double w = xi2 / std::numbers::pi;
  const int maxit = 100000 + static_cast<int>(10 * x);

  // CF1: f = J_nu'/J_nu
  int isign = 1;
  double h = nu * xi;
  if (h < kTiny) h = kTiny;
  double b = xi2 * nu;
  double d = 0.0;
  double c = h;
  int i = 1;
  for (; i <= maxit; ++i) {
    b += xi2;
    d = b - d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = b - 1.0 / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = c * d;
    h *= del;
    if (d < 0.0) isign = -isign;
    if (std::abs(del - 1.0) < kEps) break;
  }
  if (i > maxit) throw std::runtime_error("bessel_j: CF1 failed to converge");

  // downward recurrence nu -> mu on an unnormalized solution
  double rjl = isign * 1e-30;
  double rjpl = h * rjl;
  double rjl1 = rjl;
  double rjp1 = rjpl;
  double fact = nu * xi;
  for (int l = nl; l >= 1; --l) {
    const double rjtemp = fact * rjl + rjpl;
    fact -= xi;
    rjpl = fact * rjtemp - rjl;
    rjl = rjtemp;
    if (std::abs(rjl) > 1e250) {
      rjl *= 1e-250;
      rjpl *= 1e-250;
      rjl1 *= 1e-250;
      rjp1 *= 1e-250;
    }
  }
  if (rjl == 0.0) rjl = kEps;
  const double f = rjpl / rjl;

  // CF2: p + iq = (J' + iY')/(J + iY) at order mu
  double a = 0.25 - mu * mu;
  double p = -0.5 * xi;
  double q = 1.0;
  const double br = 2.0 * x;
  double bi = 2.0;
  fact = a * xi / (p * p + q * q);
  double cr = br + q * fact;
  double ci = bi + p * fact;
  double den = br * br + bi * bi;
  double dr = br / den;
  double di = -bi / den;
  double dlr = cr * dr - ci * di;
  double dli = cr * di + ci * dr;
  double temp = p * dlr - q * dli;
  q = p * dli + q * dlr;
  p = temp;
  for (i = 2; i <= maxit; ++i) {
    a += 2 * (i - 1);
    bi += 2.0;
    dr = a * dr + br;
    di = a * di + bi;
    if (std::abs(dr) + std::abs(di) < kTiny) dr = kTiny;
    fact = a / (cr * cr + ci * ci);
    cr = br + cr * fact;
    ci = bi - ci * fact;
    if (std::abs(cr) + std::abs(ci) < kTiny) cr = kTiny;
    den = dr * dr + di * di;
    dr /= den;
    di /= -den;
    dlr = cr * dr - ci * di;
    dli = cr * di + ci * dr;
    temp = p * dlr - q * dli;
    q = p * dli + q * dlr;
    p = temp;
    if (std::abs(dlr - 1.0) + std::abs(dli) < kEps) break;
  }
  if (i > maxit) throw std::runtime_error("bessel_j: CF2 failed to converge");

  const double gam = (p - f) / q;
  double rjmu = std::sqrt(w / ((p - f) * gam + q));
  rjmu = std::copysign(rjmu, rjl);
  const double scale = rjmu / rjl;
  return {rjl1 * scale, rjp1 * scale};
}

inline bool use_j_series(double nu, double x) {
  return x < 2.0 || x <= 12.0 || 0.25 * x * x <= nu + 1.0;
}

inline double j_value(double nu, double x) {
  if (x == 0.0) return nu == 0.0 ? 1.0 : 0.0;
  if (use_j_series(nu, x)) return j_series(nu, x);
  return j_steed(nu, x)[0];
}

// K_nu(x), K_nu'(x) with a common exponential scale.
inline KPair k_pair(double nu, double x) {
  const int nl = static_cast<int>(nu + 0.5);
  const double mu = nu - nl;
  const double mu2 = mu * mu;
  const double xi = 1.0 / x;
  const double xi2 = 2.0 * xi;
  constexpr int maxit = 100000;
  double kmu = 0.0, k1 = 0.0;
  double log_scale = -x;

  if (x < 2.0) {
    const double x2 = 0.5 * x;
    const double pimu = std::numbers::pi * mu;
    const double fact = std::abs(pimu) < kEps ? 1.0 : pimu / std::sin(pimu);
    double d = -std::log(x2);
    double e = mu * d;
    const double fact2 = std::abs(e) < kEps ? 1.0 : std::sinh(e) / e;
    const TemmeGammas g = temme_gammas(mu);
    double ff = fact * (g.gam1 * std::cosh(e) + g.gam2 * fact2 * d);
    double sum = ff;
    e = std::exp(e);
    double p = 0.5 * e / g.gampl;
    double q = 0.5 / (e * g.gammi);
    double c = 1.0;
    d = x2 * x2;
    double sum1 = p;
    int i = 1;
    for (; i <= maxit; ++i) {
      ff = (i * ff + p + q) / (i * i - mu2);
      c *= d / i;
      p /= i - mu;
      q /= i + mu;
      const double del = c * ff;
      sum += del;
      const double del1 = c * (p - i * ff);
      sum1 += del1;
      if (std::abs(del) < std::abs(sum) * kEps) break;
    }
    if (i > maxit) throw std::runtime_error("bessel_k: series failed to converge");
    // exp(x) * K; x < 2 so no overflow
    const double ex = std::exp(x);
    kmu = sum * ex;
    k1 = sum1 * xi2 * ex;
  } else {
    double b = 2.0 * (1.0 + x);
    double d = 1.0 / b;
    double h = d;
    double delh = d;
    double q1 = 0.0;
    double q2 = 1.0;
    const double a1 = 0.25 - mu2;
    double q = a1;
    double c = a1;
    double a = -a1;
    double s = 1.0 + q * delh;
    int i = 2;
    for (; i <= maxit; ++i) {
      a -= 2 * (i - 1);
      c = -a * c / i;
      const double qnew = (q1 - b * q2) / a;
      q1 = q2;
      q2 = qnew;
      q += c * qnew;
      b += 2.0;
      d = 1.0 / (b + a * d);
      delh = (b * d - 1.0) * delh;
      h += delh;
      const double dels = q * delh;
      s += dels;
      if (std::abs(dels / s) < kEps) break;
    }
    if (i > maxit) throw std::runtime_error("bessel_k: CF2 failed to converge");
    h = a1 * h;
    kmu = std::sqrt(std::numbers::pi / (2.0 * x)) / s;
    k1 = kmu * (mu + x + 0.5 - h) * xi;
  }

  // upward recurrence mu -> nu, rescaling to stay finite
  constexpr double kBig = 1e250;
  for (int i = 1; i <= nl; ++i) {
    const double ktemp = (mu + i) * xi2 * k1 + kmu;
    kmu = k1;
    k1 = ktemp;
    if (std::abs(k1) > kBig) {
      kmu /= kBig;
      k1 /= kBig;
      log_scale += std::log(kBig);
    }
  }
  // K_nu' = (nu/x) K_nu - K_{nu+1}
  return {kmu, nu * xi * kmu - k1, log_scale};
}

}  // namespace detail

/// J_nu(x) for x >= 0.
inline double bessel_j(BesselOrder order, double x) {
  if (!(x >= 0.0) || !std::isfinite(x)) throw std::domain_error("bessel_j: argument must be >= 0");
  return detail::j_value(order.value(), x);
}

/// J_nu'(x) from the three-term relations; J_0' = -J_1.
inline double bessel_j_derivative(BesselOrder order, double x) {
  if (!(x >= 0.0) || !std::isfinite(x)) {
    throw std::domain_error("bessel_j_derivative: argument must be >= 0");
  }
  const double nu = order.value();
  if (nu == 0.0) return -detail::j_value(1.0, x);
  if (x == 0.0) {
    if (nu == 1.0) return 0.5;
    if (nu > 1.0) return 0.0;
    return std::numeric_limits<double>::infinity();
  }
  if (nu >= 1.0) return 0.5 * (detail::j_value(nu - 1.0, x) - detail::j_value(nu + 1.0, x));
  return nu / x * detail::j_value(nu, x) - detail::j_value(nu + 1.0, x);
}

/// K_nu(x) for x > 0, returned with its exponential scale.
inline ScaledValue bessel_k_scaled(BesselOrder order, double x) {
  if (!(x > 0.0) || !std::isfinite(x)) throw std::domain_error("bessel_k: argument must be > 0");
  const KPair kp = detail::k_pair(order.value(), x);
  return ScaledValue::from(kp.k, kp.log_scale);
}

/// K_nu'(x) = -(K_{nu-1}(x) + K_{nu+1}(x))/2, with K_{-nu} = K_nu.
inline ScaledValue bessel_k_derivative_scaled(BesselOrder order, double x) {
  if (!(x > 0.0) || !std::isfinite(x)) throw std::domain_error("bessel_k: argument must be > 0");
  const KPair kp = detail::k_pair(order.value(), x);
  return ScaledValue::from(kp.kp, kp.log_scale);
}

/// K_nu(x) and K_nu'(x) with one shared scale; the form the secular
/// determinants consume.
inline KPair bessel_k_pair(BesselOrder order, double x) {
  if (!(x > 0.0) || !std::isfinite(x)) throw std::domain_error("bessel_k: argument must be > 0");
  return detail::k_pair(order.value(), x);
}

namespace detail {

inline double mcmahon_guess(double nu, int l) {
  const double beta = (l + 0.5 * nu - 0.25) * std::numbers::pi;
  const double m = 4.0 * nu * nu;
  const double b8 = 8.0 * beta;
  return beta - (m - 1.0) / b8 - 4.0 * (m - 1.0) * (7.0 * m - 31.0) / (3.0 * b8 * b8 * b8);
}

// Root of J_nu in the sign-change bracket [lo, hi]; Newton safeguarded by
// bisection.
inline double refine_j_zero(double nu, double lo, double hi, double guess) {
  const BesselOrder order(nu);
  double flo = j_value(nu, lo);
  double x = (guess > lo && guess < hi) ? guess : 0.5 * (lo + hi);
  for (int it = 0; it < 200; ++it) {
    const double fx = j_value(nu, x);
    if (fx == 0.0) return x;
    if ((fx > 0.0) == (flo > 0.0)) {
      lo = x;
      flo = fx;
    } else {
      hi = x;
    }
    const double dfx = bessel_j_derivative(order, x);
    double next = x - fx / dfx;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    const double step = std::abs(next - x);
    x = next;
    if (step <= 2.0 * std::numeric_limits<double>::epsilon() * x || hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * hi) {
      break;
    }
  }
  return x;
}

}  // namespace detail

namespace detail {

// Walks the positive zeros of J_nu in increasing order.
class ZeroWalker {
 public:
  explicit ZeroWalker(double nu) : nu_(nu) {}

  double next() {
    // J_nu > 0 on (0, max(nu, 1)]; consecutive zeros are more than 2 apart,
    // so a unit step never skips one.
    constexpr double kStep = 1.0;
    double x = found_ == 0 ? std::max(nu_, 1.0) : last_ + kStep;
    double fx = j_value(nu_, x);
    for (;;) {
      const double xn = x + kStep;
      const double fn = j_value(nu_, xn);
      if ((fn > 0.0) != (fx > 0.0) || fn == 0.0) {
        ++found_;
        last_ = refine_j_zero(nu_, x, xn, mcmahon_guess(nu_, found_));
        return last_;
      }
      x = xn;
      fx = fn;
    }
  }

 private:
  double nu_;
  int found_ = 0;
  double last_ = 0.0;
};

}  // namespace detail

/// The first `count` positive zeros j_{nu,1} < ... < j_{nu,count} of J_nu.
inline std::vector<double> bessel_j_zeros(BesselOrder order, int count) {
  if (count < 0) throw std::domain_error("bessel_j_zeros: count must be >= 0");
  detail::ZeroWalker walk(order.value());
  std::vector<double> zeros;
  zeros.reserve(static_cast<std::size_t>(count));
  for (int l = 1; l <= count; ++l) zeros.push_back(walk.next());
  return zeros;
}

/// All positive zeros of J_nu up to x_max, followed by the first one beyond.
inline std::vector<double> bessel_j_zeros_through(BesselOrder order, double x_max) {
  detail::ZeroWalker walk(order.value());
  std::vector<double> zeros;
  do {
    zeros.push_back(walk.next());
  } while (zeros.back() <= x_max);
  return zeros;
}

/// j_{nu,l}, the l-th positive zero of J_nu.
inline double bessel_j_zero(BesselOrder order, int l) {
  if (l < 1) throw std::domain_error("bessel_j_zero: index must be >= 1");
  return bessel_j_zeros(order, l).back();
}

}  // namespace pwell::special
