#pragma once

// Small least-squares helpers for convergence rates and extrapolations.

#include <cmath>
#include <stdexcept>
#include <vector>

namespace pwell::fit {

struct Line {
  double intercept = 0.0;
  double slope = 0.0;
};

/// Ordinary least squares y ~ intercept + slope * x.
inline Line linear(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw std::invalid_argument("linear fit needs two or more (x, y) pairs");
  }
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (!(sxx > 0.0)) throw std::invalid_argument("linear fit: x values are all equal");
  Line l;
  l.slope = sxy / sxx;
  l.intercept = my - l.slope * mx;
  return l;
}

/// Slope of log|y| against log x.
inline double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || y[i] == 0.0) throw std::invalid_argument("log-log fit of a zero value");
    lx.push_back(std::log(x[i]));
    ly.push_back(std::log(std::abs(y[i])));
  }
  return linear(lx, ly).slope;
}

/// count points from hi down to lo, equally spaced in log h (hi first).
inline std::vector<double> geometric(double lo, double hi, int count) {
  if (count < 1 || !(lo > 0.0) || !(hi >= lo)) throw std::invalid_argument("bad geometric range");
  if (count == 1) return {hi};
  std::vector<double> out;
  for (int i = 0; i < count; ++i) {
    out.push_back(std::exp(std::log(hi) + (std::log(lo) - std::log(hi)) * i / (count - 1)));
  }
  out.front() = hi;
  out.back() = lo;
  return out;
}

}  // namespace pwell::fit
