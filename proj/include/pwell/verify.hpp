#pragma once

// Self-checks behind `pwell verify` and the acceptance binary. Each check
// returns a measured detail string; tolerances are fixed here, not tunable.

#include <chrono>
#include <cmath>
#include <functional>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "pwell/asymptotics.hpp"
#include "pwell/dirichlet.hpp"
#include "pwell/experiments.hpp"
#include "pwell/fit.hpp"
#include "pwell/oracle.hpp"
#include "pwell/secular.hpp"
#include "pwell/special.hpp"

namespace pwell::verify {

struct CheckResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

struct VerifyOptions {
  bool quick = false;
  double perturb_zero = 0.0;  // shifts the Bessel zeros used by the Rellich check
};

namespace detail {

inline std::string sci(double v) {
  std::ostringstream os;
  os.precision(3);
  os << std::scientific << v;
  return os.str();
}

inline std::string fix(double v, int digits = 3) {
  std::ostringstream os;
  os.precision(digits);
  os << std::fixed << v;
  return os.str();
}

template <class F>
CheckResult timed(int id, std::string name, F&& body) {
  CheckResult r;
  r.id = id;
  r.name = std::move(name);
  const auto t0 = std::chrono::steady_clock::now();
  try {
    body(r);
  } catch (const std::exception& e) {
    r.pass = false;
    r.detail += std::string(r.detail.empty() ? "" : "; ") + "exception: " + e.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

inline std::string domain_tag(const WellDomain& d) {
  return d.is_interval() ? "interval" : "ball d=" + std::to_string(d.dim);
}

}  // namespace detail

// 1: lambda_D - lambda_h > 0, strictly decreasing as h -> 0.
inline CheckResult check_dirichlet_limit(const VerifyOptions& = {}) {
  return detail::timed(1, "dirichlet limit", [](CheckResult& r) {
    const std::vector<double> hs{0.4, 0.2, 0.1, 0.05, 0.025};
    bool ok = true;
    double worst_ratio = 0.0;
    int branches_cut = 0;
    for (const WellDomain& dom : {WellDomain::interval(2.0), WellDomain::ball(2, 2.0)}) {
      const auto rows = experiments::sweep(dom, hs, 9);
      std::map<int, std::vector<experiments::FigureRow>> by_j;
      for (const auto& row : rows) by_j[row.j].push_back(row);  // h ascending
      if (by_j.size() != 9) {
        ok = false;
        r.detail += detail::domain_tag(dom) + ": missing modes; ";
      }
      for (auto& [j, seq] : by_j) {
        if (seq.front().h != 0.025) {
          ok = false;
          r.detail += detail::domain_tag(dom) + " j=" + std::to_string(j) + " absent at h=0.025; ";
          continue;
        }
        if (seq.size() < hs.size()) ++branches_cut;
        for (std::size_t i = 0; i < seq.size(); ++i) {
          if (!(seq[i].diff > 0.0)) ok = false;
          if (i + 1 < seq.size() && !(seq[i].diff < seq[i + 1].diff)) ok = false;
        }
        const double ratio = seq.front().diff / seq.front().lambda_D;
        worst_ratio = std::max(worst_ratio, ratio);
        if (ratio > 0.05) ok = false;
      }
    }
    r.pass = ok;
    r.detail += "max (lD-lh)/lD at h=0.025: " + detail::fix(worst_ratio, 4) + " (<= 0.05); " +
                std::to_string(branches_cut) + " branches not yet born at h=0.4";
  });
}

// 2: (lambda_D - lambda_h)/h -> |d_nu u|^2, remainder O(h^2).
inline CheckResult check_first_order(const VerifyOptions& = {}) {
  return detail::timed(2, "first-order coefficient", [](CheckResult& r) {
    const std::vector<double> hs = fit::geometric(0.005, 0.05, 10);
    struct Case {
      WellDomain dom;
      Mode mode;
      std::string tag;
    };
    const std::vector<Case> cases{{WellDomain::ball(2, 2.0), Mode{0, 1}, "disk nu=0 l=1"},
                                  {WellDomain::interval(2.0), Mode::interval_index(1), "n=1"},
                                  {WellDomain::interval(2.0), Mode::interval_index(2), "n=2"},
                                  {WellDomain::interval(2.0), Mode::interval_index(3), "n=3"}};
    bool ok = true;
    for (const Case& c : cases) {
      const auto e = experiments::expansion_fit(c.dom, c.mode, hs);
      const double target = 2.0 * e.lambda_D / c.dom.radius;
      const bool formula = std::abs(-e.lambda1 - target) <= 1e-10 * target;
      const bool good = formula && e.intercept_rel_err <= 0.01 &&
                        std::abs(e.remainder_slope - 2.0) <= 0.2;
      ok = ok && good;
      r.detail += c.tag + ": intercept rel err " + detail::sci(e.intercept_rel_err) +
                  ", remainder slope " + detail::fix(e.remainder_slope) + "; ";
    }
    r.pass = ok;
  });
}

// 3: Rellich identity on balls.
inline CheckResult check_rellich(const VerifyOptions& opt = {}) {
  return detail::timed(3, "rellich identity", [&](CheckResult& r) {
    double worst = 0.0;
    int count = 0;
    for (int d : {2, 3}) {
      for (double a : {1.0, 2.0}) {
        const WellDomain dom = WellDomain::ball(d, a);
        for (int nu = 0;; ++nu) {
          const double mu = nu + 0.5 * d - 1.0;
          const auto zeros = special::bessel_j_zeros_through(special::BesselOrder(mu), 10.0 * a);
          if (zeros.front() > 10.0 * a) break;
          for (std::size_t l = 0; l < zeros.size() && zeros[l] <= 10.0 * a; ++l) {
            const Mode m{nu, static_cast<int>(l) + 1};
            worst = std::max(worst, dirichlet::rellich_check(dom, m, opt.perturb_zero));
            ++count;
          }
        }
      }
    }
    r.pass = worst <= 1e-8;
    r.detail = std::to_string(count) + " modes, max rel err " + detail::sci(worst) + " (<= 1e-8)";
    if (opt.perturb_zero != 0.0) r.detail += ", zeros shifted by " + detail::sci(opt.perturb_zero);
  });
}

// 4: FD oracle against secular roots.
inline CheckResult check_oracle(const VerifyOptions& = {}) {
  return detail::timed(4, "oracle cross-validation", [](CheckResult& r) {
    double worst_rel = 0.0, rmin = 1e300, rmax = 0.0;
    int compared = 0;
    for (double h : {0.3, 0.15}) {
      secular::SpectrumOptions so;
      so.extended = true;
      const WellParams params(h);
      {
        const WellDomain dom = WellDomain::interval(2.0);
        const auto sec = secular::solve_spectrum(dom, params, so);
        oracle::SpectrumRequest req;
        req.count = 5;
        const auto fd = oracle::fd_line_spectrum(2.0, h, {}, req);
        for (int i = 0; i < 5 && i < static_cast<int>(sec.size()); ++i) {
          const double s = sec[i].lambda;
          worst_rel = std::max(worst_rel, std::abs(fd.richardson[i] - s) / s);
          const double ratio = (fd.eigenvalues[i] - s) / (fd.refined[i] - s);
          ++compared;
          rmin = std::min(rmin, ratio);
          rmax = std::max(rmax, ratio);
        }
      }
      {
        const WellDomain dom = WellDomain::ball(2, 2.0);
        const auto sec = secular::solve_spectrum(dom, params, so);
        for (int i = 0; i < 5 && i < static_cast<int>(sec.size()); ++i) {
          const Mode m = sec[i].mode;
          oracle::SpectrumRequest req;
          req.count = m.l;
          const auto fd = oracle::fd_radial_spectrum(2, m.nu, 2.0, h, {}, req);
          const double s = sec[i].lambda;
          const int k = m.l - 1;
          worst_rel = std::max(worst_rel, std::abs(fd.richardson[k] - s) / s);
          const double ratio = (fd.eigenvalues[k] - s) / (fd.refined[k] - s);
          ++compared;
          rmin = std::min(rmin, ratio);
          rmax = std::max(rmax, ratio);
        }
      }
    }
    r.pass = compared == 20 && worst_rel <= 1e-4 && rmin >= 3.6 && rmax <= 4.4;
    r.detail = std::to_string(compared) + "/20 eigenvalues, max rel err " + detail::sci(worst_rel) + " (<= 1e-4), error ratio in [" +
               detail::fix(rmin) + ", " + detail::fix(rmax) + "] (within [3.6, 4.4])";
  });
}

// 5: the model operator and its Green function.
inline CheckResult check_model_operator(const VerifyOptions& = {}) {
  return detail::timed(5, "model operator", [](CheckResult& r) {
    const double g = 1.7;
    const auto f = [&](double s) { return g * asymptotics::model_green(s); };
    const auto pot = [](double s) { return s > 0.0 ? 1.0 : 0.0; };
    const auto d2 = [&](double s, double step) {
      return (f(s + step) - 2.0 * f(s) + f(s - step)) / (step * step);
    };
    double worst_res = 0.0;
    for (double s = -5.0; s <= 10.0 + 1e-12; s += 0.05) {
      if (std::abs(s) < 0.05 - 1e-12) continue;
      const double lap = (4.0 * d2(s, 0.005) - d2(s, 0.01)) / 3.0;
      worst_res = std::max(worst_res, std::abs(-lap + pot(s) * f(s)));
    }
    // one-sided fourth-order derivatives at 0
    const double st = 1e-3;
    auto one_sided = [&](double sign) {
      const double f0 = sign > 0 ? g : f(0.0);
      return sign * (-25.0 * f0 + 48.0 * f(sign * st) - 36.0 * f(sign * 2 * st) +
                     16.0 * f(sign * 3 * st) - 3.0 * f(sign * 4 * st)) /
             (12.0 * st);
    };
    const double jump = one_sided(1.0) - one_sided(-1.0);
    const double jump_err = std::abs(jump + g);

    // the solver on a pure delta and on the closed-form right side
    asymptotics::LayerRHS delta_rhs;
    delta_rhs.delta_coeff = g;
    const auto ud = asymptotics::model_solve(delta_rhs);
    double solver_err = std::abs(ud.derivative(0.0) + g);
    for (double s = -2.0; s <= 10.0; s += 0.25) solver_err = std::max(solver_err, std::abs(ud(s) - f(s)));

    asymptotics::LayerRHS exp_rhs;
    exp_rhs.smooth = [](double s) { return std::exp(-s); };
    const auto ue = asymptotics::model_solve(exp_rhs);
    double closed_err = std::abs(ue.left_value() - 0.5);
    for (double s = 0.01; s <= 30.0; s += 0.173) {
      closed_err = std::max(closed_err, std::abs(ue(s) - 0.5 * (s + 1.0) * std::exp(-s)));
    }
    r.pass = worst_res <= 1e-8 && jump_err <= 1e-8 && solver_err <= 1e-8 && closed_err <= 1e-8;
    r.detail = "residual off origin " + detail::sci(worst_res) + ", jump err " +
               detail::sci(jump_err) + ", delta solve err " + detail::sci(solver_err) +
               ", closed form err " + detail::sci(closed_err) + " (all <= 1e-8)";
  });
}

// 6: the Grushin multiplier is the boundary norm.
inline CheckResult check_grushin(const VerifyOptions& = {}) {
  return detail::timed(6, "grushin consistency", [](CheckResult& r) {
    double worst = 0.0;
    for (const WellDomain& dom : {WellDomain::interval(2.0), WellDomain::ball(2, 2.0)}) {
      const Mode m{0, 1};
      const dirichlet::SectorBasis basis(dom, 0, asymptotics::kGrushinModes);
      const auto f = asymptotics::collar_load(basis, m, asymptotics::default_collar(dom));
      const auto sol = asymptotics::grushin_solve(basis, m, f);
      const double err = std::abs(sol.gamma + asymptotics::first_order_coefficient(dom, m));
      worst = std::max(worst, err);
      r.detail += detail::domain_tag(dom) + ": gamma " + detail::fix(sol.gamma, 10) + "; ";
    }
    r.pass = worst <= 1e-6;
    r.detail += "max |gamma - |d_nu u|^2| " + detail::sci(worst) + " (<= 1e-6)";
  });
}

// 7: degenerate disk pairs have a scalar splitting matrix.
inline CheckResult check_splitting(const VerifyOptions& = {}) {
  return detail::timed(7, "splitting matrix", [](CheckResult& r) {
    const WellDomain dom = WellDomain::ball(2, 2.0);
    bool ok = true;
    double off = 0.0, diag_gap = 0.0, diag_err = 0.0, quad_err = 0.0;
    for (int nu : {1, 2, 3}) {
      const Mode m{nu, 1};
      const auto s = asymptotics::splitting_matrix(dom, m, asymptotics::standard_basis(dom, m));
      const double target = 2.0 * dirichlet::dirichlet_eigenvalue(dom, m) / dom.radius;
      off = std::max(off, std::max(std::abs(s.entries[0][1]), std::abs(s.entries[1][0])));
      diag_gap = std::max(diag_gap, std::abs(s.entries[0][0] - s.entries[1][1]));
      diag_err = std::max(diag_err, std::max(std::abs(s.entries[0][0] - target),
                                             std::abs(s.entries[1][1] - target)));
      ok = ok && s.degenerate;
      // independent angular pairing: trapezoid on the circle
      const dirichlet::DirichletMode u(dom, m);
      const double up = u.derivative(dom.radius);
      const int n = 256;
      double a[2][2] = {{0, 0}, {0, 0}};
      for (int k = 0; k < n; ++k) {
        const double phi = 2.0 * std::numbers::pi * k / n;
        const double y[2] = {std::cos(nu * phi) / std::sqrt(std::numbers::pi),
                             std::sin(nu * phi) / std::sqrt(std::numbers::pi)};
        for (int i = 0; i < 2; ++i) {
          for (int j = 0; j < 2; ++j) {
            a[i][j] += up * up * y[i] * y[j] * dom.radius * 2.0 * std::numbers::pi / n;
          }
        }
      }
      for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) quad_err = std::max(quad_err, std::abs(a[i][j] - s.entries[i][j]));
      }
    }
    r.pass = ok && off <= 1e-10 && diag_gap <= 1e-10 && diag_err <= 1e-8 && quad_err <= 1e-10;
    r.detail = "|A12| " + detail::sci(off) + ", |A11-A22| " + detail::sci(diag_gap) +
               " (<= 1e-10), |Aii - 2lD/a| " + detail::sci(diag_err) +
               " (<= 1e-8), circle quadrature " + detail::sci(quad_err);
  });
}

// 8: order-1 quasimodes sit O(h^2) from the spectrum.
inline CheckResult check_quasimode(const VerifyOptions& opt = {}) {
  return detail::timed(8, "quasimode to spectrum", [&](CheckResult& r) {
    const std::vector<double> hs{0.2, 0.1, 0.05, 0.025};
    std::vector<WellDomain> doms{WellDomain::interval(2.0)};
    if (!opt.quick) doms.push_back(WellDomain::ball(2, 2.0));
    bool ok = true;
    for (const WellDomain& dom : doms) {
      const auto st = experiments::quasimode_study(dom, Mode{0, 1}, 1, hs);
      bool bound = true;
      for (const auto& row : st.rows) bound = bound && row.l2_bound;
      const bool good = st.distance_slope >= 1.8 && bound && st.ratio_spread <= 10.0;
      ok = ok && good;
      r.detail += detail::domain_tag(dom) + ": slope " + detail::fix(st.distance_slope) +
                  " (>= 1.8), K " + detail::fix(st.fitted_k) + ", ratio spread " +
                  detail::fix(st.ratio_spread, 2) + ", L2 bound " + (bound ? "ok" : "violated") +
                  "; ";
    }
    if (opt.quick) r.detail += "disk skipped (quick)";
    r.pass = ok;
  });
}

// 9: regenerated curve data.
inline CheckResult check_sweep(const VerifyOptions& = {}) {
  return detail::timed(9, "figure regeneration", [](CheckResult& r) {
    const std::vector<double> hs = fit::geometric(0.02, 0.5, 40);
    bool ok = true;
    double worst_neg = 0.0, rmin = 1e300, rmax = 0.0;
    int mono_fail = 0;
    for (const WellDomain& dom : {WellDomain::interval(2.0), WellDomain::ball(2, 2.0)}) {
      const auto rows = experiments::sweep(dom, hs, 9);
      std::ostringstream a, b;
      experiments::write_sweep_csv(a, rows);
      experiments::write_sweep_csv(b, experiments::sweep(dom, hs, 9));
      if (a.str() != b.str()) {
        ok = false;
        r.detail += detail::domain_tag(dom) + ": CSV differs between runs; ";
      }
      std::map<int, std::vector<experiments::FigureRow>> by_j;
      for (const auto& row : rows) {
        worst_neg = std::min(worst_neg, row.diff);
        if (row.diff < -1e-12 || row.lambda_h > row.lambda_D + 1e-12) ok = false;
        by_j[row.j].push_back(row);
      }
      if (by_j.size() != 9) ok = false;
      for (auto& [j, seq] : by_j) {
        for (std::size_t i = 0; i + 1 < seq.size(); ++i) {
          // lambda_h is non-increasing in h: the curve climbs towards lambda_D as h falls
          if (seq[i + 1].lambda_h > seq[i].lambda_h + 1e-12) ++mono_fail;
        }
        if (std::abs(seq.front().h - hs.back()) > 1e-15) {
          ok = false;
          continue;
        }
        const double q = seq.front().diff / (seq.front().h * seq.front().lambda_D);
        rmin = std::min(rmin, q);
        rmax = std::max(rmax, q);
      }
    }
    ok = ok && mono_fail == 0 && rmin >= 0.9 && rmax <= 1.1;
    r.pass = ok;
    r.detail += "min diff " + detail::sci(worst_neg) + ", monotonicity violations " +
                std::to_string(mono_fail) + ", diff/(h lD) at h=0.02 in [" + detail::fix(rmin) +
                ", " + detail::fix(rmax) + "] (within [0.9, 1.1])";
  });
}

// 10: special-function properties.
inline CheckResult check_special(const VerifyOptions& = {}) {
  return detail::timed(10, "special functions", [](CheckResult& r) {
    using special::BesselOrder;
    double closed = 0.0;
    for (double x = 0.05; x <= 60.0; x *= 1.07) {
      const double s = std::sin(x), c = std::cos(x);
      const double pre = std::sqrt(2.0 / (std::numbers::pi * x));
      closed = std::max(closed, std::abs(special::bessel_j(BesselOrder(0.5), x) - pre * s));
      closed = std::max(closed, std::abs(special::bessel_j(BesselOrder(1.5), x) - pre * (s / x - c)));
      closed = std::max(closed, std::abs(special::bessel_j(BesselOrder(2.5), x) -
                                         pre * ((3.0 / (x * x) - 1.0) * s - 3.0 * c / x)));
      // K_{1/2}, K_{3/2} relative, compared in the exp(x)-scaled form
      const double k12 = std::sqrt(std::numbers::pi / (2.0 * x));
      const double k32 = k12 * (1.0 + 1.0 / x);
      const double kh = special::bessel_k_scaled(BesselOrder(0.5), x).value_times_exp(x);
      const double k3 = special::bessel_k_scaled(BesselOrder(1.5), x).value_times_exp(x);
      closed = std::max(closed, std::abs(kh / k12 - 1.0));
      closed = std::max(closed, std::abs(k3 / k32 - 1.0));
    }
    bool interlace = true;
    double zero_res = 0.0;
    for (double nu = 0.0; nu <= 10.0; nu += 0.5) {
      const auto z = special::bessel_j_zeros(BesselOrder(nu), 21);
      const auto z1 = special::bessel_j_zeros(BesselOrder(nu + 1.0), 20);
      for (int l = 0; l < 20; ++l) {
        if (!(z[l] < z1[l] && z1[l] < z[l + 1])) interlace = false;
        zero_res = std::max(zero_res, std::abs(special::bessel_j(BesselOrder(nu), z[l])));
      }
    }
    double deriv = 0.0;
    const double step = 1e-5;
    for (double nu : {0.0, 0.5, 1.0, 2.5, 7.0, 20.0}) {
      for (double x : {0.3, 1.0, 2.5, 7.0, 19.0, 40.0}) {
        const BesselOrder o(nu);
        const double fd = (special::bessel_j(o, x + step) - special::bessel_j(o, x - step)) / (2 * step);
        deriv = std::max(deriv, std::abs(fd - special::bessel_j_derivative(o, x)));
        const auto kp = special::bessel_k_pair(o, x);
        const double kplus = special::bessel_k_scaled(o, x + step).value_times_exp(x);
        const double kminus = special::bessel_k_scaled(o, x - step).value_times_exp(x);
        const double kfd = (kplus - kminus) / (2 * step);
        const double kval = kp.kp * std::exp(kp.log_scale + x);
        deriv = std::max(deriv, std::abs(kfd - kval) / std::max(1.0, std::abs(kval)));
      }
    }
    r.pass = closed <= 1e-12 && interlace && zero_res <= 1e-12 && deriv <= 1e-6;
    r.detail = "half-integer closed forms " + detail::sci(closed) + " (<= 1e-12), interlacing " +
               (interlace ? "ok" : "violated") + ", |J(j_nu,l)| " + detail::sci(zero_res) +
               ", derivative vs difference " + detail::sci(deriv) + " (<= 1e-6)";
  });
}

inline const std::vector<std::function<CheckResult(const VerifyOptions&)>>& all_checks() {
  static const std::vector<std::function<CheckResult(const VerifyOptions&)>> checks{
      check_dirichlet_limit, check_first_order, check_rellich,  check_oracle,
      check_model_operator,  check_grushin,     check_splitting, check_quasimode,
      check_sweep,           check_special};
  return checks;
}

/// Runs every check (quick: the disk quasimode study is skipped).
inline std::vector<CheckResult> run_all(const VerifyOptions& opt = {}) {
  std::vector<CheckResult> out;
  for (const auto& c : all_checks()) out.push_back(c(opt));
  return out;
}

inline std::string format_line(const CheckResult& r) {
  std::ostringstream os;
  os << (r.pass ? "PASS" : "FAIL") << " [" << r.id << "] " << r.name << ": " << r.detail << " ("
     << detail::fix(r.seconds, 2) << " s)";
  return os.str();
}

}  // namespace pwell::verify
