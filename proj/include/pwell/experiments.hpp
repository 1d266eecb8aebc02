#pragma once

// Experiment drivers shared by the command-line tool and the checks: the
// labelled h-sweep behind the eigenvalue-curve plots, the first-order fit,
// and the quasimode-versus-oracle study.

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "pwell/asymptotics.hpp"
#include "pwell/dirichlet.hpp"
#include "pwell/fit.hpp"
#include "pwell/io.hpp"
#include "pwell/oracle.hpp"
#include "pwell/parallel.hpp"
#include "pwell/secular.hpp"
#include "pwell/types.hpp"

namespace pwell::experiments {

// ------------------------------------------------------------- mode labels

struct LabeledMode {
  int j = 0;  // 1-based, one label per sector mode (not per multiplicity)
  Mode mode;
  double lambda_D = 0.0;
  int multiplicity = 1;
};

/// The first `count` Dirichlet sector modes sorted by (lambda_D, nu, parity),
/// restricted to nu <= nu_max.
inline std::vector<LabeledMode> labeled_modes(const WellDomain& domain, int count,
                                              int nu_max = 200) {
  if (count < 1) throw std::invalid_argument("mode count must be >= 1");
  std::vector<LabeledMode> all;
  const int last = domain.is_interval() ? std::min(nu_max, 1) : nu_max;
  for (int nu = 0; nu <= last; ++nu) {
    const double first = dirichlet::dirichlet_eigenvalue(domain, Mode{nu, 1});
    if (static_cast<int>(all.size()) >= count) {
      std::vector<double> lams;
      for (const auto& m : all) lams.push_back(m.lambda_D);
      std::nth_element(lams.begin(), lams.begin() + (count - 1), lams.end());
      if (first > lams[count - 1]) break;
    }
    for (int l = 1; l <= count; ++l) {
      const Mode m{nu, l};
      all.push_back({0, m, dirichlet::dirichlet_eigenvalue(domain, m),
                     harmonic_multiplicity(domain, nu)});
    }
  }
  std::sort(all.begin(), all.end(), [&](const LabeledMode& x, const LabeledMode& y) {
    if (x.lambda_D != y.lambda_D) return x.lambda_D < y.lambda_D;
    return x.mode.nu < y.mode.nu;
  });
  all.resize(std::min<std::size_t>(all.size(), static_cast<std::size_t>(count)));
  for (std::size_t i = 0; i < all.size(); ++i) all[i].j = static_cast<int>(i) + 1;
  return all;
}

// ------------------------------------------------------------------- sweep

struct FigureRow {
  double h = 0.0;
  int j = 0;
  int nu = 0;
  int l = 0;
  std::string parity;
  int multiplicity = 1;
  double lambda_h = 0.0;
  double lambda_D = 0.0;
  double diff = 0.0;
  double first_order = 0.0;  // h |d_nu u|^2
};

inline const std::vector<std::string>& figure_columns() {
  static const std::vector<std::string> cols{"h",        "j",        "nu",       "l",
                                             "parity",   "multiplicity", "lambda_h", "lambda_D",
                                             "diff",     "first_order"};
  return cols;
}

/// Rows for every h and labelled mode whose branch exists in (0, h^-2).
/// Output is sorted by (h ascending, j).
inline std::vector<FigureRow> sweep(const WellDomain& domain, std::vector<double> hs, int count,
                                    int nu_max = 200) {
  const std::vector<LabeledMode> modes = labeled_modes(domain, count, nu_max);
  std::sort(hs.begin(), hs.end());
  hs.erase(std::unique(hs.begin(), hs.end()), hs.end());
  std::vector<double> nd(modes.size());
  for (std::size_t i = 0; i < modes.size(); ++i) {
    nd[i] = dirichlet::normal_derivative_norm(domain, modes[i].mode).normal_derivative_norm_sq;
  }
  auto per_h = parallel::map<std::vector<FigureRow>>(hs.size(), [&](std::size_t k) {
    const WellParams params(hs[k]);
    const secular::Window window = secular::search_window(params, 0.0, true);
    std::map<int, std::vector<Eigenvalue>> sectors;
    std::vector<FigureRow> rows;
    for (std::size_t i = 0; i < modes.size(); ++i) {
      const LabeledMode& lm = modes[i];
      auto it = sectors.find(lm.mode.nu);
      if (it == sectors.end()) {
        it = sectors.emplace(lm.mode.nu, secular::solve_sector(domain, params, lm.mode.nu, window))
                 .first;
      }
      if (static_cast<int>(it->second.size()) < lm.mode.l) continue;
      const double lh = it->second[static_cast<std::size_t>(lm.mode.l - 1)].lambda;
      FigureRow row;
      row.h = params.h;
      row.j = lm.j;
      row.nu = lm.mode.nu;
      row.l = lm.mode.l;
      row.parity = parity_label(domain, lm.mode);
      row.multiplicity = lm.multiplicity;
      row.lambda_h = lh;
      row.lambda_D = lm.lambda_D;
      row.diff = lm.lambda_D - lh;
      row.first_order = params.h * nd[i];
      rows.push_back(std::move(row));
    }
    return rows;
  });
  std::vector<FigureRow> out;
  for (auto& v : per_h) out.insert(out.end(), v.begin(), v.end());
  return out;
}

inline void write_sweep_csv(std::ostream& os, const std::vector<FigureRow>& rows) {
  io::write_csv_header(os, figure_columns());
  for (const FigureRow& r : rows) {
    io::write_csv_row(os, {r.h, r.j, r.nu, r.l, r.parity, r.multiplicity, r.lambda_h, r.lambda_D,
                           r.diff, r.first_order});
  }
}

inline nlohmann::json sweep_json(const std::vector<FigureRow>& rows) {
  nlohmann::json arr = nlohmann::json::array();
  for (const FigureRow& r : rows) {
    arr.push_back({{"h", r.h},
                   {"j", r.j},
                   {"nu", r.nu},
                   {"l", r.l},
                   {"parity", r.parity},
                   {"multiplicity", r.multiplicity},
                   {"lambda_h", r.lambda_h},
                   {"lambda_D", r.lambda_D},
                   {"diff", r.diff},
                   {"first_order", r.first_order}});
  }
  return arr;
}

// -------------------------------------------------------- first-order fit

struct ExpansionFit {
  double lambda_D = 0.0;
  double lambda1 = 0.0;          // -|d_nu u|^2
  double fitted_intercept = 0.0;  // of (lambda_D - lambda_h)/h against h
  double intercept_rel_err = 0.0;
  double remainder_slope = 0.0;  // log-log slope of |lambda_h - lambda_D - h lambda1|
  std::vector<double> hs;
  std::vector<double> lambda_h;
  std::vector<double> remainder;
};

/// Fits the secular eigenvalue of a simple mode against lambda_D + h lambda1.
inline ExpansionFit expansion_fit(const WellDomain& domain, const Mode& mode,
                                  const std::vector<double>& hs) {
  ExpansionFit e;
  e.lambda1 = asymptotics::first_order_coefficient(domain, mode);
  e.lambda_D = dirichlet::dirichlet_eigenvalue(domain, mode);
  std::vector<double> q;
  for (double h : hs) {
    const auto ev = secular::solve_mode(domain, WellParams(h), mode, true);
    if (!ev) throw ScanError("mode has no eigenvalue at h = " + io::format_double(h));
    e.hs.push_back(h);
    e.lambda_h.push_back(ev->lambda);
    q.push_back((e.lambda_D - ev->lambda) / h);
    e.remainder.push_back(std::abs(ev->lambda - e.lambda_D - h * e.lambda1));
  }
  e.fitted_intercept = fit::linear(e.hs, q).intercept;
  e.intercept_rel_err = std::abs(e.fitted_intercept + e.lambda1) / std::abs(e.lambda1);
  e.remainder_slope = fit::loglog_slope(e.hs, e.remainder);
  return e;
}

// ---------------------------------------------------------- quasimodes

struct QuasimodeRow {
  double h = 0.0;
  double lambda_tilde = 0.0;
  double nearest = 0.0;  // nearest Richardson-extrapolated oracle eigenvalue
  double distance = 0.0;
  double l2 = 0.0;
  double hminus1 = 0.0;
  double delta_coeff = 0.0;
  double profile_norm = 0.0;  // discrete L^2 norm of the quasimode
  double ratio = 0.0;         // distance / hminus1
  bool l2_bound = false;      // distance <= l2 / norm (self-adjointness)
};

struct QuasimodeStudy {
  std::vector<QuasimodeRow> rows;
  double distance_slope = 0.0;
  double fitted_k = 0.0;  // max distance / H^-1 residual
  double ratio_spread = 0.0;
  double norm_slope = 0.0;  // log-log slope of |norm - 1|
  std::string caveat;
};

/// Oracle eigenvalues of the mode's sector, enough to include the mode itself.
inline std::vector<double> oracle_sector(const WellDomain& domain, const Mode& mode, double h) {
  oracle::SpectrumRequest req;
  if (domain.is_interval()) {
    req.count = mode.interval_n() + 2;
    return oracle::fd_line_spectrum(domain.radius, h, {}, req).richardson;
  }
  req.count = mode.l + 2;
  return oracle::fd_radial_spectrum(domain.dim, mode.nu, domain.radius, h, {}, req).richardson;
}

inline QuasimodeStudy quasimode_study(const WellDomain& domain, const Mode& mode, int order,
                                      const std::vector<double>& hs,
                                      const asymptotics::QuasimodeOptions& opts = {}) {
  QuasimodeStudy st;
  auto rows = parallel::map<QuasimodeRow>(hs.size(), [&](std::size_t i) {
    const double h = hs[i];
    const auto q = asymptotics::build_quasimode(domain, mode, h, order, opts);
    const auto res = asymptotics::quasimode_residual(q);
    QuasimodeRow row;
    row.h = h;
    row.lambda_tilde = q.lambda_tilde();
    double best = std::numeric_limits<double>::infinity();
    for (double v : oracle_sector(domain, mode, h)) {
      if (std::abs(v - row.lambda_tilde) < best) {
        best = std::abs(v - row.lambda_tilde);
        row.nearest = v;
      }
    }
    row.distance = best;
    row.l2 = res.l2;
    row.hminus1 = res.hminus1;
    row.delta_coeff = res.delta_coeff;
    row.profile_norm = res.norm;
    row.ratio = row.distance / row.hminus1;
    row.l2_bound = row.distance <= row.l2 / row.profile_norm;
    return row;
  });
  st.rows = std::move(rows);
  std::vector<double> h, d, n;
  double rmin = std::numeric_limits<double>::infinity();
  for (const auto& r : st.rows) {
    h.push_back(r.h);
    d.push_back(r.distance);
    n.push_back(r.profile_norm - 1.0);
    st.fitted_k = std::max(st.fitted_k, r.ratio);
    rmin = std::min(rmin, r.ratio);
  }
  st.ratio_spread = st.fitted_k / rmin;
  if (h.size() >= 2) {
    st.distance_slope = fit::loglog_slope(h, d);
    st.norm_slope = fit::loglog_slope(h, n);
  }
  if (harmonic_multiplicity(domain, mode.nu) > 1) {
    st.caveat = asymptotics::build_quasimode(domain, mode, hs.front(), order, opts).caveat();
  }
  return st;
}

}  // namespace pwell::experiments
