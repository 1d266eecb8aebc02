// pwell: spectra of -Delta + h^-2 1_{outside} on intervals and balls.
//
// Exit codes: 0 success, 1 computational or check failure, 2 invalid
// configuration. Data goes to stdout (or --out), diagnostics to stderr.

#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "CLI11.hpp"
#include "pwell/asymptotics.hpp"
#include "pwell/dirichlet.hpp"
#include "pwell/experiments.hpp"
#include "pwell/fit.hpp"
#include "pwell/io.hpp"
#include "pwell/oracle.hpp"
#include "pwell/secular.hpp"
#include "pwell/verify.hpp"

namespace {

using namespace pwell;
using nlohmann::json;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Config {
  std::string domain = "interval";
  double radius = 2.0;
  int dim = 2;
  std::vector<double> h;
  std::optional<double> h_min, h_max;
  int h_count = 0;
  int modes = 0;
  int nu_max = 200;
  int order = 1;
  std::string out;
  std::string format;
  bool oracle = false;
  bool quick = false;
  bool extended = false;
  int nu = 0;
  int l = 1;
  int n = 0;
  std::vector<double> z;
  std::string profile;
  double perturb_zero = 0.0;
};

WellDomain make_domain(const Config& c) {
  if (!(c.radius > 0.0) || !std::isfinite(c.radius)) throw ConfigError("--radius must be > 0");
  if (c.domain == "interval") return WellDomain::interval(c.radius);
  if (c.dim < 2) throw ConfigError("--dim must be >= 2 for a ball");
  return WellDomain::ball(c.dim, c.radius);
}

void check_h(double h) {
  if (!(h > 0.0 && h < 1.0)) throw ConfigError("h must lie in (0, 1), got " + io::format_double(h));
}

/// Explicit --h values, else a geometric sweep, else the command default.
std::vector<double> h_list(const Config& c, double lo, double hi, int count) {
  if (!c.h.empty()) {
    for (double h : c.h) check_h(h);
    return c.h;
  }
  const double a = c.h_min.value_or(lo);
  const double b = c.h_max.value_or(hi);
  const int n = c.h_count > 0 ? c.h_count : count;
  check_h(a);
  check_h(b);
  if (a > b) throw ConfigError("--h-min must not exceed --h-max");
  if (n < 1) throw ConfigError("--h-count must be >= 1");
  return fit::geometric(a, b, n);
}

Mode selected_mode(const Config& c, const WellDomain& dom) {
  if (dom.is_interval() && c.n > 0) return Mode::interval_index(c.n);
  const Mode m{c.nu, c.l};
  try {
    validate(dom, m);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return m;
}

class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_.open(path, std::ios::binary);
      if (!file_) throw ConfigError("cannot open --out file " + path);
    }
  }
  std::ostream& stream() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }

 private:
  std::ofstream file_;
};

std::string fmt(double v) { return io::format_double(v); }

// ------------------------------------------------------------- spectrum

int cmd_spectrum(const Config& c) {
  const WellDomain dom = make_domain(c);
  if (c.h.size() != 1) throw ConfigError("spectrum needs exactly one --h");
  check_h(c.h.front());
  const WellParams params(c.h.front());
  secular::SpectrumOptions so;
  so.nu_max = c.nu_max;
  so.extended = c.extended;
  std::vector<Eigenvalue> evs = secular::solve_spectrum(dom, params, so);
  if (c.modes > 0 && static_cast<int>(evs.size()) > c.modes) evs.resize(c.modes);

  std::vector<double> oracle_values(evs.size(), std::numeric_limits<double>::quiet_NaN());
  if (c.oracle && !evs.empty()) {
    if (dom.is_interval()) {
      oracle::SpectrumRequest req;
      req.count = static_cast<int>(evs.size());
      const auto fd = oracle::fd_line_spectrum(dom.radius, params.h, {}, req);
      for (std::size_t i = 0; i < evs.size() && i < fd.richardson.size(); ++i) {
        oracle_values[i] = fd.richardson[i];
      }
    } else {
      std::map<int, std::vector<double>> cache;
      for (std::size_t i = 0; i < evs.size(); ++i) {
        const Mode m = evs[i].mode;
        auto& v = cache[m.nu];
        if (static_cast<int>(v.size()) < m.l) {
          oracle::SpectrumRequest req;
          req.count = m.l;
          v = oracle::fd_radial_spectrum(dom.dim, m.nu, dom.radius, params.h, {}, req).richardson;
        }
        oracle_values[i] = v[static_cast<std::size_t>(m.l - 1)];
      }
    }
  }

  Output out(c.out);
  std::ostream& os = out.stream();
  if (c.format == "json") {
    json arr = json::array();
    for (std::size_t i = 0; i < evs.size(); ++i) {
      const Eigenvalue& e = evs[i];
      json row{{"j", i + 1},
               {"lambda", e.lambda},
               {"nu", e.mode.nu},
               {"l", e.mode.l},
               {"parity", parity_label(dom, e.mode)},
               {"multiplicity", e.multiplicity},
               {"residual", e.residual},
               {"lambda_D", dirichlet::dirichlet_eigenvalue(dom, e.mode)}};
      if (c.oracle) row["oracle"] = oracle_values[i];
      arr.push_back(row);
    }
    os << json{{"h", params.h}, {"eigenvalues", arr}}.dump(2) << '\n';
  } else {
    std::vector<std::string> head{"j", "lambda", "nu", "l", "parity", "multiplicity", "residual",
                                  "lambda_D"};
    if (c.oracle) head.push_back("oracle");
    io::write_csv_header(os, head);
    for (std::size_t i = 0; i < evs.size(); ++i) {
      const Eigenvalue& e = evs[i];
      std::vector<io::Cell> row{static_cast<int>(i + 1), e.lambda, e.mode.nu, e.mode.l,
                                parity_label(dom, e.mode), e.multiplicity, e.residual,
                                dirichlet::dirichlet_eigenvalue(dom, e.mode)};
      if (c.oracle) row.emplace_back(oracle_values[i]);
      io::write_csv_row(os, row);
    }
  }
  std::cerr << evs.size() << " eigenvalues (" << secular::count_with_multiplicity(evs)
            << " with multiplicity) for h = " << fmt(params.h) << '\n';
  return 0;
}

// ---------------------------------------------------------------- sweep

int cmd_sweep(const Config& c) {
  const WellDomain dom = make_domain(c);
  const std::vector<double> hs = h_list(c, 0.02, 0.5, 40);
  const int modes = c.modes > 0 ? c.modes : 9;
  const auto rows = experiments::sweep(dom, hs, modes, c.nu_max);
  for (const auto& r : rows) {
    if (r.diff < -1e-12) {
      std::cerr << "negative diff at h = " << fmt(r.h) << ", j = " << r.j << '\n';
      return 1;
    }
  }
  Output out(c.out);
  if (c.format == "json") {
    out.stream() << experiments::sweep_json(rows).dump(2) << '\n';
  } else {
    experiments::write_sweep_csv(out.stream(), rows);
  }
  std::cerr << rows.size() << " rows\n";
  return 0;
}

// --------------------------------------------------------------- expand

int cmd_expand(const Config& c) {
  const WellDomain dom = make_domain(c);
  const Mode mode = selected_mode(c, dom);
  if (harmonic_multiplicity(dom, mode.nu) > 1) {
    std::cerr << "mode (nu=" << mode.nu << ", l=" << mode.l << ") has multiplicity "
              << harmonic_multiplicity(dom, mode.nu)
              << "; the first-order shift needs a basis choice, see `pwell split`\n";
    return 1;
  }
  const std::vector<double> hs = h_list(c, 0.005, 0.05, 10);
  const auto e = experiments::expansion_fit(dom, mode, hs);
  Output out(c.out);
  std::ostream& os = out.stream();
  if (c.format == "json") {
    json j{{"nu", mode.nu},
           {"l", mode.l},
           {"lambda_D", e.lambda_D},
           {"lambda1", e.lambda1},
           {"boundary_norm_sq", -e.lambda1},
           {"fitted_intercept", e.fitted_intercept},
           {"intercept_rel_err", e.intercept_rel_err},
           {"remainder_slope", e.remainder_slope},
           {"h", e.hs},
           {"lambda_h", e.lambda_h},
           {"remainder", e.remainder}};
    os << j.dump(2) << '\n';
  } else {
    os << "mode            nu=" << mode.nu << " l=" << mode.l << '\n'
       << "lambda_D        " << fmt(e.lambda_D) << '\n'
       << "lambda_1        " << fmt(e.lambda1) << "   (-|d_nu u|^2)\n"
       << "fitted slope    " << fmt(e.fitted_intercept) << "   ((lambda_D - lambda_h)/h at h -> 0, rel err "
       << fmt(e.intercept_rel_err) << ")\n"
       << "remainder slope " << fmt(e.remainder_slope) << "   (log-log, expected 2)\n";
    io::write_csv_header(os, {"h", "lambda_h", "remainder"});
    for (std::size_t i = 0; i < e.hs.size(); ++i) {
      io::write_csv_row(os, {e.hs[i], e.lambda_h[i], e.remainder[i]});
    }
  }
  return 0;
}

// ---------------------------------------------------------------- split

int cmd_split(const Config& c) {
  const WellDomain dom = make_domain(c);
  const Mode mode = selected_mode(c, dom);
  const int mult = harmonic_multiplicity(dom, mode.nu);
  if (mult < 2) {
    std::cerr << "mode (nu=" << mode.nu << ", l=" << mode.l
              << ") is simple; nothing to split (use `pwell expand`)\n";
    return 1;
  }
  const auto s = asymptotics::splitting_matrix(dom, mode, asymptotics::standard_basis(dom, mode));
  Output out(c.out);
  std::ostream& os = out.stream();
  if (c.format == "json") {
    json j{{"nu", mode.nu},          {"l", mode.l},
           {"matrix", s.entries},    {"candidates", s.candidates},
           {"eigenvectors", s.coefficients}, {"degenerate", s.degenerate},
           {"expected_diagonal", 2.0 * dirichlet::dirichlet_eigenvalue(dom, mode) / dom.radius}};
    os << j.dump(2) << '\n';
  } else {
    os << "splitting matrix A_ij = <d_nu psi_i, d_nu psi_j> (nu=" << mode.nu << ", l=" << mode.l
       << ", multiplicity " << mult << ")\n";
    for (const auto& row : s.entries) {
      for (std::size_t k = 0; k < row.size(); ++k) os << "  " << fmt(row[k]);
      os << '\n';
    }
    for (std::size_t k = 0; k < s.candidates.size(); ++k) {
      os << "lambda_1 candidate " << fmt(s.candidates[k]) << "  z =";
      for (double v : s.coefficients[k]) os << ' ' << fmt(v);
      os << '\n';
    }
    os << "degenerate criterion (A scalar): " << (s.degenerate ? "holds" : "fails") << '\n';
  }
  return 0;
}

// ------------------------------------------------------------ quasimode

int cmd_quasimode(const Config& c) {
  const WellDomain dom = make_domain(c);
  const Mode mode = selected_mode(c, dom);
  if (c.order != 0 && c.order != 1) throw ConfigError("--order must be 0 or 1");
  std::vector<double> hs = c.h.empty() && !c.h_min && !c.h_max && c.h_count == 0
                               ? std::vector<double>{0.2, 0.1, 0.05, 0.025}
                               : h_list(c, 0.025, 0.2, 4);
  asymptotics::QuasimodeOptions opts;
  if (!c.z.empty()) opts.z = c.z;
  if (harmonic_multiplicity(dom, mode.nu) > 1 && !opts.z) {
    throw ConfigError("degenerate mode: pass a direction with --z (see `pwell split`)");
  }
  const double collar = asymptotics::default_collar(dom);
  for (double h : hs) {
    if (!(h < 0.5 * collar)) {
      throw ConfigError("h = " + fmt(h) + " too large for the boundary layer (need h < " +
                        fmt(0.5 * collar) + ")");
    }
  }
  const auto st = experiments::quasimode_study(dom, mode, c.order, hs, opts);
  Output out(c.out);
  std::ostream& os = out.stream();
  if (c.format == "json") {
    json rows = json::array();
    for (const auto& r : st.rows) {
      rows.push_back({{"h", r.h},
                      {"lambda_tilde", r.lambda_tilde},
                      {"nearest", r.nearest},
                      {"distance", r.distance},
                      {"residual_l2", r.l2},
                      {"residual_hminus1", r.hminus1},
                      {"delta_coeff", r.delta_coeff},
                      {"norm", r.profile_norm},
                      {"ratio", r.ratio},
                      {"l2_bound", r.l2_bound}});
    }
    json j{{"order", c.order},          {"rows", rows},
           {"distance_slope", st.distance_slope}, {"fitted_K", st.fitted_k},
           {"norm_slope", st.norm_slope}};
    if (!st.caveat.empty()) j["caveat"] = st.caveat;
    os << j.dump(2) << '\n';
  } else {
    io::write_csv_header(os, {"h", "lambda_tilde", "nearest", "distance", "residual_l2",
                              "residual_hminus1", "norm", "ratio", "l2_bound"});
    for (const auto& r : st.rows) {
      io::write_csv_row(os, {r.h, r.lambda_tilde, r.nearest, r.distance, r.l2, r.hminus1,
                             r.profile_norm, r.ratio, r.l2_bound ? "yes" : "no"});
    }
  }
  std::cerr << "distance slope " << fmt(st.distance_slope) << ", K " << fmt(st.fitted_k)
            << ", |norm - 1| slope " << fmt(st.norm_slope) << '\n';
  if (!st.caveat.empty()) std::cerr << "note: " << st.caveat << '\n';

  if (!c.profile.empty()) {
    const auto q = asymptotics::build_quasimode(dom, mode, hs.back(), c.order, opts);
    std::ofstream pf(c.profile, std::ios::binary);
    if (!pf) throw ConfigError("cannot open --profile file " + c.profile);
    io::write_csv_header(pf, {"r", "value"});
    const double r_end = dom.radius + q.collar();
    const int n = 2000;
    for (int i = 0; i <= n; ++i) {
      const double r = r_end * i / n;
      io::write_csv_row(pf, {r, q.value(r)});
    }
  }
  return 0;
}

// --------------------------------------------------------------- verify

int cmd_verify(const Config& c) {
  verify::VerifyOptions opt;
  opt.quick = c.quick;
  opt.perturb_zero = c.perturb_zero;
  bool all = true;
  for (const auto& check : verify::all_checks()) {
    const auto r = check(opt);
    std::cout << verify::format_line(r) << std::endl;
    all = all && r.pass;
  }
  return all ? 0 : 1;
}

void add_common(CLI::App* sub, Config& c) {
  sub->add_option("--domain", c.domain, "interval or ball")
      ->check(CLI::IsMember({"interval", "ball"}));
  sub->add_option("--radius", c.radius, "radius a of the well");
  sub->add_option("--dim", c.dim, "dimension of the ball");
  sub->add_option("--h", c.h, "semiclassical parameter(s)");
  sub->add_option("--h-min", c.h_min, "smallest h of a geometric sweep");
  sub->add_option("--h-max", c.h_max, "largest h of a geometric sweep");
  sub->add_option("--h-count", c.h_count, "number of sweep points");
  sub->add_option("--modes", c.modes, "number of modes");
  sub->add_option("--nu-max", c.nu_max, "largest angular degree");
  sub->add_option("--order", c.order, "quasimode order (0 or 1)");
  sub->add_option("--out", c.out, "output file (default stdout)");
  sub->add_option("--format", c.format, "csv, json or text")
      ->check(CLI::IsMember({"csv", "json", "text"}));
  sub->add_flag("--oracle", c.oracle, "cross-check with the finite-difference oracle");
  sub->add_flag("--quick", c.quick, "reduced verification");
  sub->add_flag("--extended", c.extended, "search all of (0, h^-2)");
  sub->add_option("--nu", c.nu, "angular degree (interval: 0 even, 1 odd)");
  sub->add_option("--l", c.l, "radial index");
  sub->add_option("--n", c.n, "interval mode index n = 1, 2, ...");
  sub->add_option("--z", c.z, "direction in a degenerate eigenspace")->delimiter(',');
  sub->add_option("--profile", c.profile, "quasimode profile CSV (r,value)");
  sub->add_option("--perturb-zero", c.perturb_zero)->group("");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pwell: finite-depth well spectra, asymptotics and quasimodes"};
  app.require_subcommand(1);
  app.set_help_flag("--help", "print help");  // -h is taken by --h
  Config c;
  struct Cmd {
    const char* name;
    const char* help;
    int (*run)(const Config&);
  };
  const Cmd cmds[] = {{"spectrum", "eigenvalues for one h", cmd_spectrum},
                      {"sweep", "eigenvalue curves over an h sweep", cmd_sweep},
                      {"expand", "first-order expansion of a simple mode", cmd_expand},
                      {"split", "splitting matrix of a degenerate mode", cmd_split},
                      {"quasimode", "quasimodes against the oracle", cmd_quasimode},
                      {"verify", "run the self-checks", cmd_verify}};
  std::vector<std::pair<CLI::App*, const Cmd*>> subs;
  for (const Cmd& cmd : cmds) subs.emplace_back(app.add_subcommand(cmd.name, cmd.help), &cmd);
  for (auto& [sub, cmd] : subs) add_common(sub, c);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }
  const bool report = [&] {
    for (auto& [sub, cmd] : subs) {
      if (sub->parsed()) {
        const std::string n = cmd->name;
        return n == "expand" || n == "split";
      }
    }
    return false;
  }();
  if (c.format.empty()) c.format = report ? "text" : "csv";

  for (auto& [sub, cmd] : subs) {
    if (!sub->parsed()) continue;
    try {
      return cmd->run(c);
    } catch (const ConfigError& e) {
      std::cerr << "invalid configuration: " << e.what() << '\n';
      return 2;
    } catch (const std::invalid_argument& e) {
      std::cerr << "invalid configuration: " << e.what() << '\n';
      return 2;
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << '\n';
      return 1;
    }
  }
  return 2;
}
