#include <cmath>
#include <stdexcept>
#include <vector>

#include <gtest/gtest.h>

#include "pwell/dirichlet.hpp"
#include "pwell/secular.hpp"

using namespace pwell;

namespace {

// Sign changes of a sector function found by a plain uniform scan in lambda,
// refined by bisection. Independent of the Dirichlet-zero bracketing.
std::vector<double> scan_roots(const WellDomain& dom, const WellParams& p, int nu, double lo,
                               double hi, int steps) {
  std::vector<double> roots;
  auto f = [&](double x) { return secular::secular_sector(x, p, dom, nu); };
  double x0 = lo, f0 = f(lo);
  for (int i = 1; i <= steps; ++i) {
    const double x1 = lo + (hi - lo) * i / steps;
    const double f1 = f(x1);
    if ((f0 > 0) != (f1 > 0)) {
      double a = x0, b = x1, fa = f0;
      for (int it = 0; it < 200 && b - a > 1e-15 * b; ++it) {
        const double m = 0.5 * (a + b);
        const double fm = f(m);
        if ((fm > 0) == (fa > 0)) {
          a = m;
          fa = fm;
        } else {
          b = m;
        }
      }
      roots.push_back(0.5 * (a + b));
    }
    x0 = x1;
    f0 = f1;
  }
  return roots;
}

}  // namespace

TEST(Secular, IntervalRootsAtModerateDepth) {
  // frozen: a = 2, h = 0.3, whole window (0, h^-2)
  const std::vector<double> expected{0.465562, 1.851154, 4.116786, 7.159284, 10.576555};
  secular::SpectrumOptions so;
  so.extended = true;
  const auto evs = secular::solve_spectrum(WellDomain::interval(2.0), WellParams(0.3), so);
  ASSERT_EQ(evs.size(), expected.size());
  for (std::size_t i = 0; i < expected.size(); ++i) EXPECT_NEAR(evs[i].lambda, expected[i], 1e-6);
  EXPECT_EQ(evs[0].mode, Mode::even(1));
  EXPECT_EQ(evs[1].mode, Mode::odd(1));
}

TEST(Secular, RootsAreZerosOfTheParitySecularFunctions) {
  const WellDomain dom = WellDomain::interval(2.0);
  const WellParams p(0.1);
  for (const auto& e : secular::solve_spectrum(dom, p)) {
    const double k = std::sqrt(e.lambda);
    const double scale = k + std::sqrt(p.depth());
    const double v = e.mode.nu == 0 ? secular::secular_interval_even(e.lambda, p, dom)
                                    : secular::secular_interval_odd(e.lambda, p, dom);
    EXPECT_LT(std::abs(v), 1e-10 * scale);
    EXPECT_LT(std::abs(secular::secular_interval_combined(e.lambda, p, dom)), 1e-9 * scale * scale);
  }
}

TEST(Secular, CombinedIsProductOfParityFunctions) {
  const WellDomain dom = WellDomain::interval(1.3);
  const WellParams p(0.2);
  for (double lam : {0.3, 2.0, 7.7, 20.0}) {
    const double prod = secular::secular_interval_even(lam, p, dom) *
                        secular::secular_interval_odd(lam, p, dom);
    EXPECT_NEAR(secular::secular_interval_combined(lam, p, dom), prod, 1e-12 * (1 + std::abs(prod)));
  }
}

TEST(Secular, BracketingAgreesWithUniformScan) {
  for (const WellDomain& dom : {WellDomain::interval(2.0), WellDomain::ball(2, 2.0),
                                WellDomain::ball(3, 1.0)}) {
    const WellParams p(0.2);
    const int last = dom.is_interval() ? 1 : 4;
    for (int nu = 0; nu <= last; ++nu) {
      const auto w = secular::search_window(p, 0.0, true);
      const auto fast = secular::solve_sector(dom, p, nu, w);
      const auto slow = scan_roots(dom, p, nu, w.lo, w.hi, 20000);
      ASSERT_EQ(fast.size(), slow.size()) << "nu=" << nu;
      for (std::size_t i = 0; i < fast.size(); ++i) {
        EXPECT_NEAR(fast[i].lambda, slow[i], 1e-9 * slow[i]) << "nu=" << nu;
      }
    }
  }
}

TEST(Secular, EigenvaluesLieBelowDirichletValues) {
  const WellDomain dom = WellDomain::ball(2, 2.0);
  for (const auto& e : secular::solve_spectrum(dom, WellParams(0.1))) {
    EXPECT_LT(e.lambda, dirichlet::dirichlet_eigenvalue(dom, e.mode));
  }
}

TEST(Secular, DiskMultiplicityPattern) {
  // sector modes in order of lambda: only nu = 0 modes are simple
  const WellDomain dom = WellDomain::ball(2, 2.0);
  const auto evs = secular::solve_spectrum(dom, WellParams(0.1));
  ASSERT_GE(evs.size(), 9u);
  const std::vector<int> nus{0, 1, 2, 0, 3, 1, 4, 2, 0};
  for (std::size_t j = 0; j < nus.size(); ++j) {
    EXPECT_EQ(evs[j].mode.nu, nus[j]) << "j=" << j + 1;
    EXPECT_EQ(evs[j].multiplicity, nus[j] == 0 ? 1 : 2);
  }
}

TEST(Secular, BallMultiplicityInThreeDimensions) {
  EXPECT_EQ(harmonic_multiplicity(WellDomain::ball(3, 1.0), 2), 5);
  EXPECT_EQ(harmonic_multiplicity(WellDomain::ball(4, 1.0), 1), 4);
  const auto evs = secular::solve_spectrum(WellDomain::ball(3, 1.0), WellParams(0.1));
  for (const auto& e : evs) EXPECT_EQ(e.multiplicity, 2 * e.mode.nu + 1);
}

TEST(Secular, ThreeBallGroundStateIsTheSineZero) {
  // d = 3, nu = 0: J_{1/2} zeros are multiples of pi, so lambda -> pi^2 / a^2
  const WellDomain dom = WellDomain::ball(3, 1.0);
  const auto e = secular::solve_mode(dom, WellParams(0.01), Mode{0, 1});
  ASSERT_TRUE(e.has_value());
  EXPECT_LT(e->lambda, M_PI * M_PI);
  EXPECT_NEAR(e->lambda, M_PI * M_PI * (1 - 2 * 0.01), 0.01);
}

TEST(Secular, HighOrderSectorsNearZeroAreFound) {
  // large nu: J underflows near lambda = 0; the solver must not report spurious roots
  const WellDomain dom = WellDomain::ball(2, 2.0);
  const WellParams p(0.025);
  const auto w = secular::search_window(p, 0.0, true);
  for (int nu : {30, 60}) {
    const auto roots = secular::solve_sector(dom, p, nu, w);
    ASSERT_FALSE(roots.empty());
    EXPECT_GT(roots.front().lambda, 0.25 * nu * nu / 4.0);
  }
}

TEST(Secular, DomainErrors) {
  const WellDomain dom = WellDomain::interval(1.0);
  const WellParams p(0.5);
  EXPECT_THROW(secular::secular_interval_even(0.0, p, dom), std::domain_error);
  EXPECT_THROW(secular::secular_interval_even(4.0, p, dom), std::domain_error);
  EXPECT_THROW(secular::secular_ball(1.0, p, dom, 0), std::invalid_argument);
  EXPECT_THROW(WellParams(1.0), std::invalid_argument);
  EXPECT_THROW(WellParams(0.0), std::invalid_argument);
  EXPECT_THROW(WellDomain::ball(1, 1.0), std::invalid_argument);
}

TEST(Secular, BrentRejectsNonBracket) {
  EXPECT_THROW(roots::brent([](double x) { return x * x + 1.0; }, -1.0, 1.0),
               std::invalid_argument);
  EXPECT_NEAR(roots::brent([](double x) { return std::cos(x); }, 1.0, 2.0), M_PI / 2, 1e-14);
}

TEST(Secular, WindowCountsAndDefault) {
  const WellParams p(0.1);
  const auto w = secular::search_window(p, 0.0, false);
  EXPECT_DOUBLE_EQ(w.hi, 50.0);
  const auto ext = secular::search_window(p, 0.0, true);
  EXPECT_GT(ext.hi, 99.99);
  const auto evs = secular::solve_spectrum(WellDomain::interval(2.0), p);
  for (const auto& e : evs) EXPECT_LE(e.lambda, 50.0);
  EXPECT_EQ(secular::count_with_multiplicity(evs), static_cast<int>(evs.size()));
}
