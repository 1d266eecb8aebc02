#include <cmath>
#include <stdexcept>
#include <vector>

#include <gtest/gtest.h>

#include "pwell/asymptotics.hpp"
#include "pwell/secular.hpp"

using namespace pwell;
using namespace pwell::asymptotics;

TEST(ModelProblem, GreenFunction) {
  EXPECT_EQ(model_green(-3.0), 1.0);
  EXPECT_EQ(model_green(0.0), 1.0);
  EXPECT_NEAR(model_green(2.0), std::exp(-2.0), 1e-16);
}

TEST(ModelProblem, ExponentialSourceClosedForm) {
  LayerRHS rhs;
  rhs.smooth = [](double s) { return std::exp(-s); };
  const auto u = model_solve(rhs);
  EXPECT_NEAR(u.left_value(), 0.5, 1e-14);
  EXPECT_NEAR(u(-4.0), 0.5, 1e-14);
  for (double s : {0.0, 0.3, 1.0, 5.0, 25.0}) {
    EXPECT_NEAR(u(s), 0.5 * (s + 1.0) * std::exp(-s), 1e-12);
    EXPECT_NEAR(u.derivative(s), -0.5 * s * std::exp(-s), 1e-12);
  }
}

TEST(ModelProblem, SolvesTheEquationPointwise) {
  // -u'' + u = v on s > 0, u' continuous... except for the delta jump
  LayerRHS rhs;
  rhs.smooth = [](double s) { return s * std::exp(-2.0 * s); };
  rhs.delta_coeff = 0.4;
  const auto u = model_solve(rhs);
  for (double s : {0.2, 1.0, 3.0}) {
    EXPECT_NEAR(-u.second_derivative(s) + u(s), rhs.smooth(s), 1e-10);
  }
  EXPECT_NEAR(u.derivative(0.0) - 0.0, -0.4, 1e-10);  // u'(0+) - u'(0-) = -g
  EXPECT_NEAR(u(0.0), u.left_value(), 1e-12);
  EXPECT_NEAR(u(1e-9), u.left_value(), 1e-8);
}

TEST(ModelProblem, RejectsSlowlyDecayingSources) {
  LayerRHS rhs;
  rhs.smooth = [](double s) { return 1.0 / (1.0 + s); };
  EXPECT_THROW(model_solve(rhs), std::invalid_argument);
}

TEST(Cutoff, SmoothStepProperties) {
  const Cutoff chi{0.5};
  EXPECT_EQ(chi.value(0.0), 1.0);
  EXPECT_EQ(chi.value(0.2), 1.0);
  EXPECT_EQ(chi.value(0.6), 0.0);
  EXPECT_EQ(chi.value(-0.6), 0.0);
  const double s = 1e-6;
  for (double r : {0.3, 0.4, -0.35}) {
    EXPECT_NEAR(chi.d1(r), (chi.value(r + s) - chi.value(r - s)) / (2 * s), 1e-6);
    EXPECT_NEAR(chi.d2(r), (chi.d1(r + s) - chi.d1(r - s)) / (2 * s), 1e-4);
  }
}

TEST(Grushin, DiagonalSolve) {
  const std::vector<double> lam{1.0, 2.0, 5.0};
  const auto sol = grushin_solve(lam, 1, {0.3, 0.7, -1.5});
  EXPECT_DOUBLE_EQ(sol.gamma, 0.7);
  EXPECT_DOUBLE_EQ(sol.w[0], 0.3 / -1.0);
  EXPECT_DOUBLE_EQ(sol.w[1], 0.0);
  EXPECT_DOUBLE_EQ(sol.w[2], -1.5 / 3.0);
  EXPECT_THROW(grushin_solve({1.0, 1.0}, 0, {1.0, 1.0}), DegeneracyError);
  EXPECT_THROW(grushin_solve(lam, 3, {1, 1, 1}), std::invalid_argument);
}

TEST(Grushin, MultiplierIsTheBoundaryNorm) {
  for (const WellDomain& dom : {WellDomain::interval(2.0), WellDomain::ball(2, 2.0),
                                WellDomain::ball(3, 1.0)}) {
    for (int l : {1, 2}) {
      const Mode m{0, l};
      const dirichlet::SectorBasis basis(dom, 0, kGrushinModes);
      const auto f = collar_load(basis, m, default_collar(dom));
      const auto sol = grushin_solve(basis, m, f);
      EXPECT_NEAR(sol.gamma, -first_order_coefficient(dom, m), 1e-9);
    }
  }
}

TEST(FirstOrder, BallFormulaAndDegeneracy) {
  const WellDomain disk = WellDomain::ball(2, 2.0);
  const double lam = dirichlet::dirichlet_eigenvalue(disk, Mode{0, 1});
  EXPECT_NEAR(first_order_coefficient(disk, Mode{0, 1}), -2.0 * lam / 2.0, 1e-12);
  EXPECT_THROW(first_order_coefficient(disk, Mode{1, 1}), DegeneracyError);
  // a chosen direction in a degenerate space
  const double l1 = dirichlet::dirichlet_eigenvalue(disk, Mode{1, 1});
  EXPECT_NEAR(first_order_coefficient(disk, Mode{1, 1}, {0.6, 0.8}), -l1, 1e-12);
  EXPECT_THROW(first_order_coefficient(disk, Mode{1, 1}, {1.0}), std::invalid_argument);
}

TEST(Splitting, DiskPairsAreDegenerate) {
  const WellDomain disk = WellDomain::ball(2, 2.0);
  for (int nu : {1, 2, 3}) {
    const Mode m{nu, 1};
    const auto s = splitting_matrix(disk, m, standard_basis(disk, m));
    const double target = 2.0 * dirichlet::dirichlet_eigenvalue(disk, m) / 2.0;
    EXPECT_TRUE(s.degenerate);
    EXPECT_NEAR(s.entries[0][1], 0.0, 1e-12);
    EXPECT_NEAR(s.entries[0][0], target, 1e-10);
    EXPECT_NEAR(s.entries[1][1], target, 1e-10);
    ASSERT_EQ(s.candidates.size(), 2u);
    EXPECT_NEAR(s.candidates[0], -target, 1e-10);
    EXPECT_NEAR(s.candidates[1], -target, 1e-10);
  }
}

TEST(Splitting, RotatedBasisGivesTheSameMatrix) {
  const WellDomain disk = WellDomain::ball(2, 2.0);
  const Mode m{2, 1};
  const dirichlet::DirichletMode u(disk, m);
  const double c = std::cos(0.4), s = std::sin(0.4);
  const auto a = splitting_matrix(disk, m, {{c, s}, {-s, c}});
  EXPECT_TRUE(a.degenerate);
  EXPECT_THROW(splitting_matrix(disk, m, {{1.0, 1.0}, {1.0, -1.0}}), std::invalid_argument);
}

TEST(Splitting, NonScalarMatrixIsNotDegenerate) {
  const auto s = splitting_matrix_from({{2.0, 0.5}, {0.5, 1.0}}, {"a", "b"});
  EXPECT_FALSE(s.degenerate);
  // eigenvalues 1.5 -+ sqrt(0.5), candidates negated in ascending-A order
  ASSERT_EQ(s.candidates.size(), 2u);
  EXPECT_NEAR(s.candidates[0], -(1.5 - std::sqrt(0.5)), 1e-14);
  EXPECT_NEAR(s.candidates[1], -(1.5 + std::sqrt(0.5)), 1e-14);
}

TEST(Quasimode, OrderZeroKeepsTheDirichletValue) {
  const WellDomain dom = WellDomain::interval(2.0);
  const auto q = build_quasimode(dom, Mode{0, 1}, 0.05, 0);
  EXPECT_DOUBLE_EQ(q.lambda_tilde(), q.lambda0());
  EXPECT_NEAR(q.value(0.0), dirichlet::DirichletMode(dom, Mode{0, 1}).value(0.0), 1e-14);
  // continuous across the edge
  EXPECT_NEAR(q.value(2.0 - 1e-9), q.value(2.0 + 1e-9), 1e-8);
}

TEST(Quasimode, OrderOneIsContinuousAndMatchesTheExpansion) {
  const WellDomain dom = WellDomain::ball(2, 2.0);
  const double h = 0.05;
  const auto q = build_quasimode(dom, Mode{0, 1}, h, 1);
  EXPECT_NEAR(q.lambda1(), first_order_coefficient(dom, Mode{0, 1}), 1e-9);
  EXPECT_NEAR(q.value(2.0 - 1e-10), q.value(2.0 + 1e-10), 1e-8);
  EXPECT_NEAR(q.delta_coeff(), 0.0, 1e-9);
  const auto sec = secular::solve_mode(dom, WellParams(h), Mode{0, 1});
  ASSERT_TRUE(sec.has_value());
  EXPECT_LT(std::abs(q.lambda_tilde() - sec->lambda), 0.02);
  EXPECT_NEAR(q.norm(), 1.0, 0.1);
}

TEST(Quasimode, ResidualShrinksWithH) {
  const WellDomain dom = WellDomain::interval(2.0);
  double prev = 1e300;
  for (double h : {0.2, 0.1, 0.05}) {
    const auto q = build_quasimode(dom, Mode{0, 1}, h, 1);
    const auto r = quasimode_residual(q);
    EXPECT_LT(r.hminus1, prev);
    EXPECT_LE(r.hminus1, r.l2 + std::abs(r.delta_coeff) + 1e-15);
    prev = r.hminus1;
  }
}

TEST(Quasimode, Preconditions) {
  const WellDomain dom = WellDomain::interval(2.0);
  EXPECT_THROW(build_quasimode(dom, Mode{0, 1}, 0.3, 1), std::invalid_argument);
  EXPECT_THROW(build_quasimode(dom, Mode{0, 1}, 0.1, 2), std::invalid_argument);
  const WellDomain disk = WellDomain::ball(2, 2.0);
  EXPECT_THROW(build_quasimode(disk, Mode{1, 1}, 0.1, 1), DegeneracyError);
  QuasimodeOptions opts;
  opts.z = std::vector<double>{1.0, 0.0};
  const auto q = build_quasimode(disk, Mode{1, 1}, 0.1, 0, opts);
  EXPECT_FALSE(q.caveat().empty());
  const auto coarse = oracle::fd_line_grid(2.0, 0.1, oracle::FDOptions{0.1 / 8, 0.0, false});
  EXPECT_THROW(quasimode_residual(build_quasimode(dom, Mode{0, 1}, 0.1, 0), coarse),
               std::invalid_argument);
}
