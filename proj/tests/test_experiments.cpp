#include <charconv>
#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "pwell/experiments.hpp"
#include "pwell/fit.hpp"
#include "pwell/io.hpp"
#include "pwell/parallel.hpp"

using namespace pwell;

TEST(Fit, LinearAndLogLog) {
  const auto l = fit::linear({1, 2, 3, 4}, {3, 5, 7, 9});
  EXPECT_NEAR(l.slope, 2.0, 1e-14);
  EXPECT_NEAR(l.intercept, 1.0, 1e-14);
  EXPECT_NEAR(fit::loglog_slope({0.1, 0.2, 0.4}, {0.03, 0.12, 0.48}), 2.0, 1e-12);
  EXPECT_THROW(fit::linear({1}, {1}), std::invalid_argument);
  const auto g = fit::geometric(0.02, 0.5, 40);
  ASSERT_EQ(g.size(), 40u);
  EXPECT_EQ(g.front(), 0.5);
  EXPECT_EQ(g.back(), 0.02);
}

TEST(Io, ShortestRoundTrip) {
  EXPECT_EQ(io::format_double(0.1), "0.1");
  EXPECT_EQ(io::format_double(2.0), "2");
  for (double v : {1.0 / 3.0, 2.718281828459045, 1e-300, 123456.789e10}) {
    const std::string s = io::format_double(v);
    double back = 0.0;
    std::from_chars(s.data(), s.data() + s.size(), back);
    EXPECT_EQ(back, v);
    EXPECT_LE(s.size(), 24u);
  }
  std::ostringstream os;
  io::write_csv_row(os, {1.5, 2, "x"});
  EXPECT_EQ(os.str(), "1.5,2,x\n");
}

TEST(Parallel, MapKeepsOrderAndPropagatesErrors) {
  const auto v = parallel::map<int>(100, [](std::size_t i) { return static_cast<int>(i * i); }, 4);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(v[i], i * i);
  EXPECT_THROW(parallel::map<int>(
                   10,
                   [](std::size_t i) -> int {
                     if (i == 7) throw std::runtime_error("boom");
                     return 0;
                   },
                   3),
               std::runtime_error);
}

TEST(Labels, DiskOrderingAndSimpleIndices) {
  const auto m = experiments::labeled_modes(WellDomain::ball(2, 2.0), 9);
  ASSERT_EQ(m.size(), 9u);
  const int nus[] = {0, 1, 2, 0, 3, 1, 4, 2, 0};
  const int ls[] = {1, 1, 1, 2, 1, 2, 1, 2, 3};
  for (int j = 0; j < 9; ++j) {
    EXPECT_EQ(m[j].j, j + 1);
    EXPECT_EQ(m[j].mode.nu, nus[j]);
    EXPECT_EQ(m[j].mode.l, ls[j]);
  }
  // among j >= 2, the simple ones are j = 4 and j = 9
  std::vector<int> simple;
  for (const auto& x : m) {
    if (x.j > 1 && x.multiplicity == 1) simple.push_back(x.j);
  }
  EXPECT_EQ(simple, (std::vector<int>{4, 9}));
}

TEST(Labels, IntervalAlternatesParity) {
  const auto m = experiments::labeled_modes(WellDomain::interval(2.0), 9);
  for (int j = 0; j < 9; ++j) EXPECT_EQ(m[j].mode, Mode::interval_index(j + 1));
}

TEST(Sweep, RowsAreBoundedAndMonotone) {
  const auto rows = experiments::sweep(WellDomain::interval(2.0), fit::geometric(0.05, 0.5, 8), 5);
  ASSERT_FALSE(rows.empty());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    EXPECT_GE(rows[i].diff, 0.0);
    EXPECT_LE(rows[i].lambda_h, rows[i].lambda_D);
    EXPECT_NEAR(rows[i].first_order, rows[i].h * 2.0 * rows[i].lambda_D / 2.0, 1e-12);
    if (i > 0) EXPECT_LE(rows[i - 1].h, rows[i].h);
  }
}

TEST(Sweep, GoldenRows) {
  // a = 2 interval at h = 0.1, first three labels (frozen output)
  std::ostringstream os;
  experiments::write_sweep_csv(os, experiments::sweep(WellDomain::interval(2.0), {0.1}, 3));
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  EXPECT_EQ(line, "h,j,nu,l,parity,multiplicity,lambda_h,lambda_D,diff,first_order");
  std::vector<std::string> lines;
  while (std::getline(is, line)) lines.push_back(line);
  ASSERT_EQ(lines.size(), 3u);
  EXPECT_EQ(lines[0].substr(0, 19), "0.1,1,0,1,even,1,0.");
  EXPECT_EQ(lines[1].substr(0, 18), "0.1,2,1,1,odd,1,2.");
  // repeated runs are byte-identical
  std::ostringstream again;
  experiments::write_sweep_csv(again, experiments::sweep(WellDomain::interval(2.0), {0.1}, 3));
  EXPECT_EQ(os.str(), again.str());
}

TEST(Sweep, JsonCarriesTheSameValues) {
  const auto rows = experiments::sweep(WellDomain::ball(2, 2.0), {0.1, 0.2}, 4);
  const auto j = experiments::sweep_json(rows);
  ASSERT_EQ(j.size(), rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    EXPECT_EQ(j[i]["lambda_h"].get<double>(), rows[i].lambda_h);
    EXPECT_EQ(j[i]["diff"].get<double>(), rows[i].diff);
    EXPECT_EQ(j[i]["parity"].get<std::string>(), rows[i].parity);
  }
  // parsing the serialized text recovers the doubles exactly
  const auto back = nlohmann::json::parse(j.dump());
  EXPECT_EQ(back[0]["lambda_h"].get<double>(), rows[0].lambda_h);
}

TEST(Expansion, IntervalFitRecoversBoundaryNorm) {
  const auto e = experiments::expansion_fit(WellDomain::interval(2.0), Mode::interval_index(1),
                                            fit::geometric(0.005, 0.05, 10));
  EXPECT_LT(e.intercept_rel_err, 0.01);
  EXPECT_NEAR(e.remainder_slope, 2.0, 0.2);
  EXPECT_THROW(experiments::expansion_fit(WellDomain::ball(2, 2.0), Mode{1, 1}, {0.1, 0.05}),
               DegeneracyError);
}

TEST(QuasimodeStudy, OrderZeroIsFirstOrderAccurate) {
  // h = 0.2 is still pre-asymptotic for the norm defect
  const auto st = experiments::quasimode_study(WellDomain::interval(2.0), Mode{0, 1}, 0,
                                               {0.05, 0.025, 0.0125});
  EXPECT_NEAR(st.distance_slope, 1.0, 0.15);
  EXPECT_NEAR(st.norm_slope, 1.0, 0.2);
  for (const auto& r : st.rows) EXPECT_TRUE(r.l2_bound);
}

TEST(QuasimodeStudy, OrderOneIsSecondOrderAccurate) {
  const auto st = experiments::quasimode_study(WellDomain::interval(2.0), Mode{0, 1}, 1,
                                               {0.2, 0.1, 0.05, 0.025});
  EXPECT_GE(st.distance_slope, 1.8);
  EXPECT_LT(st.fitted_k, 1.0);
  for (const auto& r : st.rows) EXPECT_TRUE(r.l2_bound);
}
