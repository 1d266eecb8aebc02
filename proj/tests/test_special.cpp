#include <cmath>
#include <numbers>
#include <stdexcept>

#include <gtest/gtest.h>

#include "pwell/quadrature.hpp"
#include "pwell/special.hpp"

using namespace pwell::special;

namespace {

struct JRef {
  double nu, x, j, jp;
};
struct KRef {
  double nu, x, k_exp, kp_exp, log_k;  // K e^x, K' e^x, log K
};

// 40-digit reference values, rounded.
const JRef kJ[] = {
    {0, 1, 0.76519768655796655145, -0.44005058574493351596},
    {0, 2.5, -0.048383776468197996327, -0.49709410246427403801},
    {1, 10, 0.04347274616886143667, -0.25028303906823447886},
    {2.5, 7.3, -0.30084943158749980838, -0.017922383717637522718},
    {7, 3, 0.0025472944518046937591, 0.0054502452780021173163},
    {10, 50, -0.11384784914946938567, -0.0044228912140786646419},
    {20, 15, 0.0073602340792234852583, 0.0067598609886162726624},
    {0.5, 100, -0.040402132716252123744, 0.069005102132309344365},
    {40, 60, -0.077646197404715064971, 0.068687649820770650819},
    {3, 1000, -0.0048274208252039478996, -0.02476274726613038367},
};

const KRef kK[] = {
    {0, 0.01, 4.7686940285444618845, -100.97864845824004908, 1.552072478848215843},
    {0, 1, 1.1444630798068950147, -1.6361534862632582465, -0.8650643989067880968},
    {1, 2.5, 0.90017442390787808913, -1.1196184598912508143, -2.6051667300933749557},
    {2.5, 7, 0.70572856881753291855, -0.79342673734965295834, -7.3485245788451647013},
    {7, 3, 294.55091361878733865, -756.21427193611788897, 2.685451869707198758},
    {10, 50, 0.4744517916435988145, -0.48839200165944207335, -50.74559526431573452},
    {20, 15, 39689.982442152427794, -66636.613208177856295, -4.4111458965975791841},
    {60, 200, 657.75033723620717228, -688.21905485146348026, -193.51117456736789782},
};

}  // namespace

TEST(BesselOrder, RejectsNegativeAndNonFinite) {
  EXPECT_THROW(BesselOrder(-0.1), std::domain_error);
  EXPECT_THROW(BesselOrder(std::nan("")), std::domain_error);
  EXPECT_DOUBLE_EQ(BesselOrder(2.5).value(), 2.5);
}

TEST(BesselJ, MatchesReferenceValues) {
  for (const JRef& r : kJ) {
    const BesselOrder o(r.nu);
    // absolute error against the envelope sqrt(2/(pi x)) (at least 1)
    const double scale = std::max(1.0, std::sqrt(2.0 / (std::numbers::pi * r.x)));
    EXPECT_NEAR(bessel_j(o, r.x), r.j, 2e-14 * scale) << "nu=" << r.nu << " x=" << r.x;
    EXPECT_NEAR(bessel_j_derivative(o, r.x), r.jp, 2e-14 * scale) << "nu=" << r.nu << " x=" << r.x;
  }
}

TEST(BesselJ, SmallArgumentLimits) {
  EXPECT_DOUBLE_EQ(bessel_j(BesselOrder(0), 0.0), 1.0);
  EXPECT_DOUBLE_EQ(bessel_j(BesselOrder(3), 0.0), 0.0);
  EXPECT_NEAR(bessel_j(BesselOrder(1), 1e-8), 5e-9, 1e-22);
}

TEST(BesselK, MatchesReferenceValues) {
  for (const KRef& r : kK) {
    const BesselOrder o(r.nu);
    const ScaledValue k = bessel_k_scaled(o, r.x);
    const ScaledValue kp = bessel_k_derivative_scaled(o, r.x);
    EXPECT_NEAR(k.value_times_exp(r.x) / r.k_exp, 1.0, 1e-13) << "nu=" << r.nu << " x=" << r.x;
    EXPECT_NEAR(kp.value_times_exp(r.x) / r.kp_exp, 1.0, 1e-13) << "nu=" << r.nu << " x=" << r.x;
    EXPECT_NEAR(std::log(k.mantissa()) + k.log_scale(), r.log_k, 1e-13 * std::max(1.0, std::abs(r.log_k)));
  }
}

TEST(BesselK, HugeValuesStayRepresentable) {
  // K_100(0.5) ~ 1e216 * e^-0.5; far larger orders overflow a plain double
  const ScaledValue k = bessel_k_scaled(BesselOrder(100), 0.5);
  EXPECT_NEAR((std::log(k.mantissa()) + k.log_scale()) / 497.06986298990663493, 1.0, 1e-13);
  const ScaledValue big = bessel_k_scaled(BesselOrder(400), 0.1);
  EXPECT_TRUE(std::isfinite(big.log_scale()));
  EXPECT_GT(big.log_scale(), 1000.0);
}

TEST(BesselK, MatchesIntegralRepresentation) {
  // K_nu(x) = int_0^inf exp(-x cosh t) cosh(nu t) dt, trapezoid on a wide range
  for (double nu : {0.0, 0.7, 3.0}) {
    for (double x : {0.3, 2.0, 9.0}) {
      const double step = 1e-3;
      double s = 0.5;  // t = 0 term, halved
      for (int i = 1; i < 20000; ++i) {
        const double t = i * step;
        s += std::exp(-x * (std::cosh(t) - 1.0)) * std::cosh(nu * t);
      }
      const double k_exp = s * step;
      EXPECT_NEAR(bessel_k_scaled(BesselOrder(nu), x).value_times_exp(x) / k_exp, 1.0, 1e-10)
          << nu << " " << x;
    }
  }
}

TEST(ScaledValue, NormalizesMantissa) {
  const ScaledValue v = ScaledValue::from(123.0, 2.0);
  EXPECT_GE(std::abs(v.mantissa()), 1.0);
  EXPECT_LT(std::abs(v.mantissa()), std::exp(1.0));
  EXPECT_NEAR(v.value(), 123.0 * std::exp(2.0), 1e-10);
  EXPECT_EQ(ScaledValue::from(0.0, 5.0).value(), 0.0);
}

TEST(BesselZeros, MatchReferenceValues) {
  struct Z {
    double nu;
    int l;
    double z;
  };
  const Z refs[] = {{0, 1, 2.4048255576957727686},  {0, 2, 5.5200781102863106496},
                    {0, 5, 14.930917708487785948},  {0, 20, 62.048469190227169883},
                    {1, 1, 3.8317059702075123156},  {1, 20, 63.611356698481232631},
                    {2.5, 1, 5.7634591968945497914}, {2.5, 5, 18.689036355362822202},
                    {10, 1, 14.475500686554541238}, {10, 20, 77.106734246861295048},
                    {0.5, 5, 15.707963267948966192}};
  for (const Z& r : refs) {
    EXPECT_NEAR(bessel_j_zero(BesselOrder(r.nu), r.l), r.z, 1e-12 * r.z) << r.nu << " " << r.l;
  }
  const auto zs = bessel_j_zeros(BesselOrder(0), 5);
  ASSERT_EQ(zs.size(), 5u);
  EXPECT_NEAR(zs[1], 5.5200781102863106496, 1e-13);
}

TEST(BesselZeros, ThroughReturnsOneBeyond) {
  const auto zs = bessel_j_zeros_through(BesselOrder(0), 10.0);
  ASSERT_EQ(zs.size(), 4u);  // 2.40, 5.52, 8.65, then 11.79
  EXPECT_GT(zs.back(), 10.0);
  EXPECT_LT(zs[2], 10.0);
}

TEST(BesselZeros, HalfIntegerAreMultiplesOfPi) {
  const auto zs = bessel_j_zeros(BesselOrder(0.5), 30);
  for (int l = 0; l < 30; ++l) EXPECT_NEAR(zs[l], (l + 1) * std::numbers::pi, 1e-12 * (l + 1));
}

TEST(Quadrature, GaussLegendreIntegratesPolynomialsExactly) {
  const auto rule = pwell::quad::gauss_legendre(8);
  const double v = pwell::quad::integrate(rule, 0.0, 2.0, [](double x) { return std::pow(x, 15); });
  EXPECT_NEAR(v, std::pow(2.0, 16) / 16.0, 1e-9);
}
