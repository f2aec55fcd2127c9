#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "gtest/gtest.h"
#include "zrlab/fit.hpp"
#include "zrlab/quadrature.hpp"

namespace zrlab {
namespace {

TEST(GaussLegendre, ThreePointRule) {
  const GaussLegendre r(3);
  const double a = std::sqrt(0.6);
  EXPECT_NEAR(r.nodes()[0], -a, 1e-15);
  EXPECT_NEAR(r.nodes()[1], 0.0, 1e-15);
  EXPECT_NEAR(r.nodes()[2], a, 1e-15);
  EXPECT_NEAR(r.weights()[0], 5.0 / 9.0, 1e-14);
  EXPECT_NEAR(r.weights()[1], 8.0 / 9.0, 1e-14);
}

TEST(GaussLegendre, ExactForDegreeTwoNMinusOne) {
  for (std::size_t n : {4u, 16u, 64u}) {
    const GaussLegendre r(n);
    double wsum = 0.0;
    for (double w : r.weights()) wsum += w;
    EXPECT_NEAR(wsum, 2.0, 1e-14);
    const int deg = static_cast<int>(2 * n - 1);
    const double got = r.integrate([&](double x) { return std::pow(x, deg - 1) + std::pow(x, deg); }, 0.0, 1.0);
    EXPECT_NEAR(got, 1.0 / deg + 1.0 / (deg + 1), 1e-14) << "n = " << n;
  }
}

TEST(GaussLegendre, ComplexIntegrandAndPanels) {
  const GaussLegendre r(32);
  const auto z = r.integrate([](double x) { return std::polar(1.0, 3.0 * x); }, 0.0, 1.0);
  EXPECT_NEAR(std::abs(z - (std::polar(1.0, 3.0) - 1.0) / std::complex<double>(0.0, 3.0)), 0.0, 1e-15);
  const std::vector<double> breaks{-1.0, 0.0, 0.0, 2.0};
  EXPECT_NEAR(r.integrate_panels([](double x) { return std::abs(x); }, breaks), 2.5, 1e-14);
  EXPECT_THROW(GaussLegendre(0), std::exception);
}

TEST(SortedBreaks, DeduplicatesToTolerance) {
  const auto b = sorted_breaks({3.0, 1.0, 1.0 + 1e-16, 2.0, 3.0});
  ASSERT_EQ(b.size(), 3u);
  EXPECT_EQ(b[0], 1.0);
  EXPECT_EQ(b[2], 3.0);
}

TEST(Fit, RecoversExactLine) {
  const std::vector<double> x{1, 2, 3, 4, 5};
  std::vector<double> y;
  for (double v : x) y.push_back(0.5 - 2.0 * v);
  const auto f = fit_line(x, y);
  EXPECT_NEAR(f.slope, -2.0, 1e-14);
  EXPECT_NEAR(f.intercept, 0.5, 1e-13);
  EXPECT_NEAR(f.r_squared, 1.0, 1e-14);
  EXPECT_TRUE(fit_is_conclusive(f));
  EXPECT_NEAR(f.predict(10.0), -19.5, 1e-12);
}

TEST(Fit, LogLogPowerLaw) {
  const std::vector<double> N{16, 32, 64, 128};
  std::vector<double> v;
  for (double n : N) v.push_back(3.0 * std::pow(n, 0.25));
  const auto f = fit_loglog(N, v);
  EXPECT_NEAR(f.slope, 0.25, 1e-14);
  EXPECT_NEAR(f.intercept, std::log(3.0), 1e-13);
  EXPECT_NEAR(f.x[0], std::log(16.0), 1e-15);
}

TEST(Fit, KnownResidualsGiveKnownR2) {
  // y = x + (+1, -1, -1, +1): slope 1 by symmetry, SSres = 4, SStot = 5 + 4
  const std::vector<double> x{0, 1, 2, 3};
  const std::vector<double> y{1, 0, 1, 4};
  const auto f = fit_line(x, y);
  EXPECT_NEAR(f.slope, 1.0, 1e-14);
  EXPECT_NEAR(f.intercept, 0.0, 1e-14);
  EXPECT_NEAR(f.r_squared, 1.0 - 4.0 / 9.0, 1e-14);
  EXPECT_FALSE(fit_is_conclusive(f));
}

TEST(Fit, ConclusiveNeedsFourPoints) {
  const std::vector<double> x{1, 2, 3};
  const std::vector<double> y{1, 2, 3};
  EXPECT_FALSE(fit_is_conclusive(fit_line(x, y)));
}

TEST(Fit, RejectsBadInput) {
  const std::vector<double> two{1, 2};
  EXPECT_THROW(fit_line(two, two), std::exception);
  const std::vector<double> flat{1, 1, 1};
  const std::vector<double> y{1, 2, 3};
  EXPECT_THROW(fit_line(flat, y), std::exception);
  const std::vector<double> neg{-1, 2, 3};
  EXPECT_THROW(fit_loglog(y, neg), std::exception);
}

TEST(Verdict, Names) {
  EXPECT_EQ(to_string(Verdict::pass), "pass");
  EXPECT_EQ(to_string(Verdict::fail), "fail");
  EXPECT_EQ(to_string(Verdict::inconclusive), "inconclusive");
}

}  // namespace
}  // namespace zrlab
