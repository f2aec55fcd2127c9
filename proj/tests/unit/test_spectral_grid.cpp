#include "zrlab/spectral_grid.hpp"

#include <cmath>
#include <numbers>

#include "gtest/gtest.h"
#include "oracles.hpp"

namespace zrlab {
namespace {

constexpr double kPi = std::numbers::pi;

double max_abs_diff(std::span<const complex> a, std::span<const complex> b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
  return worst;
}

TEST(SpectralGrid, NodesAndWavenumbers) {
  const auto g = SpectralGrid::make(2.0 * kPi, 8);
  EXPECT_DOUBLE_EQ(g->node(0), -kPi);
  EXPECT_DOUBLE_EQ(g->spacing(), kPi / 4.0);
  EXPECT_EQ(g->mode(3), 3);
  EXPECT_EQ(g->mode(4), -4);
  EXPECT_EQ(g->mode(7), -1);
  EXPECT_EQ(g->nyquist_slot(), 4u);
  EXPECT_DOUBLE_EQ(g->wavenumber(7), -1.0);
  EXPECT_EQ(g->slot_of_mode(-1), 7u);
  EXPECT_THROW(g->slot_of_mode(4), ContractViolation);
}

TEST(SpectralGrid, RejectsBadSizes) {
  EXPECT_THROW(SpectralGrid(1.0, 7), ContractViolation);
  EXPECT_THROW(SpectralGrid(0.0, 8), ContractViolation);
  EXPECT_THROW(SpectralGrid(-1.0, 8), ContractViolation);
}

TEST(SpectralGrid, DealiasMaskKeepsTwoThirds) {
  const auto g = SpectralGrid::make(10.0, 64);
  std::size_t kept = 0;
  for (std::size_t k = 0; k < g->size(); ++k) {
    const bool inside = 3 * std::labs(g->mode(k)) <= 64;
    EXPECT_EQ(g->retained(k), inside) << "slot " << k;
    kept += inside;
  }
  EXPECT_EQ(g->retained_count(), kept);
  EXPECT_EQ(kept, 43u);
  EXPECT_DOUBLE_EQ(g->max_retained_wavenumber(), 21.0 * 2.0 * kPi / 10.0);
}

TEST(Transform, MatchesDirectDft) {
  const auto g = SpectralGrid::make(7.5, 64);
  const auto f = oracle::random_complex(64, 11);
  const auto fast = forward_transform(g, f);
  const auto slow = oracle::direct_dft(*g, f);
  EXPECT_LT(max_abs_diff(fast.values(), slow), 1e-14);
}

TEST(Transform, RoundTripRandomField) {
  const auto g = SpectralGrid::make(3.0, 64);
  ComplexField f(g, oracle::random_complex(64, 5));
  const auto back = inverse_transform(forward_transform(f));
  double norm = 0.0;
  for (auto z : f.values()) norm = std::max(norm, std::abs(z));
  EXPECT_LT(max_abs_diff(back.values(), f.values()) / norm, 1e-12);
}

TEST(Transform, RealFieldHasHermitianCoefficients) {
  const auto g = SpectralGrid::make(5.0, 32);
  const auto f = RealField::sample(g, [](double x) { return std::exp(-x * x) * (1.0 + x); });
  const auto c = forward_transform(f);
  for (long j = 1; j < 16; ++j) {
    EXPECT_NEAR(std::abs(c[g->slot_of_mode(j)] - std::conj(c[g->slot_of_mode(-j)])), 0.0, 1e-15);
  }
  const auto back = to_real(inverse_transform(c));
  for (std::size_t m = 0; m < 32; ++m) EXPECT_NEAR(back[m], f[m], 1e-14);
}

TEST(Transform, ToRealRejectsImaginaryContent) {
  const auto g = SpectralGrid::make(1.0, 8);
  ComplexField f(g);
  f[2] = complex(1.0, 1e-3);
  EXPECT_THROW(to_real(f), NumericalHealthError);
}

TEST(Transform, MismatchedGridsRejected) {
  const auto a = SpectralGrid::make(1.0, 8);
  const auto b = SpectralGrid::make(2.0, 8);
  EXPECT_THROW(inner_product(ComplexField(a), ComplexField(b)), ContractViolation);
  EXPECT_THROW(ComplexField(a, std::vector<complex>(7)), ContractViolation);
}

TEST(Derivative, SecondDerivativeOfCosine) {
  const double L = 10.0;
  const double w = 2.0 * kPi / L;
  const auto g = SpectralGrid::make(L, 64);
  const auto f = RealField::sample(g, [&](double x) { return std::cos(w * x); });
  const auto d2 = spectral_derivative(f, 2);
  double worst = 0.0;
  for (std::size_t m = 0; m < g->size(); ++m) {
    worst = std::max(worst, std::abs(d2[m] + w * w * std::cos(w * g->node(m))));
  }
  EXPECT_LT(worst, 1e-12);
}

TEST(Derivative, FirstDerivativeOfGaussian) {
  const auto g = SpectralGrid::make(40.0, 256);
  const auto f = ComplexField::sample(g, [](double x) { return complex(std::exp(-x * x), 0.0); });
  const auto d = spectral_derivative(f, 1);
  for (std::size_t m = 0; m < g->size(); ++m) {
    const double x = g->node(m);
    EXPECT_NEAR(d[m].real(), -2.0 * x * std::exp(-x * x), 1e-12);
  }
}

TEST(Derivative, OddOrderZeroesNyquist) {
  const auto g = SpectralGrid::make(2.0 * kPi, 8);
  SpectralCoefficients c(g);
  c[g->nyquist_slot()] = 1.0;
  EXPECT_EQ(spectral_derivative(c, 1)[g->nyquist_slot()], complex(0.0));
  EXPECT_EQ(spectral_derivative(c, 2)[g->nyquist_slot()], complex(-16.0));
}

TEST(Sobolev, SingleModeFormula) {
  const double L = 2.0 * kPi;
  const auto g = SpectralGrid::make(L, 32);
  const auto f = ComplexField::sample(g, [](double x) { return std::polar(1.0, 4.0 * x); });
  EXPECT_NEAR(sobolev_norm(f, 1.0), std::sqrt(2.0 * kPi) * 5.0, 1e-12);
  EXPECT_NEAR(sobolev_norm(f, 0.0), std::sqrt(2.0 * kPi), 1e-13);
  EXPECT_NEAR(sobolev_norm(f, -0.5), std::sqrt(2.0 * kPi) / std::sqrt(5.0), 1e-13);
}

TEST(Sobolev, L2NormMatchesGridSum) {
  const auto g = SpectralGrid::make(12.0, 128);
  ComplexField f(g, oracle::random_complex(128, 3));
  double sum = 0.0;
  for (auto z : f.values()) sum += std::norm(z);
  EXPECT_NEAR(sobolev_norm(f, 0.0), std::sqrt(sum * g->spacing()), 1e-12);
  EXPECT_NEAR(std::sqrt(inner_product(f, f).real()), sobolev_norm(f, 0.0), 1e-12);
}

TEST(Dealias, QuadraticProductMatchesExactConvolution) {
  const std::size_t n = 64;
  const long band = 21;  // |j| <= n/3
  const auto g = SpectralGrid::make(2.0 * kPi, n);
  auto ca = oracle::random_complex(n, 21);
  auto cb = oracle::random_complex(n, 22);
  for (std::size_t k = 0; k < n; ++k) {
    if (std::labs(g->mode(k)) > band) ca[k] = cb[k] = 0.0;
  }
  const auto a = inverse_transform(SpectralCoefficients(g, ca));
  const auto b = inverse_transform(SpectralCoefficients(g, cb));
  ComplexField prod(g);
  for (std::size_t m = 0; m < n; ++m) prod[m] = a[m] * b[m];
  const auto got = dealias(forward_transform(prod));

  long offset = 0;
  const auto exact = oracle::exact_convolution(*g, ca, cb, band, offset);
  double worst = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const long j = g->mode(k);
    const complex want = std::labs(j) <= band ? exact[static_cast<std::size_t>(j + offset)] : complex(0.0);
    worst = std::max(worst, std::abs(got[k] - want));
  }
  EXPECT_LT(worst, 1e-12);
}

TEST(Interpolate, ReproducesSamplesAndBandLimitedValues) {
  const double L = 6.0;
  const auto g = SpectralGrid::make(L, 32);
  const double w = 2.0 * kPi / L;
  auto fn = [&](double x) { return complex(std::cos(3.0 * w * x), std::sin(w * x)); };
  const auto f = ComplexField::sample(g, fn);
  const auto c = forward_transform(f);
  for (std::size_t m = 0; m < 32; m += 5) EXPECT_LT(std::abs(interpolate(c, g->node(m)) - f[m]), 1e-13);
  for (double x : {0.123, -2.9, 2.99, 7.7}) EXPECT_LT(std::abs(interpolate(c, x) - fn(x)), 1e-13);
}

TEST(Interpolate, NyquistEntersAsCosine) {
  const double L = 2.0 * kPi;
  const auto g = SpectralGrid::make(L, 8);
  SpectralCoefficients c(g);
  c[g->nyquist_slot()] = 1.0;
  // sampled exp(-4 i x) on this grid is indistinguishable from cos(4 x)
  for (double x : {0.1, 0.5, 1.7}) EXPECT_NEAR(std::abs(interpolate(c, x) - std::cos(4.0 * x)), 0.0, 1e-14);
}

}  // namespace
}  // namespace zrlab
