#pragma once

// Reference computations used by the tests. They are written from the
// defining formulas and share no code with the library beyond the grid and
// the Gauss-Legendre rule.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include "zrlab/closed_forms.hpp"
#include "zrlab/quadrature.hpp"
#include "zrlab/spectral_grid.hpp"

namespace oracle {

using zrlab::complex;
constexpr double kPi = std::numbers::pi;

/// O(n^2) transform, f_hat[k] = (1/n) sum_m f(x_m) exp(-i xi_k x_m), FFT order.
inline std::vector<complex> direct_dft(const zrlab::SpectralGrid& g, const std::vector<complex>& f) {
  const std::size_t n = g.size();
  std::vector<complex> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    complex sum = 0.0;
    for (std::size_t m = 0; m < n; ++m) sum += f[m] * std::polar(1.0, -g.wavenumber(k) * g.node(m));
    out[k] = sum / static_cast<double>(n);
  }
  return out;
}

/// Coefficients of the exact product of two trigonometric polynomials, by
/// direct convolution over signed mode numbers; entry j + offset.
inline std::vector<complex> exact_convolution(const zrlab::SpectralGrid& g, const std::vector<complex>& a,
                                              const std::vector<complex>& b, long band, long& offset) {
  offset = 2 * band;
  std::vector<complex> out(static_cast<std::size_t>(4 * band + 1));
  for (long i = -band; i <= band; ++i) {
    for (long j = -band; j <= band; ++j) {
      out[static_cast<std::size_t>(i + j + offset)] += a[g.slot_of_mode(i)] * b[g.slot_of_mode(j)];
    }
  }
  return out;
}

inline std::vector<complex> random_complex(std::size_t n, unsigned seed) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<complex> v(n);
  for (auto& z : v) z = {u(gen), u(gen)};
  return v;
}

/// Hat transform value, or 0 outside [lo, hi].
inline double hat(const zrlab::HatDatum& h, double xi) { return (xi >= h.lo && xi <= h.hi) ? h.amplitude : 0.0; }

/// L_hat(xi, t) from its time-integral form
///   int_0^t exp(-i (t - t') xi^2) int B0(x1) exp(-i t' x1^2) psi10(xi - x1) exp(-i t' (xi - x1)) dx1 dt'.
inline complex L_hat_time_integral(double xi, double t, const zrlab::HatDatum& b0, const zrlab::HatDatum& p,
                                   std::size_t nodes = 48) {
  const double lo = std::max(b0.lo, xi - p.hi);
  const double hi = std::min(b0.hi, xi - p.lo);
  if (!(hi > lo)) return 0.0;
  const zrlab::GaussLegendre rule(nodes);
  return rule.integrate(
      [&](double tp) {
        const complex inner = rule.integrate(
            [&](double x1) {
              return b0.amplitude * p.amplitude * std::polar(1.0, -tp * x1 * x1 - tp * (xi - x1));
            },
            lo, hi);
        return std::polar(1.0, -(t - tp) * xi * xi) * inner;
      },
      0.0, t);
}

/// ||L(., t)||_{H^k} with the time-integral form of L_hat.
inline double L_norm_time_integral(double t, const zrlab::HatDatum& b0, const zrlab::HatDatum& p, double k,
                                   std::size_t nodes = 48) {
  // L_hat is supported on b0 + p and is smooth between these kinks.
  std::vector<double> cuts{b0.lo + p.lo, b0.lo + p.hi, b0.hi + p.lo, b0.hi + p.hi, 0.0};
  std::sort(cuts.begin(), cuts.end());
  const zrlab::GaussLegendre rule(nodes);
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double a = std::max(cuts[i], b0.lo + p.lo);
    const double b = std::min(cuts[i + 1], b0.hi + p.hi);
    if (!(b > a)) continue;
    sum += rule.integrate(
        [&](double xi) {
          return std::pow(1.0 + std::abs(xi), 2.0 * k) * std::norm(L_hat_time_integral(xi, t, b0, p, nodes));
        },
        a, b);
  }
  return std::sqrt(sum);
}

/// Fourier transform (unitary) of |U(t') f|^2 at xi, U the free flow
/// i B_t + D B_xx = 0.
inline complex density_hat(double xi, double tp, const zrlab::HatData& f, double D, std::size_t nodes) {
  const zrlab::GaussLegendre rule(nodes);
  complex sum = 0.0;
  for (const auto& a : f) {
    for (const auto& b : f) {
      // x1 in a, x1 - xi in b
      const double lo = std::max(a.lo, xi + b.lo);
      const double hi = std::min(a.hi, xi + b.hi);
      if (!(hi > lo)) continue;
      sum += rule.integrate(
          [&](double x1) {
            const double x2 = x1 - xi;
            return a.amplitude * b.amplitude * std::polar(1.0, -D * tp * (x1 * x1 - x2 * x2));
          },
          lo, hi);
    }
  }
  return sum / std::sqrt(2.0 * kPi);
}

/// Transform of psi(t) = int_0^t W(t - t') s (|U(t') f|^2)_x dt' with
/// psi_t + c psi_x = 0 for W.
inline complex duhamel_psi_hat(double xi, double t, const zrlab::HatData& f, double D, double c, double s,
                               std::size_t nodes) {
  const zrlab::GaussLegendre rule(nodes);
  return rule.integrate(
      [&](double tp) {
        return std::polar(1.0, -c * xi * (t - tp)) * s * complex(0.0, xi) * density_hat(xi, tp, f, D, nodes);
      },
      0.0, t);
}

/// ||psi(t)||_{H^l} of the first Duhamel iterate by brute-force quadrature.
inline double duhamel_psi_norm(double t, const zrlab::HatData& f, double l, double D, double c, double s,
                               std::size_t nodes = 32) {
  std::vector<double> cuts{0.0};
  for (const auto& a : f) {
    for (const auto& b : f) {
      cuts.insert(cuts.end(), {a.lo - b.hi, a.lo - b.lo, a.hi - b.hi, a.hi - b.lo});
    }
  }
  std::sort(cuts.begin(), cuts.end());
  const zrlab::GaussLegendre rule(nodes);
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    if (!(cuts[i + 1] - cuts[i] > 1e-13)) continue;
    sum += rule.integrate(
        [&](double xi) {
          return std::pow(1.0 + std::abs(xi), 2.0 * l) * std::norm(duhamel_psi_hat(xi, t, f, D, c, s, nodes));
        },
        cuts[i], cuts[i + 1]);
  }
  return std::sqrt(sum);
}

}  // namespace oracle
