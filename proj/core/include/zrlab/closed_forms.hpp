#pragma once

// Analytic and quadrature references: hat-shaped frequency data, the
// first Duhamel iterate of the transport field, the bilinear response
// L_hat, the small-dispersion solution and the scaling embedding.
//
// Continuous transforms use the unitary convention
//   f_hat(xi) = (2 pi)^{-1/2} int f(x) exp(-i xi x) dx,
// so ||f||_{H^s}^2 = int (1 + |xi|)^{2s} |f_hat(xi)|^2 dxi.

#include <cstddef>
#include <string>
#include <vector>

#include "zrlab/model.hpp"
#include "zrlab/quadrature.hpp"

namespace zrlab {

/// f_hat = amplitude on [lo, hi], zero elsewhere.
struct HatDatum {
  double amplitude = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  std::string tag;

  double width() const noexcept { return hi - lo; }
  bool contains(double xi) const noexcept { return xi >= lo && xi <= hi; }
};

using HatData = std::vector<HatDatum>;

enum class HatVariant {
  inflation_f,  ///< [-N-1/N, -N] and [N+1, N+1+1/N]
  inflation_g,  ///< [-N-1/N, -N] and [N-1, N-1+1/N]
  c2_B0,        ///< [0, 1/N]
  c2_psi10,     ///< [-1/N, 1/N]
};

/// Hats with amplitude N^{1/2 - k} (pass l as `k` for c2_psi10).
HatData build_fN(int N, double k, HatVariant variant);

/// H^s norm of a sum of hats, by Gauss-Legendre quadrature.
double hat_sobolev_norm(const HatData& data, double s, std::size_t nodes = 64);

/// Rescales all amplitudes so that the H^s norm is exactly 1.
HatData normalize_hats(HatData data, double s, std::size_t nodes = 64);

/// Sum of hats evaluated at xi.
double hat_value(const HatData& data, double xi);

/// Grid coefficients of hat data: c_j = f_hat(xi_j) w_j sqrt(2 pi) / L, with
/// w_j = 1/2 when xi_j sits on a hat endpoint (to 1e-9 of the mode spacing)
/// and 1 inside.
SpectralCoefficients sample_hats(const HatData& data, const GridPtr& grid);

/// (exp(i t a) - 1) / (i a), continuous at a = 0.
complex resonance_phi(double t, double a);

/// L_hat(xi, t) = exp(-i t xi^2) int B0_hat(x1) psi10_hat(xi - x1) phi(t, (xi - x1)(xi + x1 - 1)) dx1.
complex L_hat(double xi, double t, const HatDatum& b0, const HatDatum& psi10, std::size_t quad_nodes = 64);

/// ||L(., t)||_{H^k} by outer quadrature in xi.
double L_hat_norm(double t, const HatDatum& b0, const HatDatum& psi10, double k, std::size_t quad_nodes = 64);

/// One transport channel psi_t + speed psi_x = source (|B|^2)_x driven by the
/// free Schroedinger flow i B_t + dispersion B_xx = 0.
struct TransportChannel {
  double dispersion = 1.0;
  double speed = 1.0;
  double source = 1.0;
};

/// Fourier transform of the first Duhamel iterate
///   psi(t) = int_0^t W(t - t') source (|U(t') f|^2)_x dt'
/// at frequency xi.
complex first_order_psi_hat(double xi, double t, const HatData& f, const TransportChannel& ch = {},
                            std::size_t nodes = 64);

/// ||psi(t)||_{H^l} of the first Duhamel iterate.
double first_order_psi1(double t, const HatData& f, double l, const TransportChannel& ch = {},
                        std::size_t nodes = 64);

/// A(x, t) = exp(-i t (psi_plus0 + psi_minus0)) B0.
ComplexField small_dispersion_solution(double t, const ComplexField& b0, const RealField& psi_plus0,
                                       const RealField& psi_minus0);

/// L Theta exp(-i c^2 t) exp(i c x) B~(L mu (x - c t)), with B~ given by its
/// coefficients at the rescaled time L^2 t and evaluated by trigonometric
/// interpolation (periodic wrap).
complex scaling_embed(const SpectralCoefficients& b_tilde, double L, double theta, double mu, double c, double x,
                      double t);

/// True when L mu (x - c t) falls inside the rescaled box without wrapping.
bool embedding_inside(const SpectralGrid& grid, double L, double mu, double c, double x, double t);

/// C-infinity plateau: 1 on |x| <= 1, 0 on |x| >= 2.
double plateau(double x);

/// cos(3x) sin(x) / x, equal to 1 at x = 0.
double decoherence_profile(double x);

}  // namespace zrlab
