#include "zrlab/closed_forms.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace zrlab {
namespace {

const double kInvSqrt2Pi = 1.0 / std::sqrt(2.0 * std::numbers::pi);

double bracket_power(double xi, double s) { return std::pow(1.0 + std::abs(xi), 2.0 * s); }

double smooth_step(double y) {
  if (y <= 0.0) return 0.0;
  if (y >= 1.0) return 1.0;
  const double a = std::exp(-1.0 / y);
  const double b = std::exp(-1.0 / (1.0 - y));
  return a / (a + b);
}

}  // namespace

HatData build_fN(int N, double k, HatVariant variant) {
  if (N < 2) throw ContractViolation("build_fN: N must be >= 2");
  const double n = static_cast<double>(N);
  const double amp = std::pow(n, 0.5 - k);
  const double w = 1.0 / n;
  switch (variant) {
    case HatVariant::inflation_f:
      return {{amp, -n - w, -n, "f_A"}, {amp, n + 1.0, n + 1.0 + w, "f_B"}};
    case HatVariant::inflation_g:
      return {{amp, -n - w, -n, "g_A"}, {amp, n - 1.0, n - 1.0 + w, "g_B"}};
    case HatVariant::c2_B0:
      return {{amp, 0.0, w, "B0"}};
    case HatVariant::c2_psi10:
      return {{amp, -w, w, "psi10"}};
  }
  throw ContractViolation("build_fN: unknown variant");
}

double hat_value(const HatData& data, double xi) {
  double v = 0.0;
  for (const auto& h : data) {
    if (h.contains(xi)) v += h.amplitude;
  }
  return v;
}

double hat_sobolev_norm(const HatData& data, double s, std::size_t nodes) {
  std::vector<double> breaks{0.0};
  for (const auto& h : data) {
    if (!(h.hi > h.lo)) throw ContractViolation("hat_sobolev_norm: hat with empty support");
    breaks.push_back(h.lo);
    breaks.push_back(h.hi);
  }
  breaks = sorted_breaks(std::move(breaks));
  const GaussLegendre rule(nodes);
  const double sum = rule.integrate_panels(
      [&](double xi) {
        const double v = hat_value(data, xi);
        return v == 0.0 ? 0.0 : bracket_power(xi, s) * v * v;
      },
      breaks);
  return std::sqrt(sum);
}

HatData normalize_hats(HatData data, double s, std::size_t nodes) {
  const double norm = hat_sobolev_norm(data, s, nodes);
  if (!(norm > 0.0)) throw ContractViolation("normalize_hats: zero norm");
  for (auto& h : data) h.amplitude /= norm;
  return data;
}

SpectralCoefficients sample_hats(const HatData& data, const GridPtr& grid) {
  if (!grid) throw ContractViolation("sample_hats: null grid");
  SpectralCoefficients out(grid);
  const double dxi = 2.0 * std::numbers::pi / grid->length();
  const double tol = 1e-9 * dxi;
  const double scale = std::sqrt(2.0 * std::numbers::pi) / grid->length();
  for (std::size_t k = 0; k < grid->size(); ++k) {
    const double xi = grid->wavenumber(k);
    double v = 0.0;
    for (const auto& h : data) {
      if (xi < h.lo - tol || xi > h.hi + tol) continue;
      const bool edge = std::abs(xi - h.lo) <= tol || std::abs(xi - h.hi) <= tol;
      v += edge ? 0.5 * h.amplitude : h.amplitude;
    }
    out[k] = v * scale;
  }
  return out;
}

complex resonance_phi(double t, double a) {
  const double ta = t * a;
  if (std::abs(ta) < 1e-6) return t * complex(1.0 - ta * ta / 6.0, 0.5 * ta);
  const double half = std::sin(0.5 * ta);
  return complex(-2.0 * half * half, std::sin(ta)) / complex(0.0, a);
}

complex L_hat(double xi, double t, const HatDatum& b0, const HatDatum& psi10, std::size_t quad_nodes) {
  const double lo = std::max(b0.lo, xi - psi10.hi);
  const double hi = std::min(b0.hi, xi - psi10.lo);
  if (!(hi > lo)) return 0.0;
  const GaussLegendre rule(quad_nodes);
  const complex integral =
      rule.integrate([&](double x1) { return resonance_phi(t, (xi - x1) * (xi + x1 - 1.0)); }, lo, hi);
  return std::polar(1.0, -t * xi * xi) * b0.amplitude * psi10.amplitude * integral;
}

double L_hat_norm(double t, const HatDatum& b0, const HatDatum& psi10, double k, std::size_t quad_nodes) {
  if (quad_nodes < 16) throw ContractViolation("L_hat_norm: need at least 16 quadrature nodes");
  const auto breaks = sorted_breaks(
      {b0.lo + psi10.lo, b0.lo + psi10.hi, b0.hi + psi10.lo, b0.hi + psi10.hi, 0.0});
  const GaussLegendre outer(quad_nodes);
  const double lo = b0.lo + psi10.lo;
  const double hi = b0.hi + psi10.hi;
  std::vector<double> panels;
  for (double b : breaks) {
    if (b >= lo && b <= hi) panels.push_back(b);
  }
  const double sum = outer.integrate_panels(
      [&](double xi) { return bracket_power(xi, k) * std::norm(L_hat(xi, t, b0, psi10, quad_nodes)); }, panels);
  return std::sqrt(sum);
}

complex first_order_psi_hat(double xi, double t, const HatData& f, const TransportChannel& ch, std::size_t nodes) {
  const GaussLegendre rule(nodes);
  complex sum = 0.0;
  for (const auto& p : f) {
    for (const auto& q : f) {
      const double lo = std::max(p.lo, xi + q.lo);
      const double hi = std::min(p.hi, xi + q.hi);
      if (!(hi > lo)) continue;
      const complex inner = rule.integrate(
          [&](double x1) { return resonance_phi(t, xi * (ch.speed - ch.dispersion * (2.0 * x1 - xi))); }, lo, hi);
      sum += p.amplitude * q.amplitude * inner;
    }
  }
  return ch.source * complex(0.0, xi) * std::polar(1.0, -ch.speed * xi * t) * kInvSqrt2Pi * sum;
}

double first_order_psi1(double t, const HatData& f, double l, const TransportChannel& ch, std::size_t nodes) {
  if (t == 0.0) return 0.0;
  std::vector<double> breaks{0.0};
  for (const auto& p : f) {
    for (const auto& q : f) {
      breaks.insert(breaks.end(), {p.lo - q.hi, p.hi - q.lo, p.lo - q.lo, p.hi - q.hi});
    }
  }
  breaks = sorted_breaks(std::move(breaks));
  const GaussLegendre rule(nodes);
  const double sum = rule.integrate_panels(
      [&](double xi) { return bracket_power(xi, l) * std::norm(first_order_psi_hat(xi, t, f, ch, nodes)); },
      breaks);
  return std::sqrt(sum);
}

ComplexField small_dispersion_solution(double t, const ComplexField& b0, const RealField& psi_plus0,
                                       const RealField& psi_minus0) {
  require_same_grid(b0.grid(), psi_plus0.grid(), "small_dispersion_solution");
  require_same_grid(b0.grid(), psi_minus0.grid(), "small_dispersion_solution");
  ComplexField out = b0;
  for (std::size_t m = 0; m < out.size(); ++m) out[m] *= std::polar(1.0, -t * (psi_plus0[m] + psi_minus0[m]));
  return out;
}

complex scaling_embed(const SpectralCoefficients& b_tilde, double L, double theta, double mu, double c, double x,
                      double t) {
  const double y = L * mu * (x - c * t);
  return L * theta * std::polar(1.0, c * x - c * c * t) * interpolate(b_tilde, y);
}

bool embedding_inside(const SpectralGrid& grid, double L, double mu, double c, double x, double t) {
  const double y = L * mu * (x - c * t);
  return y >= -0.5 * grid.length() && y < 0.5 * grid.length();
}

double plateau(double x) {
  const double r = std::abs(x);
  return 1.0 - smooth_step(r - 1.0);
}

double decoherence_profile(double x) {
  const double sinc = std::abs(x) < 1e-4 ? 1.0 - x * x / 6.0 : std::sin(x) / x;
  return std::cos(3.0 * x) * sinc;
}

}  // namespace zrlab
