#include "zrlab/model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace zrlab {
namespace {

bool finite(double v) { return std::isfinite(v); }

void require_transport_grids(const RealField& a, const RealField& b, const char* where) {
  require_same_grid(a.grid(), b.grid(), where);
}

}  // namespace

PhysicalParams::PhysicalParams(double theta, double gamma, double omega, double beta, double nu)
    : theta_(theta), gamma_(gamma), omega_(omega), beta_(beta), nu_(nu) {
  if (!finite(theta) || !finite(gamma) || !finite(omega) || !finite(beta) || !finite(nu)) {
    throw ContractViolation("PhysicalParams: coefficients must be finite");
  }
  if (theta == 0.0) throw ContractViolation("PhysicalParams: theta must be nonzero");
  if (!(beta > 0.0)) throw ContractViolation("PhysicalParams: beta must be positive");
  if (beta - nu * nu == 0.0) throw ContractViolation("PhysicalParams: beta - nu^2 must be nonzero");
  q_ = gamma + nu * (gamma * nu - 1.0) / (2.0 * (beta - nu * nu));
}

void GeneralCoefficients::validate() const {
  for (double v : {dispersion, potential_plus, potential_minus, cubic, speed_plus, speed_minus, source_plus,
                   source_minus}) {
    if (!finite(v)) throw ContractViolation("GeneralCoefficients: non-finite coefficient");
  }
  for (const auto* ext : {&external_plus, &external_minus}) {
    if (!ext->has_value()) continue;
    if (!finite((*ext)->speed)) throw ContractViolation("GeneralCoefficients: non-finite external speed");
    for (double v : (*ext)->profile.values()) {
      if (!finite(v)) throw ContractViolation("GeneralCoefficients: non-finite external profile");
    }
  }
}

GeneralCoefficients coefficients_from_params(const PhysicalParams& p) {
  const double sb = std::sqrt(p.beta());
  const double g = p.gamma();
  const double nu = p.nu();
  const double th = p.theta();
  GeneralCoefficients c;
  c.dispersion = p.omega();
  c.potential_plus = g * (sb - 0.5 * nu);
  c.potential_minus = -g * (sb + 0.5 * nu);
  c.cubic = g * p.q();
  c.speed_plus = (sb - nu) / th;
  c.speed_minus = -(sb + nu) / th;
  c.source_plus = (g / (2.0 * th)) * (-1.0 + nu / (2.0 * sb));
  c.source_minus = (g / (2.0 * th)) * (-1.0 - nu / (2.0 * sb));
  return c;
}

GeneralCoefficients normalized_coefficients() {
  GeneralCoefficients c;
  c.dispersion = 1.0;
  c.potential_plus = 1.0;
  c.potential_minus = 1.0;
  c.cubic = 1.0;
  c.speed_plus = 1.0;
  c.speed_minus = -1.0;
  c.source_plus = 1.0;
  c.source_minus = 1.0;
  return c;
}

FieldState::FieldState(ComplexField b, RealField p1, RealField p2, double t)
    : B(std::move(b)), psi1(std::move(p1)), psi2(std::move(p2)), time(t) {
  require_same_grid(B.grid(), psi1.grid(), "FieldState");
  require_same_grid(B.grid(), psi2.grid(), "FieldState");
}

FieldState FieldState::zero(const GridPtr& grid) {
  return FieldState(ComplexField(grid), RealField(grid), RealField(grid), 0.0);
}

PhysicalVars to_physical_vars(const RealField& psi1, const RealField& psi2, const PhysicalParams& p) {
  require_transport_grids(psi1, psi2, "to_physical_vars");
  const double sb = std::sqrt(p.beta());
  RealField rho(psi1.grid_ptr());
  RealField u(psi1.grid_ptr());
  for (std::size_t m = 0; m < psi1.size(); ++m) {
    rho[m] = psi1[m] + psi2[m];
    u[m] = sb * (psi1[m] - psi2[m]);
  }
  return {std::move(rho), std::move(u)};
}

PhysicalVars to_physical_vars(const FieldState& s, const PhysicalParams& p) {
  return to_physical_vars(s.psi1, s.psi2, p);
}

TransportVars from_physical_vars(const RealField& rho, const RealField& u, const PhysicalParams& p) {
  require_transport_grids(rho, u, "from_physical_vars");
  const double sb = std::sqrt(p.beta());
  RealField psi1(rho.grid_ptr());
  RealField psi2(rho.grid_ptr());
  for (std::size_t m = 0; m < rho.size(); ++m) {
    psi1[m] = 0.5 * (rho[m] + u[m] / sb);
    psi2[m] = 0.5 * (rho[m] - u[m] / sb);
  }
  return {std::move(psi1), std::move(psi2)};
}

ConservedReport conserved_quantities(const FieldState& s, const PhysicalParams& p) {
  const auto& grid = s.grid();
  const double dx = grid.spacing();
  const ComplexField bx = spectral_derivative(s.B, 1);
  const auto [rho, u] = to_physical_vars(s, p);

  double mass = 0.0;
  double quartic = 0.0;
  double gradient = 0.0;
  double coupling = 0.0;
  double rho2 = 0.0;
  double u2 = 0.0;
  double urho = 0.0;
  complex current = 0.0;  // sum of (B conj(B_x) - B_x conj(B))
  double scale = 0.0;
  for (std::size_t m = 0; m < grid.size(); ++m) {
    const complex b = s.B[m];
    const double n = std::norm(b);
    mass += n;
    quartic += n * n;
    gradient += std::norm(bx[m]);
    coupling += (u[m] - 0.5 * p.nu() * rho[m]) * n;
    rho2 += rho[m] * rho[m];
    u2 += u[m] * u[m];
    urho += u[m] * rho[m];
    current += b * std::conj(bx[m]) - bx[m] * std::conj(b);
    scale = std::max(scale, std::abs(b) * std::abs(bx[m]));
  }

  const complex momentum_term = complex(0.0, 0.5) * current * dx;
  const complex drift_term = complex(0.0, p.nu() / (4.0 * p.theta())) * current * dx;
  const double tol = 1e-10 * std::max(1.0, scale * grid.length());
  if (std::abs(momentum_term.imag()) > tol || std::abs(drift_term.imag()) > tol) {
    throw NumericalHealthError("conserved_quantities: momentum density has an imaginary residue");
  }

  ConservedReport r;
  r.time = s.time;
  r.Q1 = mass * dx;
  r.Q3 = urho * dx + momentum_term.real();
  r.Q4 = 0.5 * p.omega() * gradient * dx + 0.25 * p.gamma() * p.q() * quartic * dx +
         0.5 * p.gamma() * coupling * dx + 0.25 * p.beta() * rho2 * dx + 0.25 * u2 * dx + drift_term.real();
  r.Q2 = r.Q4 - (p.nu() / (2.0 * p.theta())) * r.Q3;
  return r;
}

namespace {

struct ChannelWeights {
  double energy = 0.0;    // coefficient of int psi^2 in H
  double momentum = 0.0;  // coefficient of int psi^2 in P
};

std::optional<ChannelWeights> channel_weights(double potential, double speed, double source) {
  if (potential == 0.0) return ChannelWeights{};
  if (source == 0.0) return std::nullopt;
  return ChannelWeights{-potential * speed / (4.0 * source), -potential / (2.0 * source)};
}

}  // namespace

std::optional<double> hamiltonian(const FieldState& s, const GeneralCoefficients& c) {
  if (c.has_external()) return std::nullopt;
  const auto wp = channel_weights(c.potential_plus, c.speed_plus, c.source_plus);
  const auto wm = channel_weights(c.potential_minus, c.speed_minus, c.source_minus);
  if (!wp || !wm) return std::nullopt;

  const double dx = s.grid().spacing();
  const ComplexField bx = spectral_derivative(s.B, 1);
  double h = 0.0;
  for (std::size_t m = 0; m < s.grid().size(); ++m) {
    const double n = std::norm(s.B[m]);
    h += 0.5 * c.dispersion * std::norm(bx[m]) + 0.25 * c.cubic * n * n +
         0.5 * (c.potential_plus * s.psi1[m] + c.potential_minus * s.psi2[m]) * n +
         wp->energy * s.psi1[m] * s.psi1[m] + wm->energy * s.psi2[m] * s.psi2[m];
  }
  return h * dx;
}

std::optional<double> momentum(const FieldState& s, const GeneralCoefficients& c) {
  if (c.has_external()) return std::nullopt;
  const auto wp = channel_weights(c.potential_plus, c.speed_plus, c.source_plus);
  const auto wm = channel_weights(c.potential_minus, c.speed_minus, c.source_minus);
  if (!wp || !wm) return std::nullopt;

  const double dx = s.grid().spacing();
  const ComplexField bx = spectral_derivative(s.B, 1);
  double pm = 0.0;
  for (std::size_t m = 0; m < s.grid().size(); ++m) {
    pm += std::imag(std::conj(s.B[m]) * bx[m]) + wp->momentum * s.psi1[m] * s.psi1[m] +
          wm->momentum * s.psi2[m] * s.psi2[m];
  }
  return pm * dx;
}

PlaneWave plane_wave_state(double amplitude, double kappa, double c1, double c2, const GeneralCoefficients& coeffs,
                           const GridPtr& grid) {
  if (!grid) throw ContractViolation("plane_wave_state: null grid");
  const double dxi = 2.0 * std::numbers::pi / grid->length();
  const double j = std::round(kappa / dxi);
  const long half = static_cast<long>(grid->size() / 2);
  if (std::abs(kappa - j * dxi) > 1e-9 * std::max(1.0, std::abs(kappa)) || j < -half || j >= half) {
    throw ContractViolation("plane_wave_state: kappa is not a grid wavenumber");
  }
  auto b = ComplexField::sample(grid, [&](double x) { return amplitude * std::polar(1.0, kappa * x); });
  auto p1 = RealField::sample(grid, [&](double) { return c1; });
  auto p2 = RealField::sample(grid, [&](double) { return c2; });
  const double omega = coeffs.dispersion * kappa * kappa + coeffs.potential_plus * c1 +
                       coeffs.potential_minus * c2 + coeffs.cubic * amplitude * amplitude;
  return {FieldState(std::move(b), std::move(p1), std::move(p2), 0.0), omega};
}

IterationSchedule iteration_schedule(double norm_psi1, double norm_psi2, double norm_b0, double epsilon) {
  if (!(norm_psi1 >= 0.0) || !(norm_psi2 >= 0.0)) {
    throw ContractViolation("iteration_schedule: norms must be non-negative");
  }
  if (!(norm_b0 > 0.0)) throw ContractViolation("iteration_schedule: |B0| must be positive");
  if (!(epsilon >= 0.0 && epsilon < 1.0 / 6.0)) {
    throw ContractViolation("iteration_schedule: epsilon must lie in [0, 1/6)");
  }
  const double smallest = std::min(norm_psi1, norm_psi2);
  if (smallest == 0.0) return {1.0, 1};

  const double exponent = 0.5 - 3.0 * epsilon;
  const double step = std::min(1.0, std::pow(smallest, -1.0 / exponent));
  const double raw = smallest / (std::pow(step, exponent) * norm_b0 * norm_b0);
  // Tolerate rounding just above an integer.
  const double count = std::ceil(raw * (1.0 - 1e-12));
  return {step, std::max<long>(1, static_cast<long>(count))};
}

}  // namespace zrlab
