#pragma once

// Zakharov-Rubenchik model: physical parameters, the normalized coefficient
// record driving the solver, the (B, psi1, psi2) state, the change of
// variables to (rho, u), conserved functionals and analytic references.
//
// Every system handled here is an instance of
//
//   i B_t + D B_xx = (a+ psi1 + a- psi2 + g |B|^2 + V_ext(x, t)) B
//   psi1_t + c+ psi1_x = s+ (|B|^2)_x
//   psi2_t + c- psi2_x = s- (|B|^2)_x
//
// with (D, a+-, g, c+-, s+-) stored in GeneralCoefficients.

#include <optional>
#include <string>

#include "zrlab/spectral_grid.hpp"

namespace zrlab {

/// Coefficients (theta, gamma, omega, beta, nu) of the physical system; q is
/// derived as q = gamma + nu (gamma nu - 1) / (2 (beta - nu^2)).
class PhysicalParams {
 public:
  PhysicalParams(double theta, double gamma, double omega, double beta, double nu);

  double theta() const noexcept { return theta_; }
  double gamma() const noexcept { return gamma_; }
  double omega() const noexcept { return omega_; }
  double beta() const noexcept { return beta_; }
  double nu() const noexcept { return nu_; }
  double q() const noexcept { return q_; }

  /// omega > 0 and beta - nu^2 > 0: the regime with a coercive energy.
  bool energy_coercive() const noexcept { return omega_ > 0.0 && beta_ - nu_ * nu_ > 0.0; }

  friend bool operator==(const PhysicalParams&, const PhysicalParams&) = default;

 private:
  double theta_;
  double gamma_;
  double omega_;
  double beta_;
  double nu_;
  double q_;
};

/// A potential profile that is advected rigidly: V(x, t) = profile(x - speed t).
struct TravelingProfile {
  RealField profile;
  double speed = 0.0;
};

struct GeneralCoefficients {
  double dispersion = 0.0;
  double potential_plus = 0.0;
  double potential_minus = 0.0;
  double cubic = 0.0;
  double speed_plus = 0.0;
  double speed_minus = 0.0;
  double source_plus = 0.0;
  double source_minus = 0.0;
  std::optional<TravelingProfile> external_plus;
  std::optional<TravelingProfile> external_minus;

  bool has_external() const noexcept { return external_plus.has_value() || external_minus.has_value(); }

  /// Throws ContractViolation on non-finite entries.
  void validate() const;
};

GeneralCoefficients coefficients_from_params(const PhysicalParams& p);

/// i B_t + B_xx = (psi+ + psi- + |B|^2) B,  psi+-_t +- psi+-_x = (|B|^2)_x.
GeneralCoefficients normalized_coefficients();

struct FieldState {
  FieldState(ComplexField b, RealField p1, RealField p2, double t = 0.0);

  /// Zero state on `grid`.
  static FieldState zero(const GridPtr& grid);

  const SpectralGrid& grid() const noexcept { return B.grid(); }
  const GridPtr& grid_ptr() const noexcept { return B.grid_ptr(); }

  ComplexField B;
  RealField psi1;
  RealField psi2;
  double time = 0.0;
};

struct PhysicalVars {
  RealField rho;
  RealField u;
};

struct TransportVars {
  RealField psi1;
  RealField psi2;
};

/// rho = psi1 + psi2, u = sqrt(beta) (psi1 - psi2).
PhysicalVars to_physical_vars(const FieldState& s, const PhysicalParams& p);
PhysicalVars to_physical_vars(const RealField& psi1, const RealField& psi2, const PhysicalParams& p);

/// psi1 = (rho + u / sqrt(beta)) / 2, psi2 = (rho - u / sqrt(beta)) / 2.
TransportVars from_physical_vars(const RealField& rho, const RealField& u, const PhysicalParams& p);

struct ConservedReport {
  double Q1 = 0.0;
  double Q2 = 0.0;
  double Q3 = 0.0;
  double Q4 = 0.0;
  double time = 0.0;
};

/// Q1 = int |B|^2, Q3 = int u rho + (i/2) int (B conj(B)_x - B_x conj(B)),
/// Q4 = (omega/2) int |B_x|^2 + (gamma q/4) int |B|^4
///      + (gamma/2) int (u - nu rho/2) |B|^2 + (beta/4) int rho^2
///      + (1/4) int u^2 + (i nu / 4 theta) int (B conj(B)_x - B_x conj(B)),
/// Q2 = Q4 - (nu / 2 theta) Q3.  Grid sums with spectral derivatives.
/// Throws NumericalHealthError if a functional that must be real carries an
/// imaginary residue above 1e-10 (relative).
ConservedReport conserved_quantities(const FieldState& s, const PhysicalParams& p);

/// Energy of the general-coefficient system,
///   H = (D/2) int |B_x|^2 + (g/4) int |B|^4 + (1/2) sum a int psi |B|^2
///       - sum (a c / 4 s) int psi^2,
/// and its momentum
///   P = int Im(conj(B) B_x) - sum (a / 2 s) int psi^2.
/// For physical coefficients P = theta int u rho + int Im(conj(B) B_x) and
/// Q4 = H + (nu / 2 theta) P.  Both are empty when a channel couples to B
/// without a source term, or when external potentials are present.
std::optional<double> hamiltonian(const FieldState& s, const GeneralCoefficients& c);
std::optional<double> momentum(const FieldState& s, const GeneralCoefficients& c);

struct PlaneWave {
  FieldState state;
  double frequency = 0.0;  ///< Omega in B = A exp(i (kappa x - Omega t)).
};

/// B = A exp(i kappa x), psi1 = c1, psi2 = c2; exact solution with
/// Omega = D kappa^2 + a+ c1 + a- c2 + g A^2. Throws if kappa is not a grid
/// wavenumber.
PlaneWave plane_wave_state(double amplitude, double kappa, double c1, double c2, const GeneralCoefficients& coeffs,
                           const GridPtr& grid);

struct IterationSchedule {
  double step = 1.0;  ///< Delta T
  long count = 1;     ///< m
  double span() const noexcept { return step * static_cast<double>(count); }
};

/// Step size and iteration count of the global iteration:
///   Delta T = min(|psi1|, |psi2|)^{-1/(1/2 - 3 eps)} clamped to (0, 1],
///   m = ceil(min(|psi1|, |psi2|) / (Delta T^{1/2 - 3 eps} |B0|^2)).
/// A vanishing psi norm gives the free regime (1, 1).
IterationSchedule iteration_schedule(double norm_psi1, double norm_psi2, double norm_b0, double epsilon = 0.01);

}  // namespace zrlab
