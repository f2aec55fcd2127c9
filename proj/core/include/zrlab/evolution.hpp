#pragma once

// Strang splitting for the general-coefficient system
//
//   S(dt) = L(dt/2) o N(dt) o L(dt/2)
//
// L is the exact linear flow, diagonal in Fourier space:
//   B_hat   <- exp(-i D xi^2 tau) B_hat
//   psi_hat <- exp(-i c xi tau) psi_hat
// N is the exact flow of the remaining terms.  |B| is constant along it, so
// n = |B|^2 is frozen, psi moves linearly, psi(tau) = psi + tau s n_x, and B
// rotates by exp(-i int_0^dt V), i.e. exp(-i V(psi + dt/2 s n_x) dt).
// Traveling external potentials are sampled at the midpoint time.

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "zrlab/model.hpp"

namespace zrlab {

struct StepperConfig {
  double dt = 1e-3;
  double t_end = 1.0;
  bool dealias = true;
  long record_every = 1;
  bool midpoint_external = true;

  /// Throws ContractViolation unless 0 < dt <= t_end and record_every >= 1.
  void validate() const;
};

/// Non-finite samples appeared. Carries the time of the failing step and the
/// last state that was still finite.
class BlowUpError : public std::runtime_error {
 public:
  BlowUpError(double time, FieldState last_healthy);

  double time() const noexcept { return time_; }
  const FieldState& last_healthy() const noexcept { return last_; }

 private:
  double time_;
  FieldState last_;
};

/// Named columns appended to every recorded row.
struct Observer {
  std::vector<std::string> columns;
  std::function<void(const FieldState&, std::span<double>)> fn;
};

/// Q1..Q4 of the physical system.
Observer conserved_observer(const PhysicalParams& p);
/// Q1 only, plus NaN placeholders for Q2..Q4 (coefficients without a
/// physical parameter set).
Observer mass_observer();
/// Columns HsB_<s> for every s.
Observer sobolev_observer(std::vector<double> s_list);
/// Columns Hpsi1, Hpsi2 at regularity l.
Observer psi_observer(double l);
/// Column H, the general-coefficient energy (NaN when undefined).
Observer energy_observer(const GeneralCoefficients& c);

struct RunRecord {
  std::vector<std::string> columns;  ///< first column is "t"
  std::vector<std::vector<double>> rows;
  std::optional<FieldState> final_state;
  long steps = 0;
  double dt = 0.0;  ///< step actually used (t_end / steps)
  std::vector<std::string> warnings;

  /// Index of a column; throws ContractViolation if absent.
  std::size_t column_index(const std::string& name) const;
  std::vector<double> column(const std::string& name) const;
};

/// Exact linear flow over time tau (any sign). Advances s.time by tau.
FieldState linear_halfstep(const FieldState& s, const GeneralCoefficients& c, double tau);

/// Exact nonlinear flow over dt with externals evaluated at `external_time`
/// (default: s.time). Does not advance s.time.
FieldState nonlinear_step(const FieldState& s, const GeneralCoefficients& c, double dt, bool dealias = true,
                          std::optional<double> external_time = std::nullopt);

/// One Strang step.
FieldState strang_step(const FieldState& s, const GeneralCoefficients& c, double dt, bool dealias = true);

/// Advances s0 to s0.time + cfg.t_end. When t_end / dt is not an integer the
/// step is shortened to t_end / ceil(t_end / dt). Rows are recorded at the
/// start, every record_every steps, and at the end.
RunRecord evolve(const FieldState& s0, const GeneralCoefficients& c, const StepperConfig& cfg,
                 std::span<const Observer> observers = {});

}  // namespace zrlab
