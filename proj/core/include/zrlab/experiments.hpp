#pragma once

// Preset experiment pipelines. Each run_* consumes a validated
// ExperimentSpec and returns an ExperimentResult carrying a verdict, named
// scalar metrics, the main time series and (for sweeps) a log-log fit.

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "zrlab/closed_forms.hpp"
#include "zrlab/evolution.hpp"
#include "zrlab/fit.hpp"
#include "zrlab/model.hpp"

namespace zrlab {

enum class ExperimentKind { simulate, conserve, inflate, c2probe, decohere, growth };

std::string to_string(ExperimentKind k);
/// Throws ConfigError on an unknown name.
ExperimentKind parse_kind(const std::string& name);

struct GridSpec {
  double length = 64.0;
  std::size_t n = 512;
  friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

struct ParamsSpec {
  std::string preset = "physical";  ///< "physical" or "normalized"
  double theta = 1.0;
  double gamma = 1.0;
  double omega = 1.0;
  double beta = 2.0;
  double nu = 0.5;
  friend bool operator==(const ParamsSpec&, const ParamsSpec&) = default;
};

struct StepperSpec {
  double dt = 1e-3;
  double t_end = 5.0;
  bool dealias = true;
  long record_every = 100;
  bool midpoint_external = true;
  friend bool operator==(const StepperSpec&, const StepperSpec&) = default;
};

struct OutputSpec {
  std::string dir = ".";
  std::string prefix = "zrlab";
  bool csv = true;
  bool manifest = true;
  bool fit = true;
  friend bool operator==(const OutputSpec&, const OutputSpec&) = default;
};

/// Keys of the [experiment] section. Which keys are meaningful depends on
/// the kind; see config.hpp for the accepted sets and defaults_for() for the
/// per-kind defaults.
struct ExperimentParams {
  std::uint64_t seed = 1;

  // initial data (simulate, conserve, growth)
  std::string data = "gaussian";  ///< gaussian | plane_wave | random | zero
  double amplitude = 1.0;
  double width = 2.0;
  double center = 0.0;
  double kappa = 0.0;
  double psi_amplitude = 0.0;
  double psi_width = 2.0;
  double c1 = 0.0;
  double c2 = 0.0;
  long modes = 8;
  std::vector<double> s_list{1.0};
  double psi_l = -0.5;
  double epsilon = 0.01;
  bool refine = true;     ///< conserve: repeat at dt/2
  double fit_from = 1.0;  ///< growth: start of the envelope fit window

  // inflate / c2probe
  double k = 0.25;
  double l = 0.25;
  std::vector<long> N_list{32, 64, 128, 256};
  double t_probe = 0.1;
  std::string variant = "f";
  long points_per_hat = 4;
  long steps = 20;
  bool normalize = true;
  long quad_nodes = 64;
  long max_grid_log2 = 22;

  // decohere
  double M = 20.0;
  double mu = 0.05;
  double c = 0.5;
  double k_reg = 0.0;
  std::vector<double> mu_list{0.1, 0.05, 0.025};

  friend bool operator==(const ExperimentParams&, const ExperimentParams&) = default;
};

struct ExperimentSpec {
  ExperimentKind kind = ExperimentKind::simulate;
  GridSpec grid;
  ParamsSpec params;
  StepperSpec stepper;
  ExperimentParams experiment;
  OutputSpec output;
  friend bool operator==(const ExperimentSpec&, const ExperimentSpec&) = default;
};

/// Spec with every default resolved for `kind`.
ExperimentSpec defaults_for(ExperimentKind kind);

/// Checks the hypotheses of the chosen experiment; throws ConfigError
/// naming the violated constraint.
void validate_spec(const ExperimentSpec& spec);

struct ExperimentResult {
  ExperimentKind kind = ExperimentKind::simulate;
  Verdict verdict = Verdict::inconclusive;
  std::map<std::string, double> metrics;  ///< sorted by name
  std::vector<std::string> notes;
  std::vector<std::string> warnings;
  std::optional<RunRecord> record;
  std::optional<FitResult> fit;
};

/// Worker count for parameter sweeps: ZRLAB_THREADS if set and positive,
/// otherwise the hardware concurrency (at least 1).
unsigned sweep_threads();

/// Runs fn(0..count-1) on up to sweep_threads() workers. Results are stored
/// by index so the output does not depend on scheduling. The first
/// exception (lowest index) is rethrown.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn);

/// Coefficients selected by [params].
GeneralCoefficients coefficients_for(const ParamsSpec& p);
std::optional<PhysicalParams> physical_params_for(const ParamsSpec& p);

/// Initial state described by [experiment] data keys on `grid`.
FieldState initial_state(const ExperimentParams& e, const GridPtr& grid);

/// Standard observer set: Q1..Q4, HsB_<s> for s_list, Hpsi1/Hpsi2 at psi_l.
std::vector<Observer> standard_observers(const ExperimentSpec& spec);

/// Largest relative deviation |q(t) - q(0)| / |q(0)| (absolute if |q(0)| <= 1e-12).
double relative_drift(const std::vector<double>& series);

ExperimentResult run_simulate(const ExperimentSpec& spec);
ExperimentResult run_conserve(const ExperimentSpec& spec);
ExperimentResult run_inflate(const ExperimentSpec& spec);
ExperimentResult run_c2probe(const ExperimentSpec& spec);
ExperimentResult run_decohere(const ExperimentSpec& spec);
ExperimentResult run_growth(const ExperimentSpec& spec);

/// Dispatches on spec.kind after validate_spec.
ExperimentResult run_experiment(const ExperimentSpec& spec);

// Building blocks shared with tests.

/// Grid used for one inflation member: L = 2 pi N m, n the smallest power
/// of two whose dealiased band covers |xi| <= 2N + 2. Throws ConfigError if
/// n would exceed 2^max_log2.
GridPtr inflation_grid(long N, long points_per_hat, long max_log2);

/// ||psi_{1 or 2}(t)||_{H^l} of the full solver for hat data f on `grid`
/// (normalized preset, data (f, 0, 0)), using `steps` Strang steps.
double inflation_solver_norm(const HatData& f, const GridPtr& grid, double t, double l, long steps, bool use_psi2);

struct DecoherenceRun {
  double L = 0.0;
  double theta_sq = 0.0;
  double t_final = 0.0;  ///< rescaled time L^2 T
  double max_defect = 0.0;  ///< sup_t ||B~ - A~||_{H^k_reg}
  double mass_drift = 0.0;
  FieldState final_state;
};

/// Modified-system coefficients with scale L (external psi~_{+0} on grid).
GeneralCoefficients modified_coefficients(double mu, double L, double theta_sq, double c, const RealField& psi_plus0);

/// The windowed psi~_{+0} and plateau B~_0 sampled on `grid`.
RealField decoherence_potential(const GridPtr& grid);
ComplexField decoherence_data(const GridPtr& grid);

/// One modified-system run up to L^2 T.
DecoherenceRun run_modified_system(double mu, double M, double L, double c, double k_reg, const GridPtr& grid,
                                   const StepperSpec& stepper);

/// || r B2(r .) - B1(.) ||_{L^2} with B2 evaluated by trigonometric
/// interpolation.
double dilated_separation(const ComplexField& b2, const ComplexField& b1, double r);

/// || (exp(i pi psi~_{+0} / 2) - 1) B~_0 ||_{L^2} by quadrature.
double decoherence_target(std::size_t nodes = 64);

/// Explicit a-priori bound on ||B||_{H^1} from conserved mass and energy on
/// a torus of length `length`; empty when the energy is not coercive.
std::optional<double> h1_envelope(const GeneralCoefficients& c, double mass, double energy, double length);

}  // namespace zrlab
