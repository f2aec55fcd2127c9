// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.
// Usage: zrlab_acceptance [criterion numbers...]

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <numbers>
#include <set>
#include <sstream>
#include <string>

#include "oracles.hpp"
#include "zrlab/closed_forms.hpp"
#include "zrlab/experiments.hpp"

namespace {

using namespace zrlab;

struct Outcome {
  bool ok = false;
  std::string detail;
};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

bool within(double v, double lo, double hi) { return v >= lo && v <= hi; }

double metric(const ExperimentResult& r, const std::string& name) {
  const auto it = r.metrics.find(name);
  return it == r.metrics.end() ? std::nan("") : it->second;
}

Outcome mass() {
  auto s = defaults_for(ExperimentKind::conserve);
  s.params.preset = "normalized";
  s.grid = {64.0, 512};
  s.stepper.dt = 1e-3;
  s.stepper.t_end = 5.0;
  s.experiment.refine = false;
  const auto r = run_experiment(s);
  const double d = metric(r, "Q1_drift");
  return {d < 1e-10, "Q1 drift " + num(d) + " (< 1e-10)"};
}

Outcome energy() {
  auto s = defaults_for(ExperimentKind::conserve);
  s.grid = {64.0, 512};
  s.stepper.dt = 1e-3;
  s.stepper.t_end = 5.0;
  const auto& p = s.params;
  if (!(p.omega > 0.0 && p.beta - p.nu * p.nu > 0.0)) return {false, "preset violates omega > 0, beta - nu^2 > 0"};
  const auto r = run_experiment(s);
  const double d = metric(r, "Q4_drift");
  const double ratio = metric(r, "Q4_ratio");
  return {d < 1e-6 && within(ratio, 3.5, 4.5),
          "Q4 drift " + num(d) + " (< 1e-6), halved-dt ratio " + num(ratio) + " (in [3.5, 4.5])"};
}

Outcome plane_wave() {
  const auto grid = SpectralGrid::make(64.0, 256);
  const auto coeffs = normalized_coefficients();
  const double kappa = 2.0 * std::numbers::pi * 3.0 / 64.0;
  const auto pw = plane_wave_state(0.8, kappa, 0.3, -0.2, coeffs, grid);
  const auto& b0 = pw.state.B;
  double norm0 = 0.0;
  for (std::size_t m = 0; m < b0.size(); ++m) norm0 += std::norm(b0[m]);
  const Observer err{{"err"}, [&](const FieldState& s, std::span<double> out) {
                       const complex phase = std::polar(1.0, -pw.frequency * s.time);
                       double e = 0.0;
                       for (std::size_t m = 0; m < s.B.size(); ++m) e += std::norm(s.B[m] - b0[m] * phase);
                       out[0] = std::sqrt(e / norm0);
                     }};
  StepperConfig cfg;
  cfg.dt = 1e-3;
  cfg.t_end = 1.0;
  cfg.record_every = 50;
  const std::vector<Observer> obs{err};
  const auto rec = evolve(pw.state, coeffs, cfg, obs);
  const auto col = rec.column("err");
  const double worst = *std::max_element(col.begin(), col.end());
  return {worst < 1e-6, "max relative L2 error " + num(worst) + " over t in [0, 1] (< 1e-6)"};
}

Outcome inflation() {
  const auto s = defaults_for(ExperimentKind::inflate);
  const auto r = run_experiment(s);
  const double slope = metric(r, "slope");
  const double r2 = metric(r, "r_squared");
  bool ratios = true;
  std::string rs;
  for (long N : s.experiment.N_list) {
    const double q = metric(r, "ratio_N" + std::to_string(N));
    ratios = ratios && within(q, 0.8, 1.25);
    rs += (rs.empty() ? "" : ", ") + num(q);
  }
  return {std::abs(slope - 0.25) <= 0.1 && r2 >= 0.98 && ratios,
          "slope " + num(slope) + " (0.25 +- 0.1), r2 " + num(r2) + " (>= 0.98), oracle ratios " + rs +
              " (in [0.8, 1.25])"};
}

Outcome c2_failure() {
  const auto s = defaults_for(ExperimentKind::c2probe);
  const auto r = run_experiment(s);
  const double slope = metric(r, "slope");
  const auto& e = s.experiment;
  double worst = 0.0;
  for (long N : e.N_list) {
    const auto b0 = build_fN(static_cast<int>(N), e.k, HatVariant::c2_B0).front();
    const auto p10 = build_fN(static_cast<int>(N), e.l, HatVariant::c2_psi10).front();
    const double closed = metric(r, "norm_N" + std::to_string(N));
    const double oracle = oracle::L_norm_time_integral(e.t_probe, b0, p10, e.k);
    worst = std::max(worst, std::abs(closed / oracle - 1.0));
  }
  return {std::abs(slope - 0.5) <= 0.1 && worst <= 1e-6,
          "slope " + num(slope) + " (0.5 +- 0.1), closed form vs time quadrature " + num(worst) + " (<= 1e-6)"};
}

Outcome decoherence() {
  const auto s = defaults_for(ExperimentKind::decohere);
  const auto r = run_experiment(s);
  const bool a = metric(r, "check_a") == 1.0;
  const double over = metric(r, "sep_final_over_target");
  const double init = metric(r, "sep_initial_over_final");
  const bool structural = metric(r, "phase_identity_error") <= 1e-12 * std::numbers::pi &&
                          metric(r, "theta_identity_error") <= 1e-15;
  const bool b = within(over, 0.5, 1.5) && init < 0.1;
  std::string d = std::string("(a) ") + (a ? "ok" : "off") + ", (b) final/target " + num(over) +
                  " (in [0.5, 1.5]), initial/final " + num(init) + " (< 0.1), identities " +
                  (structural ? "exact" : "off");
  if (!b) d += "; at L2/L1 = " + num(metric(r, "L_ratio")) + " the dilation already separates the data at t = 0";
  return {a && b && structural && r.verdict == Verdict::pass, d};
}

Outcome growth() {
  const auto s = defaults_for(ExperimentKind::growth);
  const auto r = run_experiment(s);
  return {r.verdict == Verdict::pass, "H1 max " + num(metric(r, "H1_max")) + " vs envelope " +
                                          num(metric(r, "H1_envelope")) + ", psi envelope " +
                                          (metric(r, "psi_envelope_ok") == 1.0 ? "held" : "broken") + ", verdict " +
                                          to_string(r.verdict)};
}

Outcome cross_validation() {
  double lo = 1e300, hi = 0.0;
  for (long N : {32L, 64L}) {
    const auto grid = inflation_grid(N, 4, 22);
    HatData f = normalize_hats(build_fN(static_cast<int>(N), 0.25, HatVariant::inflation_f), 0.25);
    for (double t : {0.005, 0.01, 0.02}) {
      const double q = inflation_solver_norm(f, grid, t, 0.25, 20, false) / first_order_psi1(t, f, 0.25);
      lo = std::min(lo, q);
      hi = std::max(hi, q);
    }
  }
  return {lo >= 0.9 && hi <= 1.1, "solver/oracle ratio in [" + num(lo) + ", " + num(hi) + "] (within [0.9, 1.1])"};
}

struct Criterion {
  int id;
  const char* name;
  double limit_s;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  const Criterion all[] = {
      {1, "mass conservation", 10.0, mass},
      {2, "energy conservation, second order", 30.0, energy},
      {3, "analytic plane wave", 5.0, plane_wave},
      {4, "norm inflation rate", 300.0, inflation},
      {5, "C2 failure rate", 60.0, c2_failure},
      {6, "decoherence", 300.0, decoherence},
      {7, "growth envelopes", 600.0, growth},
      {8, "solver vs first-order oracle", 60.0, cross_validation},
  };
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));

  int failed = 0;
  for (const auto& c : all) {
    if (!only.empty() && !only.count(c.id)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = wall < c.limit_s;
    const bool pass = o.ok && in_time;
    failed += pass ? 0 : 1;
    std::printf("%s %d %s: %s; %.2f s (limit %.0f s%s)\n", pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(),
                wall, c.limit_s, in_time ? "" : ", exceeded");
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
