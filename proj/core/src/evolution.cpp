#include "zrlab/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>

#include "fft.hpp"

namespace zrlab {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string short_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

/// Holds the precomputed spectral data and scratch buffers of one run.
/// Transforms are raw FFTs; the 1/n normalization is folded into the
/// diagonal multipliers.
class Stepper {
 public:
  Stepper(const GridPtr& grid, const GeneralCoefficients& c, bool dealias)
      : grid_(grid), c_(c), n_(grid->size()), work_(n_), nx_(n_), ext_(n_, 0.0) {
    deriv_.resize(n_);
    const double inv_n = 1.0 / static_cast<double>(n_);
    for (std::size_t k = 0; k < n_; ++k) {
      const bool keep = !dealias || grid->retained(k);
      deriv_[k] = (keep && k != grid->nyquist_slot()) ? complex(0.0, grid->wavenumber(k) * inv_n) : complex(0.0);
    }
    for (const auto* ext : {&c.external_plus, &c.external_minus}) {
      if (!ext->has_value()) continue;
      require_same_grid((*ext)->profile.grid(), *grid, "evolve: external potential");
      std::vector<complex> coeffs(n_);
      for (std::size_t m = 0; m < n_; ++m) coeffs[m] = (*ext)->profile[m] * inv_n;
      detail::fft_forward(coeffs);
      externals_.push_back({std::move(coeffs), (*ext)->speed});
    }
    needs_source_ = c.source_plus != 0.0 || c.source_minus != 0.0;
  }

  void linear(FieldState& s, double tau) {
    if (tau == 0.0) return;
    const double inv_n = 1.0 / static_cast<double>(n_);

    auto b = s.B.values();
    detail::fft_forward(b);
    for (std::size_t k = 0; k < n_; ++k) {
      const double xi = grid_->wavenumber(k);
      b[k] *= std::polar(inv_n, -c_.dispersion * xi * xi * tau);
    }
    detail::fft_backward(b);

    // psi1 + i psi2 share one complex transform; the two real spectra are
    // separated with the Hermitian symmetry, advanced, and recombined.
    for (std::size_t m = 0; m < n_; ++m) work_[m] = complex(s.psi1[m], s.psi2[m]);
    detail::fft_forward(work_);
    const std::size_t half = n_ / 2;
    for (std::size_t k = 0; k <= half; ++k) {
      const std::size_t nk = (n_ - k) % n_;
      const complex zk = work_[k];
      const complex znk = work_[nk];
      const complex p1 = 0.5 * (zk + std::conj(znk));
      const complex p2 = complex(0.0, -0.5) * (zk - std::conj(znk));
      const double xi = grid_->wavenumber(k);
      complex m1;
      complex m2;
      if (k == half) {
        // Nyquist: translation of cos(xi x) keeps only its cosine part.
        m1 = std::cos(c_.speed_plus * xi * tau) * inv_n;
        m2 = std::cos(c_.speed_minus * xi * tau) * inv_n;
      } else {
        m1 = std::polar(inv_n, -c_.speed_plus * xi * tau);
        m2 = std::polar(inv_n, -c_.speed_minus * xi * tau);
      }
      const complex q1 = m1 * p1;
      const complex q2 = m2 * p2;
      work_[k] = q1 + complex(0.0, 1.0) * q2;
      work_[nk] = std::conj(q1) + complex(0.0, 1.0) * std::conj(q2);
    }
    detail::fft_backward(work_);
    for (std::size_t m = 0; m < n_; ++m) {
      s.psi1[m] = work_[m].real();
      s.psi2[m] = work_[m].imag();
    }
  }

  /// Returns max |V| over the grid, or NaN if any sample became non-finite.
  double nonlinear(FieldState& s, double dt, double t_ext) {
    auto b = s.B.values();
    if (needs_source_) {
      for (std::size_t m = 0; m < n_; ++m) work_[m] = std::norm(b[m]);
      detail::fft_forward(work_);
      for (std::size_t k = 0; k < n_; ++k) work_[k] *= deriv_[k];
      detail::fft_backward(work_);
      for (std::size_t m = 0; m < n_; ++m) nx_[m] = work_[m].real();
    }
    evaluate_externals(t_ext);

    const double sp = c_.source_plus;
    const double sm = c_.source_minus;
    double vmax = 0.0;
    bool healthy = true;
    for (std::size_t m = 0; m < n_; ++m) {
      const double n = std::norm(b[m]);
      const double dp = needs_source_ ? dt * sp * nx_[m] : 0.0;
      const double dm = needs_source_ ? dt * sm * nx_[m] : 0.0;
      const double v = c_.potential_plus * (s.psi1[m] + 0.5 * dp) + c_.potential_minus * (s.psi2[m] + 0.5 * dm) +
                       c_.cubic * n + ext_[m];
      b[m] *= std::polar(1.0, -v * dt);
      s.psi1[m] += dp;
      s.psi2[m] += dm;
      vmax = std::max(vmax, std::abs(v));
      if (!std::isfinite(v) || !std::isfinite(b[m].real()) || !std::isfinite(b[m].imag())) healthy = false;
    }
    return healthy ? vmax : kNaN;
  }

 private:
  struct External {
    std::vector<complex> coeffs;
    double speed;
  };

  void evaluate_externals(double t) {
    if (externals_.empty()) return;
    std::fill(ext_.begin(), ext_.end(), 0.0);
    for (const auto& ext : externals_) {
      for (std::size_t k = 0; k < n_; ++k) {
        const double phase = -grid_->wavenumber(k) * ext.speed * t;
        work_[k] = k == n_ / 2 ? ext.coeffs[k] * std::cos(phase) : ext.coeffs[k] * std::polar(1.0, phase);
      }
      detail::fft_backward(work_);
      for (std::size_t m = 0; m < n_; ++m) ext_[m] += work_[m].real();
    }
  }

  GridPtr grid_;
  const GeneralCoefficients& c_;
  std::size_t n_;
  std::vector<complex> deriv_;
  std::vector<complex> work_;
  std::vector<double> nx_;
  std::vector<double> ext_;
  std::vector<External> externals_;
  bool needs_source_ = true;
};

}  // namespace

void StepperConfig::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ContractViolation("StepperConfig: dt must be positive");
  if (!(t_end >= dt) || !std::isfinite(t_end)) throw ContractViolation("StepperConfig: need dt <= t_end");
  if (record_every < 1) throw ContractViolation("StepperConfig: record_every must be >= 1");
}

BlowUpError::BlowUpError(double time, FieldState last_healthy)
    : std::runtime_error("evolve: non-finite field at t = " + std::to_string(time)),
      time_(time),
      last_(std::move(last_healthy)) {}

Observer conserved_observer(const PhysicalParams& p) {
  return {{"Q1", "Q2", "Q3", "Q4"}, [p](const FieldState& s, std::span<double> out) {
            const auto q = conserved_quantities(s, p);
            out[0] = q.Q1;
            out[1] = q.Q2;
            out[2] = q.Q3;
            out[3] = q.Q4;
          }};
}

Observer mass_observer() {
  return {{"Q1", "Q2", "Q3", "Q4"}, [](const FieldState& s, std::span<double> out) {
            double mass = 0.0;
            for (const auto& b : s.B.values()) mass += std::norm(b);
            out[0] = mass * s.grid().spacing();
            out[1] = out[2] = out[3] = kNaN;
          }};
}

Observer sobolev_observer(std::vector<double> s_list) {
  std::vector<std::string> names;
  for (double s : s_list) names.push_back("HsB_" + short_number(s));
  return {std::move(names), [s_list](const FieldState& st, std::span<double> out) {
            const auto coeffs = forward_transform(st.B);
            for (std::size_t i = 0; i < s_list.size(); ++i) out[i] = sobolev_norm(coeffs, s_list[i]);
          }};
}

Observer psi_observer(double l) {
  return {{"Hpsi1", "Hpsi2"}, [l](const FieldState& s, std::span<double> out) {
            out[0] = sobolev_norm(s.psi1, l);
            out[1] = sobolev_norm(s.psi2, l);
          }};
}

Observer energy_observer(const GeneralCoefficients& c) {
  return {{"H"}, [c](const FieldState& s, std::span<double> out) { out[0] = hamiltonian(s, c).value_or(kNaN); }};
}

std::size_t RunRecord::column_index(const std::string& name) const {
  const auto it = std::find(columns.begin(), columns.end(), name);
  if (it == columns.end()) throw ContractViolation("RunRecord: no column named " + name);
  return static_cast<std::size_t>(it - columns.begin());
}

std::vector<double> RunRecord::column(const std::string& name) const {
  const std::size_t j = column_index(name);
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& row : rows) out.push_back(row[j]);
  return out;
}

FieldState linear_halfstep(const FieldState& s, const GeneralCoefficients& c, double tau) {
  FieldState out = s;
  Stepper(s.grid_ptr(), c, true).linear(out, tau);
  out.time += tau;
  return out;
}

FieldState nonlinear_step(const FieldState& s, const GeneralCoefficients& c, double dt, bool dealias,
                          std::optional<double> external_time) {
  FieldState out = s;
  const double v = Stepper(s.grid_ptr(), c, dealias).nonlinear(out, dt, external_time.value_or(s.time));
  if (std::isnan(v)) throw BlowUpError(s.time + dt, s);
  return out;
}

FieldState strang_step(const FieldState& s, const GeneralCoefficients& c, double dt, bool dealias) {
  Stepper st(s.grid_ptr(), c, dealias);
  FieldState out = s;
  st.linear(out, 0.5 * dt);
  if (std::isnan(st.nonlinear(out, dt, s.time + 0.5 * dt))) throw BlowUpError(s.time + dt, s);
  st.linear(out, 0.5 * dt);
  out.time = s.time + dt;
  return out;
}

RunRecord evolve(const FieldState& s0, const GeneralCoefficients& c, const StepperConfig& cfg,
                 std::span<const Observer> observers) {
  cfg.validate();
  c.validate();

  RunRecord rec;
  rec.columns.push_back("t");
  std::size_t width = 1;
  for (const auto& obs : observers) {
    rec.columns.insert(rec.columns.end(), obs.columns.begin(), obs.columns.end());
    width += obs.columns.size();
  }
  auto record = [&](const FieldState& s) {
    std::vector<double> row(width);
    row[0] = s.time;
    std::size_t offset = 1;
    for (const auto& obs : observers) {
      obs.fn(s, std::span<double>(row).subspan(offset, obs.columns.size()));
      offset += obs.columns.size();
    }
    rec.rows.push_back(std::move(row));
  };

  const long steps = std::max(1L, static_cast<long>(std::ceil(cfg.t_end / cfg.dt - 1e-9)));
  const double dt = cfg.t_end / static_cast<double>(steps);
  const double h = 0.5 * dt;
  const double t0 = s0.time;
  rec.steps = steps;
  rec.dt = dt;

  Stepper st(s0.grid_ptr(), c, cfg.dealias);
  FieldState s = s0;
  record(s);
  st.linear(s, h);

  bool warned = false;
  std::optional<FieldState> healthy;
  for (long i = 0; i < steps; ++i) {
    const double t_start = t0 + static_cast<double>(i) * dt;
    healthy = s;
    const double t_ext = cfg.midpoint_external ? t_start + h : t_start;
    const double vmax = st.nonlinear(s, dt, t_ext);
    if (std::isnan(vmax)) {
      st.linear(*healthy, -h);
      healthy->time = t_start;
      throw BlowUpError(t_start + dt, std::move(*healthy));
    }
    if (!warned && vmax * dt >= std::numbers::pi) {
      rec.warnings.push_back("phase wrap: dt * max|V| = " + short_number(vmax * dt) + " >= pi at t = " +
                             short_number(t_start));
      warned = true;
    }
    const bool last = i + 1 == steps;
    if (last || (i + 1) % cfg.record_every == 0) {
      st.linear(s, h);
      s.time = t0 + static_cast<double>(i + 1) * dt;
      record(s);
      if (!last) st.linear(s, h);
    } else {
      st.linear(s, dt);
    }
  }
  rec.final_state = std::move(s);
  return rec;
}

}  // namespace zrlab
