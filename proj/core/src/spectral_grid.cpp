#include "zrlab/spectral_grid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "fft.hpp"

namespace zrlab {

SpectralGrid::SpectralGrid(double length, std::size_t n_points) : length_(length), n_(n_points) {
  if (!(length > 0.0) || !std::isfinite(length)) {
    throw ContractViolation("SpectralGrid: period length must be positive and finite");
  }
  if (n_points < 2 || n_points % 2 != 0) {
    throw ContractViolation("SpectralGrid: n_points must be even and >= 2");
  }
  spacing_ = length_ / static_cast<double>(n_);
  wavenumbers_.resize(n_);
  mask_.resize(n_);
  const double dxi = 2.0 * std::numbers::pi / length_;
  for (std::size_t k = 0; k < n_; ++k) {
    const long j = mode(k);
    wavenumbers_[k] = dxi * static_cast<double>(j);
    // |j| <= n/3  <=>  3|j| <= n
    const bool keep = 3 * static_cast<std::size_t>(std::labs(j)) <= n_;
    mask_[k] = keep ? 1 : 0;
    if (keep) ++retained_count_;
  }
}

double SpectralGrid::max_retained_wavenumber() const noexcept {
  double best = 0.0;
  for (std::size_t k = 0; k < n_; ++k) {
    if (mask_[k]) best = std::max(best, std::abs(wavenumbers_[k]));
  }
  return best;
}

std::size_t SpectralGrid::slot_of_mode(long j) const {
  const long half = static_cast<long>(n_ / 2);
  if (j < -half || j >= half) throw ContractViolation("SpectralGrid: mode outside representable range");
  return j >= 0 ? static_cast<std::size_t>(j) : static_cast<std::size_t>(j + static_cast<long>(n_));
}

void require_same_grid(const SpectralGrid& a, const SpectralGrid& b, const char* where) {
  if (!(a == b)) throw ContractViolation(std::string(where) + ": fields live on different grids");
}

SpectralCoefficients forward_transform(const GridPtr& grid, std::span<const complex> samples) {
  if (!grid) throw ContractViolation("forward_transform: null grid");
  if (samples.size() != grid->size()) throw ContractViolation("forward_transform: length mismatch");
  std::vector<complex> data(samples.begin(), samples.end());
  detail::fft_forward(data);
  // exp(-i xi_j x_m) = (-1)^j exp(-2 pi i j m / n) because x_0 = -L/2.
  const double scale = 1.0 / static_cast<double>(grid->size());
  for (std::size_t k = 0; k < data.size(); ++k) data[k] *= (k % 2 == 0) ? scale : -scale;
  return SpectralCoefficients(grid, std::move(data));
}

SpectralCoefficients forward_transform(const ComplexField& f) {
  return forward_transform(f.grid_ptr(), f.values());
}

SpectralCoefficients forward_transform(const RealField& f) { return forward_transform(to_complex(f)); }

ComplexField inverse_transform(const SpectralCoefficients& coeffs) {
  std::vector<complex> data(coeffs.values().begin(), coeffs.values().end());
  for (std::size_t k = 1; k < data.size(); k += 2) data[k] = -data[k];
  detail::fft_backward(data);
  return ComplexField(coeffs.grid_ptr(), std::move(data));
}

ComplexField to_complex(const RealField& f) {
  std::vector<complex> data(f.size());
  std::transform(f.values().begin(), f.values().end(), data.begin(), [](double v) { return complex(v, 0.0); });
  return ComplexField(f.grid_ptr(), std::move(data));
}

RealField to_real(const ComplexField& f, double tolerance) {
  double scale = 0.0;
  double residue = 0.0;
  std::vector<double> data(f.size());
  for (std::size_t m = 0; m < f.size(); ++m) {
    scale = std::max(scale, std::abs(f[m]));
    residue = std::max(residue, std::abs(f[m].imag()));
    data[m] = f[m].real();
  }
  if (residue > tolerance * std::max(scale, 1e-300)) {
    throw NumericalHealthError("to_real: imaginary residue " + std::to_string(residue) +
                               " exceeds tolerance relative to max modulus " + std::to_string(scale));
  }
  return RealField(f.grid_ptr(), std::move(data));
}

SpectralCoefficients spectral_derivative(const SpectralCoefficients& coeffs, int order) {
  if (order < 0) throw ContractViolation("spectral_derivative: order must be non-negative");
  const auto& grid = coeffs.grid();
  SpectralCoefficients out = coeffs;
  if (order == 0) return out;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const complex ixi(0.0, grid.wavenumber(k));
    complex factor(1.0, 0.0);
    for (int p = 0; p < order; ++p) factor *= ixi;
    out[k] *= factor;
  }
  if (order % 2 == 1) out[grid.nyquist_slot()] = 0.0;
  return out;
}

ComplexField spectral_derivative(const ComplexField& f, int order) {
  return inverse_transform(spectral_derivative(forward_transform(f), order));
}

RealField spectral_derivative(const RealField& f, int order) {
  const ComplexField d = spectral_derivative(to_complex(f), order);
  std::vector<double> data(d.size());
  for (std::size_t m = 0; m < d.size(); ++m) data[m] = d[m].real();
  return RealField(f.grid_ptr(), std::move(data));
}

double sobolev_norm(const SpectralCoefficients& coeffs, double s) {
  const auto& grid = coeffs.grid();
  double sum = 0.0;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double a2 = std::norm(coeffs[k]);
    if (a2 == 0.0) continue;
    sum += std::pow(1.0 + std::abs(grid.wavenumber(k)), 2.0 * s) * a2;
  }
  return std::sqrt(grid.length() * sum);
}

double sobolev_norm(const ComplexField& f, double s) { return sobolev_norm(forward_transform(f), s); }

double sobolev_norm(const RealField& f, double s) { return sobolev_norm(forward_transform(f), s); }

SpectralCoefficients dealias(const SpectralCoefficients& coeffs) {
  SpectralCoefficients out = coeffs;
  const auto& grid = coeffs.grid();
  for (std::size_t k = 0; k < grid.size(); ++k) {
    if (!grid.retained(k)) out[k] = 0.0;
  }
  return out;
}

complex inner_product(const ComplexField& a, const ComplexField& b) {
  require_same_grid(a.grid(), b.grid(), "inner_product");
  complex sum = 0.0;
  for (std::size_t m = 0; m < a.size(); ++m) sum += std::conj(a[m]) * b[m];
  return sum * a.grid().spacing();
}

complex interpolate(const SpectralCoefficients& coeffs, double x) {
  const auto& grid = coeffs.grid();
  complex sum = 0.0;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double xi = grid.wavenumber(k);
    if (k == grid.nyquist_slot()) {
      sum += coeffs[k] * std::cos(xi * x);
    } else {
      sum += coeffs[k] * complex(std::cos(xi * x), std::sin(xi * x));
    }
  }
  return sum;
}

}  // namespace zrlab
