#pragma once

// Periodic grid on [-L/2, L/2), its discrete Fourier transform, spectral
// derivatives, 2/3-rule dealiasing and the discrete Sobolev norms.
//
// Transform convention:
//   f_hat[j] = (1/n) sum_m f(x_m) exp(-i xi_j x_m),   xi_j = 2 pi j / L,
// so that (1/n) sum_m |f(x_m)|^2 = sum_j |f_hat[j]|^2.  Coefficients are
// stored in FFT order: slot k holds mode j = k for k < n/2 and j = k - n
// otherwise; slot n/2 is the Nyquist mode j = -n/2.

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "zrlab/errors.hpp"

namespace zrlab {

using complex = std::complex<double>;

class SpectralGrid {
 public:
  /// `length` > 0; `n_points` even and >= 2.
  SpectralGrid(double length, std::size_t n_points);

  static std::shared_ptr<const SpectralGrid> make(double length, std::size_t n_points) {
    return std::make_shared<const SpectralGrid>(length, n_points);
  }

  double length() const noexcept { return length_; }
  std::size_t size() const noexcept { return n_; }
  double spacing() const noexcept { return spacing_; }

  /// x_m = -L/2 + m dx.
  double node(std::size_t m) const noexcept { return -0.5 * length_ + spacing_ * static_cast<double>(m); }

  /// Signed mode number j of coefficient slot k.
  long mode(std::size_t k) const noexcept {
    return k < n_ / 2 ? static_cast<long>(k) : static_cast<long>(k) - static_cast<long>(n_);
  }
  double wavenumber(std::size_t k) const noexcept { return wavenumbers_[k]; }
  std::span<const double> wavenumbers() const noexcept { return wavenumbers_; }

  /// Slot of the Nyquist mode j = -n/2.
  std::size_t nyquist_slot() const noexcept { return n_ / 2; }

  /// True iff |j| <= n/3 (kept by the 2/3 rule).
  bool retained(std::size_t k) const noexcept { return mask_[k] != 0; }
  std::size_t retained_count() const noexcept { return retained_count_; }

  /// Largest |xi| kept by the dealiasing mask.
  double max_retained_wavenumber() const noexcept;

  /// Slot of mode j, or throws if |j| is outside the representable range.
  std::size_t slot_of_mode(long j) const;

  friend bool operator==(const SpectralGrid& a, const SpectralGrid& b) noexcept {
    return a.n_ == b.n_ && a.length_ == b.length_;
  }

 private:
  double length_;
  std::size_t n_;
  double spacing_;
  std::vector<double> wavenumbers_;
  std::vector<unsigned char> mask_;
  std::size_t retained_count_ = 0;
};

using GridPtr = std::shared_ptr<const SpectralGrid>;

struct PhysicalSpace {};
struct FourierSpace {};

/// Samples (physical space) or coefficients (Fourier space) bound to a grid.
template <class T, class Space>
class GridArray {
 public:
  using value_type = T;

  explicit GridArray(GridPtr grid) : grid_(std::move(grid)) {
    if (!grid_) throw ContractViolation("GridArray: null grid");
    values_.assign(grid_->size(), T{});
  }

  GridArray(GridPtr grid, std::vector<T> values) : grid_(std::move(grid)), values_(std::move(values)) {
    if (!grid_) throw ContractViolation("GridArray: null grid");
    if (values_.size() != grid_->size()) {
      throw ContractViolation("GridArray: length " + std::to_string(values_.size()) +
                              " does not match grid size " + std::to_string(grid_->size()));
    }
  }

  /// Samples `fn(x_m)` at every node (physical space only).
  template <class Fn>
  static GridArray sample(GridPtr grid, Fn&& fn)
    requires std::is_same_v<Space, PhysicalSpace>
  {
    GridArray out(grid);
    for (std::size_t m = 0; m < grid->size(); ++m) out.values_[m] = static_cast<T>(fn(grid->node(m)));
    return out;
  }

  const SpectralGrid& grid() const noexcept { return *grid_; }
  const GridPtr& grid_ptr() const noexcept { return grid_; }

  std::size_t size() const noexcept { return values_.size(); }
  std::span<T> values() noexcept { return values_; }
  std::span<const T> values() const noexcept { return values_; }
  std::vector<T>& storage() noexcept { return values_; }
  const std::vector<T>& storage() const noexcept { return values_; }

  T& operator[](std::size_t i) noexcept { return values_[i]; }
  const T& operator[](std::size_t i) const noexcept { return values_[i]; }

 private:
  GridPtr grid_;
  std::vector<T> values_;
};

using ComplexField = GridArray<complex, PhysicalSpace>;
using RealField = GridArray<double, PhysicalSpace>;
using SpectralCoefficients = GridArray<complex, FourierSpace>;

/// Throws ContractViolation unless both arrays live on equal grids.
void require_same_grid(const SpectralGrid& a, const SpectralGrid& b, const char* where);

SpectralCoefficients forward_transform(const ComplexField& f);
SpectralCoefficients forward_transform(const RealField& f);
/// Raw-span variant; throws ContractViolation on a length mismatch.
SpectralCoefficients forward_transform(const GridPtr& grid, std::span<const complex> samples);

ComplexField inverse_transform(const SpectralCoefficients& coeffs);

ComplexField to_complex(const RealField& f);

/// Real part of `f`; throws NumericalHealthError when the imaginary content
/// exceeds `tolerance` relative to the largest modulus.
RealField to_real(const ComplexField& f, double tolerance = 1e-12);

/// Multiplier (i xi)^order; odd orders zero the Nyquist mode.
SpectralCoefficients spectral_derivative(const SpectralCoefficients& coeffs, int order);
ComplexField spectral_derivative(const ComplexField& f, int order);
RealField spectral_derivative(const RealField& f, int order);

/// ( L * sum_j (1 + |xi_j|)^{2s} |f_hat_j|^2 )^{1/2}.
double sobolev_norm(const SpectralCoefficients& coeffs, double s);
double sobolev_norm(const ComplexField& f, double s);
double sobolev_norm(const RealField& f, double s);

/// Zeroes every coefficient outside the 2/3-rule mask.
SpectralCoefficients dealias(const SpectralCoefficients& coeffs);

/// Grid-sum approximation of the L^2 inner product, dx * sum conj(a) b.
complex inner_product(const ComplexField& a, const ComplexField& b);

/// Evaluates the trigonometric interpolant of `coeffs` at an arbitrary x
/// (periodic). The Nyquist mode enters symmetrically as a cosine.
complex interpolate(const SpectralCoefficients& coeffs, double x);

}  // namespace zrlab
