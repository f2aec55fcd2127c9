#pragma once

// Gauss-Legendre rules and composite panel integration.

#include <cstddef>
#include <span>
#include <vector>

namespace zrlab {

/// n-point Gauss-Legendre rule on [-1, 1].
class GaussLegendre {
 public:
  explicit GaussLegendre(std::size_t n);

  std::size_t size() const noexcept { return nodes_.size(); }
  std::span<const double> nodes() const noexcept { return nodes_; }
  std::span<const double> weights() const noexcept { return weights_; }

  /// int_a^b f(x) dx.
  template <class Fn>
  auto integrate(Fn&& f, double a, double b) const {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    decltype(f(mid)) sum{};
    for (std::size_t i = 0; i < nodes_.size(); ++i) sum += weights_[i] * f(mid + half * nodes_[i]);
    return sum * half;
  }

  /// Sum of the rule over consecutive panels [breaks[i], breaks[i+1]].
  /// `breaks` must be sorted; empty panels are skipped.
  template <class Fn>
  auto integrate_panels(Fn&& f, std::span<const double> breaks) const {
    decltype(f(0.0)) sum{};
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
      if (breaks[i + 1] > breaks[i]) sum += integrate(f, breaks[i], breaks[i + 1]);
    }
    return sum;
  }

 private:
  std::vector<double> nodes_;
  std::vector<double> weights_;
};

/// Sorts and removes duplicates (to a relative tolerance).
std::vector<double> sorted_breaks(std::vector<double> points, double tol = 1e-14);

}  // namespace zrlab
