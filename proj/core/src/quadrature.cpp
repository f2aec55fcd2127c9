#include "zrlab/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "zrlab/errors.hpp"

namespace zrlab {

GaussLegendre::GaussLegendre(std::size_t n) : nodes_(n), weights_(n) {
  if (n == 0) throw ContractViolation("GaussLegendre: need at least one node");
  const std::size_t m = (n + 1) / 2;
  for (std::size_t i = 0; i < m; ++i) {
    // Newton iteration on P_n from the Tricomi initial guess.
    double z = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (static_cast<double>(n) + 0.5));
    double pp = 1.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p1 = 1.0;
      double p2 = 0.0;
      for (std::size_t j = 1; j <= n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * static_cast<double>(j) - 1.0) * z * p2 - (static_cast<double>(j) - 1.0) * p3) /
             static_cast<double>(j);
      }
      pp = static_cast<double>(n) * (z * p1 - p2) / (z * z - 1.0);
      const double dz = p1 / pp;
      z -= dz;
      if (std::abs(dz) < 1e-15) break;
    }
    nodes_[i] = -z;
    nodes_[n - 1 - i] = z;
    weights_[i] = 2.0 / ((1.0 - z * z) * pp * pp);
    weights_[n - 1 - i] = weights_[i];
  }
  if (n % 2 == 1) nodes_[n / 2] = 0.0;
}

std::vector<double> sorted_breaks(std::vector<double> points, double tol) {
  std::sort(points.begin(), points.end());
  std::vector<double> out;
  for (double p : points) {
    if (!out.empty() && std::abs(p - out.back()) <= tol * std::max(1.0, std::abs(p))) continue;
    out.push_back(p);
  }
  return out;
}

}  // namespace zrlab
