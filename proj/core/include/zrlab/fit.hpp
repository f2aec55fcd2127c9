#pragma once

// Least-squares lines through (log x, log y) samples.

#include <span>
#include <string>
#include <vector>

namespace zrlab {

struct FitResult {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  std::vector<double> x;  ///< abscissae as fitted (already logged for log-log fits)
  std::vector<double> y;

  double predict(double xv) const noexcept { return intercept + slope * xv; }
};

/// Ordinary least squares y = intercept + slope x. Needs >= 3 points and a
/// non-degenerate abscissa. r^2 is 1 when y is constant.
FitResult fit_line(std::span<const double> x, std::span<const double> y);

/// fit_line on (log x, log y); all samples must be positive.
FitResult fit_loglog(std::span<const double> x, std::span<const double> y);

enum class Verdict { pass, fail, inconclusive };

std::string to_string(Verdict v);

/// A fit supports a verdict only with >= 4 points and r^2 >= 0.98.
bool fit_is_conclusive(const FitResult& fit);

}  // namespace zrlab
