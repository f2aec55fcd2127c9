#include "zrlab/fit.hpp"

#include <algorithm>
#include <cmath>

#include "zrlab/errors.hpp"

namespace zrlab {

FitResult fit_line(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw ContractViolation("fit_line: x and y differ in length");
  if (x.size() < 3) throw ContractViolation("fit_line: need at least 3 points");
  const double n = static_cast<double>(x.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0;
  double sxy = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (!(sxx > 0.0)) throw ContractViolation("fit_line: abscissae are all equal");

  FitResult r;
  r.slope = sxy / sxx;
  r.intercept = my - r.slope * mx;
  double sse = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double e = y[i] - r.predict(x[i]);
    sse += e * e;
  }
  r.r_squared = syy > 0.0 ? std::max(0.0, 1.0 - sse / syy) : 1.0;
  r.x.assign(x.begin(), x.end());
  r.y.assign(y.begin(), y.end());
  return r;
}

FitResult fit_loglog(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw ContractViolation("fit_loglog: x and y differ in length");
  std::vector<double> lx(x.size());
  std::vector<double> ly(y.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw ContractViolation("fit_loglog: samples must be positive");
    lx[i] = std::log(x[i]);
    ly[i] = std::log(y[i]);
  }
  return fit_line(lx, ly);
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::pass:
      return "pass";
    case Verdict::fail:
      return "fail";
    case Verdict::inconclusive:
      return "inconclusive";
  }
  return "unknown";
}

bool fit_is_conclusive(const FitResult& fit) { return fit.x.size() >= 4 && fit.r_squared >= 0.98; }

}  // namespace zrlab
