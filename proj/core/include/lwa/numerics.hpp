#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace lwa::num {

// Root of a monotonically increasing f on [lo, hi] with f(lo) <= 0 <= f(hi),
// by plain bisection (robust; callers pick the step count).
double bisect(const std::function<double(double)>& f, double lo, double hi, int steps);

// Result of an adaptive quadrature run. `values` holds one integral per
// integrand component, `residual` the corresponding error estimates.
struct QuadratureResult {
  std::vector<double> values;
  std::vector<double> residual;
  int intervals = 0;
  bool converged = false;
};

// Adaptive Gauss-Kronrod 7/15 on [a, b] for a vector-valued integrand
// (all components share nodes, so coupled moments stay consistent).
// Splits the interval with the largest error estimate until every component
// satisfies err <= abs_tol + rel_tol * |value|.
QuadratureResult integrate_gk15(
    const std::function<void(double, std::span<double>)>& f, int components,
    double a, double b, double rel_tol, double abs_tol = 0.0, int max_intervals = 2000);

// Upper incomplete gamma Gamma(s, x) for x > 0 and any real s (continued
// fraction for x > s + 1, series plus downward recurrence otherwise).
double upper_incomplete_gamma(double s, double x);

// Spearman rank correlation (average ranks on ties).
double spearman(std::span<const double> xs, std::span<const double> ys);

// Static range-minimum queries over a fixed array (sparse table).
class RangeMin {
 public:
  RangeMin() = default;
  explicit RangeMin(const std::vector<double>& values);
  // min over [lo, hi]; 1e300 when the range is empty
  double query(int lo, int hi) const;

 private:
  std::vector<std::vector<double>> levels_;
};

}  // namespace lwa::num
