#include "lwa/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>
#include <stdexcept>

namespace lwa::num {

double bisect(const std::function<double(double)>& f, double lo, double hi, int steps) {
  for (int i = 0; i < steps; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (f(mid) <= 0.0)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

namespace {

// QUADPACK dqk15 abscissae/weights on [-1, 1] (positive half; symmetric).
constexpr std::array<double, 8> kAbscissae = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
constexpr std::array<double, 8> kKronrodW = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kGaussW = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

constexpr int kMaxComponents = 4;

struct Interval {
  double a, b;
  std::array<double, kMaxComponents> value{};
  std::array<double, kMaxComponents> err_c{};
  double err = 0.0;  // max over components, used for split ordering
};

void gk15_apply(const std::function<void(double, std::span<double>)>& f, int nc,
                double a, double b, Interval& out) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  std::array<double, kMaxComponents> fv{};
  std::array<double, kMaxComponents> kron{}, gauss{};

  for (int i = 0; i < 8; ++i) {
    const bool center = (i == 7);
    const bool gauss_node = (i % 2 == 1) || center;
    for (int side = 0; side < (center ? 1 : 2); ++side) {
      const double x = center ? c : (side == 0 ? c - h * kAbscissae[i] : c + h * kAbscissae[i]);
      f(x, std::span<double>(fv.data(), nc));
      for (int k = 0; k < nc; ++k) {
        kron[k] += kKronrodW[i] * fv[k];
        if (gauss_node) gauss[k] += kGaussW[i / 2] * fv[k];
      }
    }
  }
  out.a = a;
  out.b = b;
  out.err = 0.0;
  for (int k = 0; k < nc; ++k) {
    out.value[k] = kron[k] * h;
    out.err_c[k] = std::abs((kron[k] - gauss[k]) * h);
    out.err = std::max(out.err, out.err_c[k]);
  }
}

}  // namespace

QuadratureResult integrate_gk15(const std::function<void(double, std::span<double>)>& f,
                                int components, double a, double b, double rel_tol,
                                double abs_tol, int max_intervals) {
  if (components < 1 || components > kMaxComponents)
    throw std::invalid_argument("integrate_gk15: unsupported component count");

  // Ordered worklist: largest error first, ties broken by left endpoint so
  // the subdivision order (and hence the result) is deterministic.
  auto cmp = [](const Interval& l, const Interval& r) {
    if (l.err != r.err) return l.err < r.err;
    return l.a > r.a;
  };
  std::priority_queue<Interval, std::vector<Interval>, decltype(cmp)> queue(cmp);

  std::array<double, kMaxComponents> total{}, total_err{};
  auto add = [&](const Interval& iv, double sign) {
    for (int k = 0; k < components; ++k) {
      total[k] += sign * iv.value[k];
      total_err[k] += sign * iv.err_c[k];
    }
  };

  Interval first;
  gk15_apply(f, components, a, b, first);
  add(first, +1.0);
  queue.push(first);

  QuadratureResult res;
  res.intervals = 1;
  for (;;) {
    bool ok = true;
    for (int k = 0; k < components; ++k)
      if (total_err[k] > abs_tol + rel_tol * std::abs(total[k])) ok = false;
    if (ok) {
      res.converged = true;
      break;
    }
    if (queue.empty() || res.intervals >= max_intervals) break;

    const Interval worst = queue.top();
    queue.pop();
    if (worst.err <= 0.0 || worst.b - worst.a < 1e-300) continue;  // cannot improve further

    add(worst, -1.0);
    const double mid = 0.5 * (worst.a + worst.b);
    Interval left, right;
    gk15_apply(f, components, worst.a, mid, left);
    gk15_apply(f, components, mid, worst.b, right);
    add(left, +1.0);
    add(right, +1.0);
    queue.push(left);
    queue.push(right);
    ++res.intervals;
  }

  res.values.assign(total.begin(), total.begin() + components);
  res.residual.assign(total_err.begin(), total_err.begin() + components);
  // Error totals accumulated incrementally can drift slightly negative.
  for (auto& e : res.residual) e = std::max(e, 0.0);
  return res;
}

double upper_incomplete_gamma(double s, double x) {
  if (!(x > 0.0)) throw std::domain_error("upper_incomplete_gamma: x must be > 0");

  if (x > s + 1.0) {
    // Lentz continued fraction (Numerical Recipes gcf form, unnormalized).
    constexpr double kTiny = 1e-300;
    double b = x + 1.0 - s;
    double c = 1.0 / kTiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= 20000; ++i) {
      const double an = -static_cast<double>(i) * (static_cast<double>(i) - s);
      b += 2.0;
      d = an * d + b;
      if (std::abs(d) < kTiny) d = kTiny;
      c = b + an / c;
      if (std::abs(c) < kTiny) c = kTiny;
      d = 1.0 / d;
      const double del = d * c;
      h *= del;
      if (std::abs(del - 1.0) < 1e-16) return std::exp(-x + s * std::log(x)) * h;
    }
    throw std::runtime_error("upper_incomplete_gamma: continued fraction stalled");
  }

  // Series for the lower incomplete gamma at a raised parameter, then the
  // recurrence Gamma(s,x) = (Gamma(s+1,x) - x^s e^{-x}) / s back down.
  const int lift = static_cast<int>(std::ceil(x + 1.0 - s));
  const double s0 = s + lift;
  double term = 1.0 / s0;
  double sum = term;
  for (int n = 1; n < 10000; ++n) {
    term *= x / (s0 + n);
    sum += term;
    if (std::abs(term) < std::abs(sum) * 1e-17) break;
  }
  const double lower = std::exp(-x + s0 * std::log(x)) * sum;
  double g = std::tgamma(s0) - lower;
  for (int i = 1; i <= lift; ++i) {
    const double si = s0 - i;
    g = (g - std::exp(-x + si * std::log(x))) / si;
  }
  return g;
}

namespace {
std::vector<double> ranks(std::span<const double> v) {
  const std::size_t n = v.size();
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&v](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> r(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && v[idx[j + 1]] == v[idx[i]]) ++j;
    const double avg = 0.5 * (static_cast<double>(i) + static_cast<double>(j)) + 1.0;
    for (std::size_t k = i; k <= j; ++k) r[idx[k]] = avg;
    i = j + 1;
  }
  return r;
}
}  // namespace

RangeMin::RangeMin(const std::vector<double>& values) {
  if (values.empty()) return;
  levels_.push_back(values);
  const int n = static_cast<int>(values.size());
  for (int k = 1; (1 << k) <= n; ++k) {
    const auto& prev = levels_.back();
    std::vector<double> cur(n - (1 << k) + 1);
    for (int i = 0; i + (1 << k) <= n; ++i)
      cur[i] = std::min(prev[i], prev[i + (1 << (k - 1))]);
    levels_.push_back(std::move(cur));
  }
}

double RangeMin::query(int lo, int hi) const {
  if (levels_.empty() || lo > hi) return 1e300;
  lo = std::max(lo, 0);
  hi = std::min(hi, static_cast<int>(levels_[0].size()) - 1);
  if (lo > hi) return 1e300;
  const int k = 31 - __builtin_clz(static_cast<unsigned>(hi - lo + 1));
  return std::min(levels_[k][lo], levels_[k][hi - (1 << k) + 1]);
}

double spearman(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size() || xs.size() < 2)
    throw std::invalid_argument("spearman: need two equal-length series");
  const auto rx = ranks(xs);
  const auto ry = ranks(ys);
  const double n = static_cast<double>(xs.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += rx[i];
    my += ry[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) return 0.0;
  return sxy / std::sqrt(sxx * syy);
}

}  // namespace lwa::num
