#include "ealab/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ea {

double ksum(std::span<const double> xs) {
  // Neumaier variant: keeps the correction when the running sum is the
  // smaller-magnitude operand, which plain compensated summation drops
  double s = 0.0, comp = 0.0;
  for (double x : xs) {
    const double t = s + x;
    if (std::abs(s) >= std::abs(x))
      comp += (s - t) + x;
    else
      comp += (x - t) + s;
    s = t;
  }
  return s + comp;
}

double trapezoid(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("trapezoid: size mismatch");
  double s = 0.0, comp = 0.0;
  for (std::size_t i = 0; i + 1 < x.size(); ++i) {
    const double piece = 0.5 * (x[i + 1] - x[i]) * (y[i] + y[i + 1]);
    const double t = s + (piece - comp);
    comp = (t - s) - (piece - comp);
    s = t;
  }
  return s;
}

double simpson_uniform(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("simpson_uniform: size mismatch");
  const std::size_t n = x.size();
  if (n < 3 || n % 2 == 0)
    throw std::invalid_argument("simpson_uniform: need an odd number of points, at least 3");
  const double h = (x.back() - x.front()) / double(n - 1);
  if (!(h > 0.0)) throw std::invalid_argument("simpson_uniform: points must ascend");
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double step = x[i + 1] - x[i];
    if (std::abs(step - h) > 1e-9 * std::max(1.0, std::abs(h)))
      throw std::invalid_argument("simpson_uniform: grid is not uniform");
  }
  double s = 0.0, comp = 0.0;
  for (std::size_t i = 0; i + 2 < n; i += 2) {
    const double piece = (h / 3.0) * (y[i] + 4.0 * y[i + 1] + y[i + 2]);
    const double t = s + (piece - comp);
    comp = (t - s) - (piece - comp);
    s = t;
  }
  return s;
}

MeanSE mean_se(std::span<const double> xs) {
  MeanSE r;
  r.n = int(xs.size());
  if (r.n == 0) return r;
  r.mean = ksum(xs) / double(r.n);
  if (r.n < 2) return r;
  double ss = 0.0;
  for (double x : xs) ss += (x - r.mean) * (x - r.mean);
  r.se = std::sqrt(ss / double(r.n - 1) / double(r.n));
  return r;
}

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2)
    throw std::invalid_argument("fit_line: need n >= 2 matching points");
  LineFit f;
  f.n = int(x.size());
  const double n = double(f.n);
  const double mx = ksum(x) / n, my = ksum(y) / n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx, dy = y[i] - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (sxx <= 0.0) throw std::invalid_argument("fit_line: x values all equal");
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double ssres = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (f.intercept + f.slope * x[i]);
    ssres += r * r;
  }
  // a flat target is fit exactly by the flat line
  f.r2 = syy > 0.0 ? std::max(0.0, 1.0 - ssres / syy) : 1.0;
  f.slope_se = f.n > 2 ? std::sqrt(ssres / double(f.n - 2) / sxx) : 0.0;
  return f;
}

VarianceEstimate variance_jackknife(std::span<const double> xs) {
  VarianceEstimate r;
  r.n = int(xs.size());
  if (r.n < 2) return r;
  const double n = double(r.n);
  const double s1 = ksum(xs);
  double s2 = 0.0, comp = 0.0;
  for (double x : xs) {
    const double y = x * x - comp;
    const double t = s2 + y;
    comp = (t - s2) - y;
    s2 = t;
  }
  r.var = (s2 - s1 * s1 / n) / (n - 1.0);
  if (r.n < 3) return r;
  std::vector<double> loo(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double m = n - 1.0;
    const double l1 = s1 - xs[i], l2 = s2 - xs[i] * xs[i];
    loo[i] = (l2 - l1 * l1 / m) / (m - 1.0);
  }
  r.se = jackknife_se(loo);
  return r;
}

double jackknife_se(std::span<const double> loo) {
  const double n = double(loo.size());
  if (loo.size() < 2) return 0.0;
  const double m = ksum(loo) / n;
  double ss = 0.0;
  for (double v : loo) ss += (v - m) * (v - m);
  return std::sqrt((n - 1.0) / n * ss);
}

double quantile_nearest(std::span<const double> sorted_xs, double q) {
  if (sorted_xs.empty()) throw std::invalid_argument("quantile of empty data");
  if (!(q >= 0.0 && q <= 1.0)) throw std::invalid_argument("q outside [0, 1]");
  const std::size_t n = sorted_xs.size();
  std::size_t rank = std::size_t(std::ceil(q * double(n)));
  rank = std::clamp<std::size_t>(rank, 1, n);
  return sorted_xs[rank - 1];
}

TrendTest mann_kendall(std::span<const double> xs) {
  TrendTest t;
  const std::size_t n = xs.size();
  if (n < 2) return t;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      t.s += xs[j] > xs[i] ? 1 : xs[j] < xs[i] ? -1 : 0;
  const double var = double(n) * double(n - 1) * double(2 * n + 5) / 18.0;
  if (t.s > 0)
    t.z = (double(t.s) - 1.0) / std::sqrt(var);
  else if (t.s < 0)
    t.z = (double(t.s) + 1.0) / std::sqrt(var);
  t.increasing = t.z > 1.645;
  return t;
}

double golden_min(const std::function<double(double)>& f, double lo, double hi,
                  double tol) {
  if (!(lo < hi)) throw std::invalid_argument("golden_min: lo < hi required");
  constexpr double invphi = 0.6180339887498949;
  double a = lo, b = hi;
  double c = b - invphi * (b - a);
  double d = a + invphi * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > tol) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - invphi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + invphi * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

std::vector<double> lin_spaced(double lo, double hi, int n) {
  if (n < 1) throw std::invalid_argument("lin_spaced: n >= 1");
  std::vector<double> v(static_cast<std::size_t>(n));
  if (n == 1) {
    v[0] = lo;
    return v;
  }
  for (int i = 0; i < n; ++i)
    v[std::size_t(i)] = lo + (hi - lo) * double(i) / double(n - 1);
  return v;
}

std::vector<double> log_spaced(double lo, double hi, int n) {
  if (!(lo > 0.0 && hi > 0.0)) throw std::invalid_argument("log_spaced: positive range");
  std::vector<double> v = lin_spaced(std::log(lo), std::log(hi), n);
  for (double& x : v) x = std::exp(x);
  if (n >= 1) {
    v.front() = lo;  // pin endpoints against rounding
    v.back() = hi;
  }
  return v;
}

}  // namespace ea
