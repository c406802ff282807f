#pragma once

#include <functional>
#include <span>
#include <vector>

// Small numerical toolkit: compensated sums, mean/SE, least squares with
// slope uncertainty, jackknife errors, nearest-rank quantiles, a trend test,
// golden-section minimization, and grid builders.

namespace ea {

// Kahan-compensated sum
double ksum(std::span<const double> xs);

// trapezoid rule over sample points (x ascending)
double trapezoid(std::span<const double> x, std::span<const double> y);

// composite Simpson rule; requires a uniform grid with an odd point count
double simpson_uniform(std::span<const double> x, std::span<const double> y);

struct MeanSE {
  double mean = 0.0;
  double se = 0.0;  // sample standard error, 0 when n < 2
  int n = 0;
};
MeanSE mean_se(std::span<const double> xs);

struct LineFit {
  double slope = 0.0, intercept = 0.0;
  double slope_se = 0.0;  // residual-based, 0 when n == 2
  double r2 = 1.0;
  int n = 0;
};
// ordinary least squares, n >= 2; a flat y (zero total variation) fits
// perfectly and reports r2 = 1
LineFit fit_line(std::span<const double> x, std::span<const double> y);

// sample variance (unbiased) with jackknife standard error
struct VarianceEstimate {
  double var = 0.0;
  double se = 0.0;
  int n = 0;
};
VarianceEstimate variance_jackknife(std::span<const double> xs);

// jackknife SE from precomputed leave-one-out statistic values
double jackknife_se(std::span<const double> loo);

// nearest-rank quantile of ascending data, q in [0, 1]
double quantile_nearest(std::span<const double> sorted_xs, double q);

// S statistic with normal approximation; one-sided 5% increase flag.
// Continuous inputs assumed (no tie correction).
struct TrendTest {
  long long s = 0;
  double z = 0.0;
  bool increasing = false;  // z > 1.645
};
TrendTest mann_kendall(std::span<const double> xs);

// golden-section minimum of a unimodal function on [lo, hi]
double golden_min(const std::function<double(double)>& f, double lo, double hi,
                  double tol = 1e-6);

std::vector<double> lin_spaced(double lo, double hi, int n);
std::vector<double> log_spaced(double lo, double hi, int n);  // lo, hi > 0

}
