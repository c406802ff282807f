#include "ealab/variance.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

#include "ealab/excitation.hpp"
#include "ealab/parallel.hpp"
#include "ealab/rng.hpp"

namespace ea {

namespace {

constexpr double kDegenerateBudget = 1e-3;  // max tolerated discard fraction

void enforce_degenerate_budget(std::int64_t n_bad, std::int64_t n_total) {
  if (n_total > 0 && 1000 * n_bad > n_total) {
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "degenerate ground states in %lld of %lld solves exceeds "
                  "the %g budget",
                  static_cast<long long>(n_bad),
                  static_cast<long long>(n_total), kDegenerateBudget);
    throw std::runtime_error(buf);
  }
}

int signum(double x) { return (x > 0.0) - (x < 0.0); }

std::string verdict_of(double lhs, double lhs_se, double rhs, double rhs_se) {
  if (rhs <= 0.0) return "holds_trivially";
  if (lhs + 2.0 * lhs_se < rhs - 2.0 * rhs_se) return "violated";
  if (lhs - 2.0 * lhs_se >= rhs + 2.0 * rhs_se) return "holds";
  return "consistent";
}

}  // namespace

const char* to_string(EnsembleKind k) {
  return k == EnsembleKind::pa ? "pa" : "ff";
}

EnsembleKind ensemble_from_string(const std::string& name) {
  if (name == "pa") return EnsembleKind::pa;
  if (name == "ff") return EnsembleKind::ff;
  throw std::invalid_argument("unknown ensemble: " + name);
}

Topology ensemble_topology(EnsembleKind k) {
  return k == EnsembleKind::pa ? Topology::periodic : Topology::open;
}

ReplicaPair make_replicas(EnsembleKind k, const BoxLattice& lat,
                          std::uint64_t master_seed,
                          std::int64_t realization) {
  const auto r = std::uint64_t(realization);
  if (k == EnsembleKind::pa)
    return {BoundaryCondition::periodic(), BoundaryCondition::antiperiodic(0)};
  // shared layer couplings, independent layer spins
  const std::uint64_t cs =
      rng::derive_seed(master_seed, rng::stream_layer_couplings, r);
  return {sample_fixed_bc(lat, cs,
                          rng::derive_seed(master_seed,
                                           rng::stream_layer_spins_a, r)),
          sample_fixed_bc(lat, cs,
                          rng::derive_seed(master_seed,
                                           rng::stream_layer_spins_b, r))};
}

// ---------------------------------------------------------------------------
// Gaussian identity self-test

const char* to_string(TestFunction h) {
  switch (h) {
    case TestFunction::linear: return "y1";
    case TestFunction::square: return "y1^2";
    case TestFunction::product: return "y1*y2";
    case TestFunction::cubic: return "y1^3";
  }
  return "?";
}

namespace {

// closed-form Var h(Y) for standard normal coordinates
double exact_variance(TestFunction h) {
  switch (h) {
    case TestFunction::linear: return 1.0;
    case TestFunction::square: return 2.0;
    case TestFunction::product: return 1.0;
    case TestFunction::cubic: return 15.0;  // E[Y^6] - E[Y^3]^2
  }
  return 0.0;
}

// sum_i d_i h(y) d_i h(z); only the first two coordinates ever contribute
double grad_dot(TestFunction h, const double* y, const double* z) {
  switch (h) {
    case TestFunction::linear: return 1.0;
    case TestFunction::square: return 4.0 * y[0] * z[0];
    case TestFunction::product: return y[1] * z[1] + y[0] * z[0];
    case TestFunction::cubic: return 9.0 * y[0] * y[0] * z[0] * z[0];
  }
  return 0.0;
}

}  // namespace

SelfTestReport gaussian_identity_selftest(TestFunction h, int dim,
                                          std::int64_t n_samples,
                                          std::uint64_t seed,
                                          std::span<const double> s_grid) {
  if (dim < 2) throw std::invalid_argument("self-test needs dim >= 2");
  if (n_samples < 2) throw std::invalid_argument("need at least two samples");
  std::vector<double> default_grid;
  if (s_grid.empty()) {
    default_grid = lin_spaced(0.0, 15.0, 601);
    s_grid = default_grid;
  }
  if (s_grid.front() != 0.0)
    throw std::invalid_argument("s grid must start at 0");
  for (std::size_t k = 1; k < s_grid.size(); ++k)
    if (!(s_grid[k] > s_grid[k - 1]))
      throw std::invalid_argument("s grid must be strictly ascending");

  const std::size_t ns = s_grid.size();
  std::vector<double> decay(ns), grow(ns), weight(ns);
  for (std::size_t k = 0; k < ns; ++k) {
    decay[k] = std::exp(-s_grid[k]);
    grow[k] = std::sqrt(-std::expm1(-2.0 * s_grid[k]));
    weight[k] = decay[k];
  }

  const std::uint64_t ys = rng::derive_seed(seed, rng::stream_selftest, 1);
  const std::uint64_t yps = rng::derive_seed(seed, rng::stream_selftest, 2);

  // h depends on at most two coordinates; draw the full dim anyway so the
  // key layout matches the declared dimension
  const int used = 2;
  std::vector<double> integral(static_cast<std::size_t>(n_samples));
  std::vector<double> last(static_cast<std::size_t>(n_samples));
  std::vector<double> integrand(ns);
  double y[2], yp[2], yt[2];
  for (std::int64_t m = 0; m < n_samples; ++m) {
    for (int i = 0; i < used; ++i) {
      y[i] = rng::normal(ys, std::uint64_t(m), std::uint64_t(i));
      yp[i] = rng::normal(yps, std::uint64_t(m), std::uint64_t(i));
    }
    for (std::size_t k = 0; k < ns; ++k) {
      yt[0] = decay[k] * y[0] + grow[k] * yp[0];
      yt[1] = decay[k] * y[1] + grow[k] * yp[1];
      integrand[k] = grad_dot(h, y, yt) * weight[k];
    }
    // Simpson keeps the quadrature bias far below the Monte Carlo band even
    // for test functions whose integrand has zero sample variance
    integral[std::size_t(m)] = simpson_uniform(s_grid, integrand);
    last[std::size_t(m)] = integrand[ns - 1] / weight[ns - 1];
  }

  const MeanSE est = mean_se(integral);
  const MeanSE tail_level = mean_se(last);

  SelfTestReport rep;
  rep.h = to_string(h);
  rep.dim = dim;
  rep.n_samples = n_samples;
  rep.s_max = s_grid.back();
  rep.exact = exact_variance(h);
  rep.estimate = est.mean;
  rep.se = est.se;
  // the integrand mean settles to a constant for large s, so the dropped
  // tail is at most (level) * e^-s_max
  rep.tail = (std::abs(tail_level.mean) + 3.0 * tail_level.se) *
             std::exp(-rep.s_max);
  rep.pass = std::abs(rep.estimate - rep.exact) <= 3.0 * rep.se + rep.tail;
  return rep;
}

// ---------------------------------------------------------------------------
// Variance lower bound

namespace {

struct LhsSlot {
  bool ok = false;
  double dh = 0.0, q = 0.0, ep = 0.0, eap = 0.0;
};

void validate_extent(int d, int L) {
  if (d < 1 || d > 3) throw std::invalid_argument("dimension must be 1..3");
  if (L < 2) throw std::invalid_argument("extent must be at least 2");
}

}  // namespace

LhsReport lhs_variance(EnsembleKind kind, int d, int L, int n_real,
                       std::uint64_t seed, SolveMethod method, int workers) {
  validate_extent(d, L);
  if (n_real < 2) throw std::invalid_argument("need at least 2 realizations");
  const BoxLattice lat = BoxLattice::build(d, L, ensemble_topology(kind));

  std::vector<LhsSlot> slot(static_cast<std::size_t>(n_real));
  parallel_for(n_real, workers, [&](int r) {
    const CouplingField j = sample_couplings(
        lat, rng::derive_seed(seed, rng::stream_couplings, std::uint64_t(r)));
    const ReplicaPair rep = make_replicas(kind, lat, seed, r);
    const GroundStateResult g1 = solve(lat, j, rep.bc1, method);
    const GroundStateResult g2 = solve(lat, j, rep.bc2, method);
    if (g1.degenerate || g2.degenerate) return;
    LhsSlot& s = slot[std::size_t(r)];
    s.dh = interior_energy(lat, j, g1.config) -
           interior_energy(lat, j, g2.config);
    s.q = edge_overlap(lat, g1.config, g2.config);
    s.ep = energy(lat, j, g1.config, rep.bc1);
    s.eap = energy(lat, j, g2.config, rep.bc2);
    s.ok = true;
  });

  std::vector<double> dh, one_minus_q, ep, eap, wrap;
  for (const LhsSlot& s : slot) {
    if (!s.ok) continue;
    dh.push_back(s.dh);
    one_minus_q.push_back(1.0 - s.q);
    ep.push_back(s.ep);
    eap.push_back(s.eap);
    wrap.push_back(s.dh - s.ep + s.eap);
  }

  LhsReport rep;
  rep.ensemble = to_string(kind);
  rep.d = d;
  rep.L = L;
  rep.seed = seed;
  rep.n_requested = n_real;
  rep.n_real = int(dh.size());
  rep.n_degenerate = n_real - rep.n_real;
  enforce_degenerate_budget(rep.n_degenerate, n_real);
  if (rep.n_real < 2)
    throw std::runtime_error("all realizations were degenerate");

  const VarianceEstimate v = variance_jackknife(dh);
  rep.var = v.var;
  rep.se = v.se;
  rep.mean_dh = mean_se(dh).mean;
  const MeanSE inc = mean_se(one_minus_q);
  rep.mean_one_minus_q = inc.mean;
  rep.se_one_minus_q = inc.se;
  rep.mean_ep = mean_se(ep).mean;
  rep.mean_eap = mean_se(eap).mean;
  rep.mean_wrap = mean_se(wrap).mean;
  return rep;
}

std::vector<double> default_s_grid(double t, int n) {
  if (!(t > 0.0)) throw std::invalid_argument("horizon t must be positive");
  if (n < 8) throw std::invalid_argument("need at least 8 grid points");
  std::vector<double> s{0.0};
  const std::vector<double> tail = log_spaced(1e-4 * t, t, n - 1);
  s.insert(s.end(), tail.begin(), tail.end());
  return s;
}

RhsReport rhs_bound(EnsembleKind kind, int d, int L, double t, int n_real,
                    std::uint64_t seed, std::span<const double> s_grid,
                    SolveMethod method, int workers) {
  validate_extent(d, L);
  if (!(t > 0.0 && t <= 50.0))
    throw std::invalid_argument("horizon t must lie in (0, 50]");
  if (n_real < 2) throw std::invalid_argument("need at least 2 realizations");
  std::vector<double> default_grid;
  if (s_grid.empty()) {
    default_grid = default_s_grid(t);
    s_grid = default_grid;
  }
  if (s_grid.front() != 0.0 || s_grid.back() != t)
    throw std::invalid_argument("s grid must run from 0 to t");
  for (std::size_t k = 1; k < s_grid.size(); ++k)
    if (!(s_grid[k] > s_grid[k - 1]))
      throw std::invalid_argument("s grid must be strictly ascending");

  const BoxLattice lat = BoxLattice::build(d, L, ensemble_topology(kind));
  const std::size_t ns = s_grid.size();
  const std::int64_t ne = lat.edge_count();

  struct Slot {
    bool ok = false;
    double x12 = 0.0;               // 1 - Q(sigma1, sigma2)
    std::vector<double> x1, x2;     // 1 - Q(sigma_i(0), sigma_i(s))
    std::vector<double> grad;       // alignment diagnostic per s
  };
  std::vector<Slot> slot(static_cast<std::size_t>(n_real));

  parallel_for(n_real, workers, [&](int r) {
    const CouplingField j = sample_couplings(
        lat, rng::derive_seed(seed, rng::stream_couplings, std::uint64_t(r)));
    const CouplingField jp = sample_couplings(
        lat, rng::derive_seed(seed, rng::stream_couplings_prime,
                              std::uint64_t(r)));
    const ReplicaPair rep = make_replicas(kind, lat, seed, r);
    const GroundStateResult g1 = solve(lat, j, rep.bc1, method);
    const GroundStateResult g2 = solve(lat, j, rep.bc2, method);
    if (g1.degenerate || g2.degenerate) return;

    Slot& s = slot[std::size_t(r)];
    s.x1.assign(ns, 0.0);
    s.x2.assign(ns, 0.0);
    s.grad.assign(ns, 0.0);
    s.x12 = 1.0 - edge_overlap(lat, g1.config, g2.config);

    std::vector<int> base_diff(static_cast<std::size_t>(ne));
    for (std::int64_t e = 0; e < ne; ++e)
      base_diff[std::size_t(e)] =
          g1.config.edge_value(int(e)) - g2.config.edge_value(int(e));
    double g0 = 0.0;
    for (std::int64_t e = 0; e < ne; ++e)
      g0 += double(base_diff[std::size_t(e)] * base_diff[std::size_t(e)]);
    s.grad[0] = g0;  // s = 0: the path is exact, minimizers unchanged

    const InterpolationPath path{&j, &jp, {}};
    for (std::size_t k = 1; k < ns; ++k) {
      const CouplingField jt = interpolate(path, s_grid[k]);
      const GroundStateResult h1 = solve(lat, jt, rep.bc1, method);
      const GroundStateResult h2 = solve(lat, jt, rep.bc2, method);
      if (h1.degenerate || h2.degenerate) return;  // slot stays not-ok
      s.x1[k] = 1.0 - edge_overlap(lat, g1.config, h1.config);
      s.x2[k] = 1.0 - edge_overlap(lat, g2.config, h2.config);
      double g = 0.0;
      for (std::int64_t e = 0; e < ne; ++e)
        g += double(h1.config.edge_value(int(e)) -
                    h2.config.edge_value(int(e))) *
             double(base_diff[std::size_t(e)]);
      s.grad[k] = g;
    }
    s.ok = true;
  });

  RhsReport rep;
  rep.ensemble = to_string(kind);
  rep.d = d;
  rep.L = L;
  rep.seed = seed;
  rep.t = t;
  rep.n_requested = n_real;
  rep.n_edges = ne;
  rep.s.assign(s_grid.begin(), s_grid.end());

  // accumulate sums for means and closed-form leave-one-out
  double sum12 = 0.0;
  std::vector<double> sum1(ns, 0.0), sum2(ns, 0.0);
  std::vector<const Slot*> kept;
  for (const Slot& s : slot) {
    if (!s.ok) continue;
    kept.push_back(&s);
    sum12 += s.x12;
    for (std::size_t k = 0; k < ns; ++k) {
      sum1[k] += s.x1[k];
      sum2[k] += s.x2[k];
    }
  }
  rep.n_real = int(kept.size());
  rep.n_degenerate = n_real - rep.n_real;
  enforce_degenerate_budget(rep.n_degenerate, n_real);
  if (rep.n_real < 2)
    throw std::runtime_error("all realizations were degenerate");
  const double n = double(rep.n_real);

  auto compose = [&](double a, std::span<const double> b1,
                     std::span<const double> b2) {
    std::vector<double> y(ns);
    for (std::size_t k = 0; k < ns; ++k)
      y[k] = (a - std::sqrt(2.0 * std::max(0.0, b1[k])) -
              std::sqrt(2.0 * std::max(0.0, b2[k]))) *
             std::exp(-s_grid[k]);
    return 2.0 * double(ne) * trapezoid(s_grid, y);
  };

  rep.mean_one_minus_q12 = sum12 / n;
  rep.b1.resize(ns);
  rep.b2.resize(ns);
  for (std::size_t k = 0; k < ns; ++k) {
    rep.b1[k] = sum1[k] / n;
    rep.b2[k] = sum2[k] / n;
  }
  rep.value = compose(rep.mean_one_minus_q12, rep.b1, rep.b2);

  std::vector<double> loo(kept.size());
  std::vector<double> l1(ns), l2(ns);
  for (std::size_t i = 0; i < kept.size(); ++i) {
    const Slot& s = *kept[i];
    const double a = (sum12 - s.x12) / (n - 1.0);
    for (std::size_t k = 0; k < ns; ++k) {
      l1[k] = (sum1[k] - s.x1[k]) / (n - 1.0);
      l2[k] = (sum2[k] - s.x2[k]) / (n - 1.0);
    }
    loo[i] = compose(a, l1, l2);
  }
  rep.se = jackknife_se(loo);

  rep.grad_mean.resize(ns);
  rep.grad_se.resize(ns);
  rep.grad_nonneg = true;
  std::vector<double> col(kept.size());
  for (std::size_t k = 0; k < ns; ++k) {
    for (std::size_t i = 0; i < kept.size(); ++i) col[i] = kept[i]->grad[k];
    const MeanSE m = mean_se(col);
    rep.grad_mean[k] = m.mean;
    rep.grad_se[k] = m.se;
    if (m.mean < -3.0 * m.se) rep.grad_nonneg = false;
  }
  return rep;
}

BoundVerdict bound_verdict(const LhsReport& lhs, const RhsReport& rhs) {
  BoundVerdict v;
  v.lhs = lhs.var;
  v.lhs_se = lhs.se;
  v.rhs = rhs.value;
  v.rhs_se = rhs.se;
  v.verdict = verdict_of(v.lhs, v.lhs_se, v.rhs, v.rhs_se);
  return v;
}

// ---------------------------------------------------------------------------
// Single-edge bound

SingleEdgeReport single_edge_bound(EnsembleKind kind, int d, int L,
                                   std::int32_t edge, double t, int n_real,
                                   std::uint64_t seed,
                                   std::span<const double> s_grid,
                                   SolveMethod method, int workers) {
  validate_extent(d, L);
  if (!(t > 0.0 && t <= 50.0))
    throw std::invalid_argument("horizon t must lie in (0, 50]");
  if (n_real < 2) throw std::invalid_argument("need at least 2 realizations");
  std::vector<double> default_grid;
  if (s_grid.empty()) {
    default_grid = default_s_grid(t);
    s_grid = default_grid;
  }
  if (s_grid.front() != 0.0 || s_grid.back() != t)
    throw std::invalid_argument("s grid must run from 0 to t");

  const BoxLattice lat = BoxLattice::build(d, L, ensemble_topology(kind));
  if (edge < 0 || edge >= lat.edge_count())
    throw std::invalid_argument("edge id out of range");
  const std::size_t ns = s_grid.size();

  struct Slot {
    bool ok = false;
    double x = 0.0;    // J_b (s1_b - s2_b)
    double p12 = 0.0;  // s1_b s2_b at s = 0
    double window = 0.0;
    std::vector<double> r1, r2;  // 1 - rho_i(s)
  };
  std::vector<Slot> slot(static_cast<std::size_t>(n_real));

  parallel_for(n_real, workers, [&](int r) {
    const CouplingField j = sample_couplings(
        lat, rng::derive_seed(seed, rng::stream_couplings, std::uint64_t(r)));
    const CouplingField jp = sample_couplings(
        lat, rng::derive_seed(seed, rng::stream_couplings_prime,
                              std::uint64_t(r)));
    const ReplicaPair rep = make_replicas(kind, lat, seed, r);
    // crossing levels do not depend on J_b, so one droplet solve per
    // replica pins the whole single-edge path
    const DropletReport d1 = critical_droplet(lat, j, rep.bc1, edge, method);
    const DropletReport d2 = critical_droplet(lat, j, rep.bc2, edge, method);
    if (d1.flex.degenerate || d2.flex.degenerate ||
        d1.flex.f <= degeneracy_gap_tol || d2.flex.f <= degeneracy_gap_tol)
      return;

    Slot& s = slot[std::size_t(r)];
    const double jb = j.j[std::size_t(edge)];
    const double jpb = jp.j[std::size_t(edge)];
    const double c1 = d1.flex.c, c2 = d2.flex.c;
    const int s1 = signum(jb - c1), s2 = signum(jb - c2);
    s.x = jb * double(s1 - s2);
    s.p12 = double(s1 * s2);
    s.r1.assign(ns, 0.0);
    s.r2.assign(ns, 0.0);
    for (std::size_t k = 1; k < ns; ++k) {
      const double sv = s_grid[k];
      const double jbs = std::exp(-sv) * jb +
                         std::sqrt(-std::expm1(-2.0 * sv)) * jpb;
      s.r1[k] = 1.0 - double(s1 * signum(jbs - c1));
      s.r2[k] = 1.0 - double(s2 * signum(jbs - c2));
    }
    // first sign change of J_b(s) - c1, censored at t
    s.window = t;
    for (double root : interpolation_crossings(jb, jpb, c1, t))
      if (root > 1e-15) {
        s.window = root;
        break;
      }
    s.ok = true;
  });

  SingleEdgeReport rep;
  rep.ensemble = to_string(kind);
  rep.d = d;
  rep.L = L;
  rep.edge = edge;
  rep.seed = seed;
  rep.t = t;
  rep.n_requested = n_real;

  double sum12 = 0.0;
  std::vector<double> sum1(ns, 0.0), sum2(ns, 0.0);
  std::vector<const Slot*> kept;
  std::vector<double> xs, windows;
  for (const Slot& s : slot) {
    if (!s.ok) continue;
    kept.push_back(&s);
    xs.push_back(s.x);
    windows.push_back(s.window);
    sum12 += 1.0 - s.p12;
    for (std::size_t k = 0; k < ns; ++k) {
      sum1[k] += s.r1[k];
      sum2[k] += s.r2[k];
    }
  }
  rep.n_real = int(kept.size());
  rep.n_degenerate = n_real - rep.n_real;
  enforce_degenerate_budget(rep.n_degenerate, n_real);
  if (rep.n_real < 2)
    throw std::runtime_error("all realizations were degenerate");
  const double n = double(rep.n_real);

  const VarianceEstimate v = variance_jackknife(xs);
  rep.lhs = v.var;
  rep.lhs_se = v.se;

  auto compose = [&](double a, std::span<const double> b1,
                     std::span<const double> b2) {
    std::vector<double> y(ns);
    for (std::size_t k = 0; k < ns; ++k)
      y[k] = (a - std::sqrt(2.0 * std::max(0.0, b1[k])) -
              std::sqrt(2.0 * std::max(0.0, b2[k]))) *
             std::exp(-s_grid[k]);
    return 2.0 * trapezoid(s_grid, y);
  };

  std::vector<double> m1(ns), m2(ns);
  for (std::size_t k = 0; k < ns; ++k) {
    m1[k] = sum1[k] / n;
    m2[k] = sum2[k] / n;
  }
  rep.rhs = compose(sum12 / n, m1, m2);

  std::vector<double> loo(kept.size());
  std::vector<double> l1(ns), l2(ns);
  for (std::size_t i = 0; i < kept.size(); ++i) {
    const Slot& s = *kept[i];
    const double a = (sum12 - (1.0 - s.p12)) / (n - 1.0);
    for (std::size_t k = 0; k < ns; ++k) {
      l1[k] = (sum1[k] - s.r1[k]) / (n - 1.0);
      l2[k] = (sum2[k] - s.r2[k]) / (n - 1.0);
    }
    loo[i] = compose(a, l1, l2);
  }
  rep.rhs_se = jackknife_se(loo);
  rep.verdict = verdict_of(rep.lhs, rep.lhs_se, rep.rhs, rep.rhs_se);

  std::sort(windows.begin(), windows.end());
  rep.window_q05 = quantile_nearest(windows, 0.05);
  rep.window_q50 = quantile_nearest(windows, 0.50);
  rep.window_q95 = quantile_nearest(windows, 0.95);
  std::int64_t censored = 0;
  for (double w : windows) censored += (w >= t);
  rep.frac_constant = double(censored) / n;
  return rep;
}

// ---------------------------------------------------------------------------
// Stiffness scan

StiffnessScan stiffness_scan(int d, std::span<const int> sizes, int n_real,
                             std::uint64_t seed, SolveMethod method,
                             int workers) {
  if (d != 1 && d != 2)
    throw std::invalid_argument("stiffness scan supports d = 1 or 2");
  if (sizes.size() < 2) throw std::invalid_argument("need at least 2 sizes");
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    if (sizes[i] < (d == 1 ? 3 : 2))
      throw std::invalid_argument("sizes too small for a wrap flip");
    if (i > 0 && sizes[i] <= sizes[i - 1])
      throw std::invalid_argument("sizes must be strictly increasing");
  }
  if (n_real < 2) throw std::invalid_argument("need at least 2 realizations");

  StiffnessScan scan;
  scan.d = d;
  scan.sizes.assign(sizes.begin(), sizes.end());
  scan.seed = seed;
  scan.n_real = n_real;

  for (std::size_t si = 0; si < sizes.size(); ++si) {
    const int L = sizes[si];
    BoxLattice lat = [&] {
      if (d == 1) {
        const int ext[1] = {L};
        const Topology topo[1] = {Topology::periodic};
        return BoxLattice::build(ext, topo);
      }
      const int ext[2] = {L, L};
      const Topology topo[2] = {Topology::open, Topology::periodic};
      return BoxLattice::build(ext, topo);
    }();
    if (si == 0) scan.topology = lat.topology_string();
    const BoundaryCondition plain = BoundaryCondition::free();
    const BoundaryCondition flipped =
        BoundaryCondition::antiperiodic(d == 1 ? 0 : 1);
    const std::uint64_t sub = rng::derive_seed(seed, rng::stream_misc, si);

    struct Slot {
      bool ok = false;
      double x = 0.0;
    };
    std::vector<Slot> slot(static_cast<std::size_t>(n_real));
    parallel_for(n_real, workers, [&](int r) {
      const CouplingField j = sample_couplings(
          lat, rng::derive_seed(sub, rng::stream_couplings, std::uint64_t(r)));
      const GroundStateResult gp = solve(lat, j, plain, method);
      const GroundStateResult ga = solve(lat, j, flipped, method);
      if (gp.degenerate || ga.degenerate) return;
      slot[std::size_t(r)] = {true, gp.energy - ga.energy};
    });

    std::vector<double> xs;
    for (const Slot& s : slot)
      if (s.ok) xs.push_back(s.x);
    const int ndeg = n_real - int(xs.size());
    enforce_degenerate_budget(ndeg, n_real);
    if (xs.size() < 2)
      throw std::runtime_error("all realizations were degenerate");

    const VarianceEstimate v = variance_jackknife(xs);
    double sum_abs = 0.0;
    for (double x : xs) sum_abs += std::abs(x);
    scan.var_x.push_back(v.var);
    scan.se_var.push_back(v.se);
    scan.mean_abs_x.push_back(sum_abs / double(xs.size()));
    scan.degenerate.push_back(ndeg);
    scan.ratio.push_back(v.var / std::pow(double(L), double(d - 1)));
  }

  bool positive = true;
  for (double v : scan.var_x) positive = positive && v > 0.0;
  if (positive) {
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < sizes.size(); ++i) {
      lx.push_back(std::log(double(sizes[i])));
      ly.push_back(std::log(scan.var_x[i]));
    }
    const LineFit f = fit_line(lx, ly);
    scan.two_theta.value = f.slope;
    scan.two_theta.se = f.slope_se;
    scan.two_theta.r2 = f.r2;
    scan.two_theta.sizes = scan.sizes;
    scan.two_theta.method = "log-log least squares of Var X vs L";
  } else {
    scan.two_theta.value = std::numeric_limits<double>::quiet_NaN();
    scan.two_theta.se = std::numeric_limits<double>::quiet_NaN();
    scan.two_theta.r2 = 0.0;
    scan.two_theta.sizes = scan.sizes;
    scan.two_theta.method = "undefined (nonpositive variance)";
  }
  scan.trend = mann_kendall(scan.ratio);
  return scan;
}

// ---------------------------------------------------------------------------
// Triangle inequality on the overlap metric

TriangleReport triangle_check(const BoxLattice& lat, std::int64_t n_triples,
                              std::uint64_t seed, double tol) {
  if (n_triples < 1) throw std::invalid_argument("need at least one triple");
  const std::int64_t nv = lat.vertex_count();
  SpinConfig a(lat, 1), b(lat, 1), c(lat, 1);
  auto dist = [&](const SpinConfig& u, const SpinConfig& v) {
    return std::sqrt(std::max(0.0, 2.0 - 2.0 * edge_overlap(lat, u, v)));
  };
  TriangleReport rep;
  rep.n_triples = n_triples;
  rep.worst_slack = -std::numeric_limits<double>::infinity();
  const std::uint64_t sub = rng::derive_seed(seed, rng::stream_misc, 0);
  for (std::int64_t m = 0; m < n_triples; ++m) {
    for (std::int64_t v = 0; v < nv; ++v) {
      a.s[std::size_t(v)] =
          std::int8_t(rng::coin(sub, std::uint64_t(m), 0, std::uint64_t(v)));
      b.s[std::size_t(v)] =
          std::int8_t(rng::coin(sub, std::uint64_t(m), 1, std::uint64_t(v)));
      c.s[std::size_t(v)] =
          std::int8_t(rng::coin(sub, std::uint64_t(m), 2, std::uint64_t(v)));
    }
    const double ab = dist(a, b), bc = dist(b, c), ac = dist(a, c);
    const double slack = std::max(
        {ac - ab - bc, ab - ac - bc, bc - ab - ac});
    rep.worst_slack = std::max(rep.worst_slack, slack);
  }
  rep.pass = rep.worst_slack <= tol;
  return rep;
}

}  // namespace ea
