#include "ealab/chaos.hpp"

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

constexpr double inf = std::numeric_limits<double>::infinity();

void enforce_degenerate_budget(std::int64_t n_bad, std::int64_t n_total) {
  if (n_bad * 1000 > n_total) {
    char msg[128];
    std::snprintf(msg, sizeof msg,
                  "%lld of %lld samples hit degenerate ground states "
                  "(budget is 0.1%%)",
                  (long long)n_bad, (long long)n_total);
    throw std::runtime_error(msg);
  }
}

void validate_grid(std::span<const double> t) {
  if (t.empty()) throw std::invalid_argument("empty time grid");
  for (std::size_t k = 0; k < t.size(); ++k) {
    if (!(t[k] >= 0.0) || !std::isfinite(t[k]))
      throw std::invalid_argument("grid times must be finite and >= 0");
    if (k > 0 && t[k] < t[k - 1])
      throw std::invalid_argument("grid must be sorted ascending");
  }
}

struct ColumnStats {
  MeanSE m;
  double q05 = 0.0, q50 = 0.0, q95 = 0.0;
};

ColumnStats column_stats(std::vector<double>& col) {
  ColumnStats s;
  s.m = mean_se(col);
  std::sort(col.begin(), col.end());
  s.q05 = quantile_nearest(col, 0.05);
  s.q50 = quantile_nearest(col, 0.50);
  s.q95 = quantile_nearest(col, 0.95);
  return s;
}

}  // namespace

BoundaryCondition realize_bc(const BcSpec& spec, const BoxLattice& lat,
                             std::uint64_t master_seed, std::int64_t realization) {
  switch (spec.kind) {
    case BcKind::free_bc:
      return BoundaryCondition::free();
    case BcKind::periodic_bc:
      return BoundaryCondition::periodic();
    case BcKind::antiperiodic_bc:
      return BoundaryCondition::antiperiodic(spec.ap_axis);
    case BcKind::fixed_bc:
      return sample_fixed_bc(
          lat,
          rng::derive_seed(master_seed, rng::stream_layer_couplings,
                           std::uint64_t(realization)),
          rng::derive_seed(master_seed, rng::stream_layer_spins_a,
                           std::uint64_t(realization)));
  }
  throw std::invalid_argument("unknown boundary kind");
}

std::vector<double> default_chaos_grid() {
  std::vector<double> g{0.0};
  const std::vector<double> tail = log_spaced(1e-6, 10.0, 25);
  g.insert(g.end(), tail.begin(), tail.end());
  return g;
}

ChaosCurve chaos_curve(int d, int L, Topology topo, const BcSpec& bc,
                       std::span<const double> t_grid, int n_real,
                       std::uint64_t seed, SolveMethod method, int workers) {
  validate_grid(t_grid);
  if (n_real < 1) throw std::invalid_argument("n_real >= 1 required");
  const BoxLattice lat = BoxLattice::build(d, L, topo);
  const int nt = int(t_grid.size());

  std::vector<double> q(std::size_t(n_real) * std::size_t(nt), 0.0);
  std::vector<std::uint8_t> keep(std::size_t(n_real), 0);

  parallel_for(n_real, workers, [&](int r) {
    const CouplingField j = sample_couplings(
        lat, rng::derive_seed(seed, rng::stream_couplings, std::uint64_t(r)));
    const CouplingField jp = sample_couplings(
        lat, rng::derive_seed(seed, rng::stream_couplings_prime, std::uint64_t(r)));
    const BoundaryCondition bcr = realize_bc(bc, lat, seed, r);
    const GroundStateResult base = solve(lat, j, bcr, method);
    if (base.degenerate) return;
    const InterpolationPath path{&j, &jp, {}};
    for (int k = 0; k < nt; ++k) {
      const CouplingField jt = interpolate(path, t_grid[std::size_t(k)]);
      const GroundStateResult g = solve(lat, jt, bcr, method);
      if (g.degenerate) return;
      q[std::size_t(r) * std::size_t(nt) + std::size_t(k)] =
          edge_overlap(lat, base.config, g.config);
    }
    keep[std::size_t(r)] = 1;
  });

  ChaosCurve c;
  c.d = d;
  c.L = L;
  c.topology = lat.topology_string();
  c.bc_label = realize_bc(bc, lat, seed, 0).label();
  c.seed = seed;
  c.n_requested = n_real;
  c.t.assign(t_grid.begin(), t_grid.end());
  std::vector<double> col;
  for (int k = 0; k < nt; ++k) {
    col.clear();
    for (int r = 0; r < n_real; ++r)
      if (keep[std::size_t(r)])
        col.push_back(q[std::size_t(r) * std::size_t(nt) + std::size_t(k)]);
    if (col.empty()) throw std::runtime_error("all realizations degenerate");
    const ColumnStats s = column_stats(col);
    c.mean_q.push_back(s.m.mean);
    c.se_q.push_back(s.m.se);
    c.q05.push_back(s.q05);
    c.q50.push_back(s.q50);
    c.q95.push_back(s.q95);
  }
  c.n_real = int(std::count(keep.begin(), keep.end(), std::uint8_t(1)));
  c.n_degenerate = n_real - c.n_real;
  enforce_degenerate_budget(c.n_degenerate, n_real);
  return c;
}

AdcThreshold adc_threshold(const ChaosCurve& curve, double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("eps must be positive");
  if (curve.t.empty()) throw std::invalid_argument("empty curve");
  AdcThreshold r;
  r.eps = eps;
  int first_bad = -1;
  for (std::size_t k = 0; k < curve.t.size(); ++k)
    if (1.0 - curve.mean_q[k] > eps) {
      first_bad = int(k);
      break;
    }
  if (first_bad < 0) {
    r.t_star = curve.t.back();
    return r;
  }
  // does any positive grid time pass before the failure?
  bool positive_pass = false;
  for (int k = 0; k < first_bad; ++k)
    if (curve.t[std::size_t(k)] > 0.0) positive_pass = true;
  if (positive_pass) {
    r.t_star = curve.t[std::size_t(first_bad - 1)];
  } else {
    for (double t : curve.t)
      if (t > 0.0) {
        r.t_star = t;
        break;
      }
    r.first_point_fails = true;
  }
  return r;
}

ExponentFit fit_alpha(std::span<const std::pair<int, double>> thresholds, int d) {
  if (thresholds.size() < 3)
    throw std::invalid_argument("need thresholds for at least 3 sizes");
  ExponentFit f;
  std::vector<double> x, y;
  for (const auto& [L, tstar] : thresholds) {
    if (!(tstar > 0.0))
      throw std::invalid_argument("thresholds must be positive");
    x.push_back(double(d) * std::log(double(L)));
    y.push_back(std::log(tstar));
    f.sizes.push_back(L);
  }
  const LineFit lf = fit_line(x, y);
  f.value = -lf.slope;
  f.se = lf.slope_se;
  f.r2 = lf.r2;
  f.method = "log-log least squares";
  return f;
}

DropletScan droplet_size_scan(int d, std::span<const int> sizes, Topology topo,
                              const BcSpec& bc, int n_real, std::uint64_t seed,
                              SolveMethod method, int workers) {
  if (sizes.size() < 3) throw std::invalid_argument("need at least 3 sizes");
  if (n_real < 1) throw std::invalid_argument("n_real >= 1 required");

  DropletScan scan;
  scan.d = d;
  scan.sizes.assign(sizes.begin(), sizes.end());
  scan.seed = seed;
  scan.n_real = n_real;

  for (std::size_t si = 0; si < sizes.size(); ++si) {
    const int L = sizes[si];
    const BoxLattice lat = BoxLattice::build(d, L, topo);
    const std::uint64_t sub = rng::derive_seed(seed, rng::stream_misc, si);
    const int ne = int(lat.edge_count());
    if (si == 0) {
      scan.topology = lat.topology_string();
      scan.bc_label = realize_bc(bc, lat, sub, 0).label();
    }

    std::vector<std::int32_t> size_of(std::size_t(n_real) * std::size_t(ne), 0);
    std::vector<std::uint8_t> keep(std::size_t(n_real), 0);
    parallel_for(n_real, workers, [&](int r) {
      const CouplingField j = sample_couplings(
          lat, rng::derive_seed(sub, rng::stream_couplings, std::uint64_t(r)));
      const BoundaryCondition bcr = realize_bc(bc, lat, sub, r);
      for (int b = 0; b < ne; ++b) {
        const DropletReport rep = critical_droplet(lat, j, bcr, b, method);
        if (rep.flex.degenerate) return;
        size_of[std::size_t(r) * std::size_t(ne) + std::size_t(b)] =
            std::int32_t(rep.boundary.size());
      }
      keep[std::size_t(r)] = 1;
    });

    std::vector<double> per_real_max, per_real_mean;
    std::vector<std::int64_t> counts;
    for (int r = 0; r < n_real; ++r) {
      if (!keep[std::size_t(r)]) continue;
      std::int32_t mx = 0;
      std::int64_t sum = 0;
      for (int b = 0; b < ne; ++b) {
        const std::int32_t s = size_of[std::size_t(r) * std::size_t(ne) + std::size_t(b)];
        mx = std::max(mx, s);
        sum += s;
        if (std::size_t(s) >= counts.size()) counts.resize(std::size_t(s) + 1, 0);
        ++counts[std::size_t(s)];
      }
      per_real_max.push_back(double(mx));
      per_real_mean.push_back(double(sum) / double(ne));
    }
    if (per_real_max.empty()) throw std::runtime_error("all realizations degenerate");
    const MeanSE mm = mean_se(per_real_max);
    const MeanSE ms = mean_se(per_real_mean);
    scan.mean_max.push_back(mm.mean);
    scan.se_max.push_back(mm.se);
    scan.mean_size.push_back(ms.mean);
    scan.se_size.push_back(ms.se);
    scan.size_counts.push_back(std::move(counts));
    const int ndeg = n_real - int(per_real_max.size());
    scan.degenerate.push_back(ndeg);
    enforce_degenerate_budget(ndeg, n_real);
  }

  std::vector<double> xg, yg, xf, yf;
  for (std::size_t si = 0; si < sizes.size(); ++si) {
    xg.push_back(double(d) * std::log(double(sizes[si])));
    yg.push_back(std::log(scan.mean_max[si]));
    xf.push_back(std::log(double(sizes[si])));
    yf.push_back(std::log(scan.mean_size[si]));
  }
  const LineFit g = fit_line(xg, yg);
  scan.gamma = {g.slope, g.slope_se, g.r2, scan.sizes, "log-log least squares"};
  const LineFit f = fit_line(xf, yf);
  scan.df = {f.slope, f.slope_se, f.r2, scan.sizes, "log-log least squares"};
  return scan;
}

FlexibilityHistogram flexibility_histogram(int d, int L, Topology topo,
                                           const BcSpec& bc, int n_real,
                                           std::span<const double> deltas,
                                           std::uint64_t seed, SolveMethod method,
                                           int workers) {
  if (n_real < 1) throw std::invalid_argument("n_real >= 1 required");
  if (deltas.empty()) throw std::invalid_argument("no thresholds given");
  for (double del : deltas)
    if (!(del > 0.0)) throw std::invalid_argument("thresholds must be positive");

  const BoxLattice lat = BoxLattice::build(d, L, topo);
  const int ne = int(lat.edge_count());
  std::vector<double> f(std::size_t(n_real) * std::size_t(ne), -1.0);

  parallel_for(n_real, workers, [&](int r) {
    const CouplingField j = sample_couplings(
        lat, rng::derive_seed(seed, rng::stream_couplings, std::uint64_t(r)));
    const BoundaryCondition bcr = realize_bc(bc, lat, seed, r);
    for (int b = 0; b < ne; ++b) {
      const DropletReport rep = critical_droplet(lat, j, bcr, b, method);
      if (!rep.flex.degenerate)
        f[std::size_t(r) * std::size_t(ne) + std::size_t(b)] = rep.flex.f;
    }
  });

  FlexibilityHistogram h;
  h.d = d;
  h.L = L;
  h.topology = lat.topology_string();
  h.bc_label = realize_bc(bc, lat, seed, 0).label();
  h.seed = seed;
  std::vector<double> vals;
  vals.reserve(f.size());
  for (double v : f)
    if (v >= 0.0) vals.push_back(v);
  h.n_samples = std::int64_t(vals.size());
  h.n_degenerate = std::int64_t(f.size()) - h.n_samples;
  enforce_degenerate_budget(h.n_degenerate, std::int64_t(f.size()));

  const double n = double(h.n_samples);
  for (double del : deltas) {
    std::int64_t cnt = 0;
    for (double v : vals) cnt += v <= del;
    const double p = double(cnt) / n;
    const double se = std::sqrt(p * (1.0 - p) / n);
    const double bound = del / std::sqrt(2.0 * 3.14159265358979323846) + 3.0 * se;
    const bool asserted = del < 1.0;
    h.delta.push_back(del);
    h.p_hat.push_back(p);
    h.se.push_back(se);
    h.bound.push_back(bound);
    h.asserted.push_back(asserted);
    const bool ok = !asserted || p <= bound;
    h.pass.push_back(ok);
    if (!ok) h.all_pass = false;
    if (d == 1) {
      const double ex = std::erf(del / (2.0 * std::sqrt(2.0)));
      h.exact.push_back(ex);
      h.exact_pass.push_back(std::abs(p - ex) <= 3.0 * se);
    }
  }
  return h;
}

namespace {

struct ScaledCurve {
  double lnL = 0.0;
  std::vector<double> lnt, q;
};

double collapse_objective(const std::vector<ScaledCurve>& cs, double xi) {
  double sum = 0.0;
  std::int64_t cnt = 0;
  for (std::size_t i = 0; i < cs.size(); ++i)
    for (std::size_t jx = 0; jx < cs.size(); ++jx) {
      if (i == jx) continue;
      const ScaledCurve& a = cs[i];
      const ScaledCurve& b = cs[jx];
      for (std::size_t k = 0; k < a.lnt.size(); ++k) {
        const double u = a.lnL + a.lnt[k] / (2.0 * xi);
        // position along b with the same scaled coordinate
        const double lnt_eq = (u - b.lnL) * 2.0 * xi;
        if (lnt_eq < b.lnt.front() || lnt_eq > b.lnt.back()) continue;
        const std::size_t hi = std::size_t(
            std::upper_bound(b.lnt.begin(), b.lnt.end(), lnt_eq) - b.lnt.begin());
        const std::size_t m = std::clamp<std::size_t>(hi, 1, b.lnt.size() - 1) - 1;
        const double frac = (lnt_eq - b.lnt[m]) / (b.lnt[m + 1] - b.lnt[m]);
        const double yb = b.q[m] + frac * (b.q[m + 1] - b.q[m]);
        const double diff = a.q[k] - yb;
        sum += diff * diff;
        ++cnt;
      }
    }
  return cnt ? sum / double(cnt) : inf;
}

}  // namespace

CollapseFit collapse_fit(std::span<const ChaosCurve> curves) {
  if (curves.size() < 3) throw std::invalid_argument("need at least 3 sizes");
  for (std::size_t i = 1; i < curves.size(); ++i) {
    if (curves[i].t != curves[0].t)
      throw std::invalid_argument("curves must share one time grid");
    if (curves[i].d != curves[0].d)
      throw std::invalid_argument("curves must share the dimension");
  }

  CollapseFit out;
  std::vector<ScaledCurve> cs;
  for (const ChaosCurve& c : curves) {
    for (int s : out.sizes)
      if (s == c.L) throw std::invalid_argument("duplicate size in collapse input");
    out.sizes.push_back(c.L);
    ScaledCurve sc;
    sc.lnL = std::log(double(c.L));
    for (std::size_t k = 0; k < c.t.size(); ++k)
      if (c.t[k] > 0.0) {
        sc.lnt.push_back(std::log(c.t[k]));
        sc.q.push_back(c.mean_q[k]);
      }
    if (sc.lnt.size() < 2)
      throw std::invalid_argument("curves need at least 2 positive times");
    cs.push_back(std::move(sc));
  }

  const std::vector<double> grid = log_spaced(0.01, 5.0, 64);
  std::vector<double> vals(grid.size(), inf);
  int best = -1;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    vals[i] = collapse_objective(cs, grid[i]);
    if (std::isfinite(vals[i]) && (best < 0 || vals[i] < vals[std::size_t(best)]))
      best = int(i);
  }
  if (best < 0) {
    out.flat = true;
    return out;
  }
  double vmin = inf, vmax = -inf;
  for (double v : vals)
    if (std::isfinite(v)) {
      vmin = std::min(vmin, v);
      vmax = std::max(vmax, v);
    }
  out.flat = best == 0 || best == int(grid.size()) - 1 ||
             vmax - vmin <= 1e-3 * std::max(1e-300, std::abs(vmax));
  if (out.flat) {
    out.xi = grid[std::size_t(best)];
    out.objective = vals[std::size_t(best)];
    return out;
  }

  const double lo = grid[std::size_t(best - 1)], hi = grid[std::size_t(best + 1)];
  out.xi = golden_min([&](double x) { return collapse_objective(cs, x); }, lo, hi,
                      1e-4);
  out.objective = collapse_objective(cs, out.xi);
  for (double t : curves[0].t)
    if (t > 0.0) {
      out.t.push_back(t);
      out.ell_c.push_back(std::pow(t, -1.0 / (2.0 * out.xi)));
    }
  return out;
}

namespace {

std::string strict_greater(double l, double lse, double r, double rse) {
  if (l - 2.0 * lse > r + 2.0 * rse) return "pass";
  if (l + 2.0 * lse < r - 2.0 * rse) return "fail";
  return "inconclusive";
}

std::string equal_within(double l, double lse, double r, double rse) {
  const double diff = std::abs(l - r);
  if (diff <= 2.0 * std::sqrt(lse * lse + rse * rse)) return "pass";
  if (diff > 2.0 * (lse + rse)) return "fail";
  return "inconclusive";
}

std::string at_least(double l, double lse, double r) {
  if (l - 2.0 * lse >= r) return "pass";
  if (l + 2.0 * lse < r) return "fail";
  return "inconclusive";
}

}  // namespace

RelationReport relation_report(int d, EstimateSE alpha, EstimateSE gamma,
                               EstimateSE xi, EstimateSE theta, EstimateSE df) {
  if (d < 1) throw std::invalid_argument("d >= 1 required");
  RelationReport rep;
  rep.d = d;
  rep.alpha = alpha;
  rep.gamma = gamma;
  rep.xi = xi;
  rep.theta = theta;
  rep.df = df;

  RelationCheck c1;
  c1.relation = "alpha > 2*gamma";
  c1.lhs = alpha.value;
  c1.lhs_se = alpha.se;
  c1.rhs = 2.0 * gamma.value;
  c1.rhs_se = 2.0 * gamma.se;
  c1.verdict = strict_greater(c1.lhs, c1.lhs_se, c1.rhs, c1.rhs_se);
  rep.checks.push_back(c1);

  RelationCheck c2;
  c2.relation = "alpha = 2*xi/d";
  c2.lhs = alpha.value;
  c2.lhs_se = alpha.se;
  c2.rhs = 2.0 * xi.value / double(d);
  c2.rhs_se = 2.0 * xi.se / double(d);
  c2.verdict = equal_within(c2.lhs, c2.lhs_se, c2.rhs, c2.rhs_se);
  rep.checks.push_back(c2);

  RelationCheck c3;
  c3.relation = "alpha = 2*df/d";
  c3.lhs = alpha.value;
  c3.lhs_se = alpha.se;
  c3.rhs = 2.0 * df.value / double(d);
  c3.rhs_se = 2.0 * df.se / double(d);
  c3.verdict = equal_within(c3.lhs, c3.lhs_se, c3.rhs, c3.rhs_se);
  rep.checks.push_back(c3);

  RelationCheck c4;
  c4.relation = "alpha >= 1/d";
  c4.lhs = alpha.value;
  c4.lhs_se = alpha.se;
  c4.rhs = 1.0 / double(d);
  c4.rhs_se = 0.0;
  c4.verdict = at_least(c4.lhs, c4.lhs_se, c4.rhs);
  rep.checks.push_back(c4);

  return rep;
}

}  // namespace ea
