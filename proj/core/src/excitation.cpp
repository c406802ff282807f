#include "ealab/excitation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "solver_detail.hpp"

namespace ea {

namespace {

void check_edge_id(const BoxLattice& lat, int edge) {
  if (edge < 0 || edge >= lat.edge_count())
    throw std::out_of_range("edge index out of range");
}

SolveConstraint force_edge(int edge, int value) {
  SolveConstraint c;
  c.edge = SolveConstraint::EdgeValue{edge, std::int8_t(value)};
  return c;
}

struct ZeroedPair {
  GroundStateResult plus, minus;
  double c = 0.0;  // coupling value where the two sectors tie
  bool degenerate = false;
};

// constrained pair with the seed coupling zeroed; the constrained minimizers
// do not depend on that coupling, so these are the excitation pair as well
ZeroedPair zeroed_pair(const BoxLattice& lat, const CouplingField& j,
                       const BoundaryCondition& bc, int edge, SolveMethod method) {
  CouplingField j0 = j;
  j0[edge] = 0.0;
  ZeroedPair z;
  z.plus = constrained_solve(lat, j0, bc, force_edge(edge, +1), method);
  z.minus = constrained_solve(lat, j0, bc, force_edge(edge, -1), method);
  z.c = 0.5 * (z.plus.energy - z.minus.energy);
  z.degenerate = z.plus.degenerate || z.minus.degenerate;
  return z;
}

int sign_of(double x) { return x > 0 ? 1 : x < 0 ? -1 : 0; }

}  // namespace

ExcitationPair excitation_pair(const BoxLattice& lat, const CouplingField& j,
                               const BoundaryCondition& bc, int edge,
                               SolveMethod method) {
  check_edge_id(lat, edge);
  GroundStateResult rp = constrained_solve(lat, j, bc, force_edge(edge, +1), method);
  GroundStateResult rm = constrained_solve(lat, j, bc, force_edge(edge, -1), method);
  ExcitationPair out;
  out.edge = std::int32_t(edge);
  out.e_plus = rp.energy;
  out.e_minus = rm.energy;
  out.degenerate = rp.degenerate || rm.degenerate;
  out.plus = std::move(rp.config);
  out.minus = std::move(rm.config);
  return out;
}

FlexibilityRecord flexibility(const BoxLattice& lat, const CouplingField& j,
                              const BoundaryCondition& bc, int edge,
                              SolveMethod method) {
  ExcitationPair pair = excitation_pair(lat, j, bc, edge, method);
  ZeroedPair z = zeroed_pair(lat, j, bc, edge, method);
  FlexibilityRecord r;
  r.edge = std::int32_t(edge);
  r.f = std::abs(pair.e_plus - pair.e_minus);
  r.c = z.c;
  r.ground_sign = sign_of(j[edge] - z.c);
  r.degenerate = pair.degenerate || z.degenerate;
  return r;
}

DropletReport critical_droplet(const BoxLattice& lat, const CouplingField& j,
                               const BoundaryCondition& bc, int edge,
                               SolveMethod method) {
  check_edge_id(lat, edge);
  ZeroedPair z = zeroed_pair(lat, j, bc, edge, method);

  DropletReport r;
  r.edge = std::int32_t(edge);
  r.flex.edge = r.edge;
  r.flex.c = z.c;
  r.flex.f = 2.0 * std::abs(j[edge] - z.c);
  r.flex.ground_sign = sign_of(j[edge] - z.c);
  r.flex.degenerate = z.degenerate;

  const SpinConfig& a = z.plus.config;
  for (int e = 0; e < lat.edge_count(); ++e)
    if (a.edge_value(e) != z.minus.config.edge_value(e))
      r.boundary.push_back(std::int32_t(e));

  SpinConfig b = bc.flip_symmetric() ? gauge_align(a, z.minus.config)
                                     : z.minus.config;
  Region dis = disagreement_region(a, b);
  const Edge& ed = lat.edge(edge);
  // the seed edge changes value, so exactly one endpoint sits inside; on an
  // exact gauge tie, report the side holding the lower endpoint
  if (bc.flip_symmetric() && 2 * std::int64_t(dis.size()) == lat.vertex_count() &&
      !dis.contains(ed.a)) {
    b.flip_all();
    dis = disagreement_region(a, b);
  }
  const int seed_vertex = dis.contains(ed.a) ? ed.a : ed.b;
  std::vector<Region> comps = connected_components(lat, dis);
  r.region_is_whole_disagreement = comps.size() == 1;
  for (Region& comp : comps)
    if (comp.contains(seed_vertex)) {
      r.region = std::move(comp);
      break;
    }
  return r;
}

Region window_of_edges(const BoxLattice& lat, std::span<const std::int32_t> edges) {
  Region w(lat);
  for (std::int32_t e : edges) {
    check_edge_id(lat, e);
    w.add(lat.edge(e).a);
    w.add(lat.edge(e).b);
  }
  return w;
}

int WindowEnergyVector::find(std::uint32_t edge_bits) const {
  for (std::size_t i = 0; i < entries.size(); ++i)
    if (entries[i].edge_bits == edge_bits) return int(i);
  return -1;
}

WindowEnergyVector window_energy_vector(const BoxLattice& lat,
                                        const CouplingField& j,
                                        const BoundaryCondition& bc,
                                        const Region& window, SolveMethod method) {
  if (window.lattice() != &lat)
    throw std::invalid_argument("window belongs to a different lattice");
  if (window.empty()) throw std::invalid_argument("window is empty");

  WindowEnergyVector wv;
  wv.window = window;
  for (int e = 0; e < lat.edge_count(); ++e) {
    const Edge& ed = lat.edge(e);
    if (window.contains(ed.a) && window.contains(ed.b))
      wv.window_edges.push_back(std::int32_t(e));
  }
  if (wv.window_edges.size() > 4) {
    char msg[96];
    std::snprintf(msg, sizeof msg, "window spans %zu edges; at most 4 supported",
                  wv.window_edges.size());
    throw std::invalid_argument(msg);
  }

  for (std::int32_t e : boundary_edges(lat, window)) wv.bound += 2.0 * std::abs(j[e]);
  if (bc.kind == BcKind::fixed_bc) {
    const auto& les = lat.layer_edges();
    for (std::size_t k = 0; k < les.size(); ++k)
      if (window.contains(les[k].vertex))
        wv.bound += 2.0 * std::abs(bc.layer_couplings[k]);
  }

  const std::vector<int> verts = window.vertices();
  const int nv = int(verts.size());
  if (nv > 12) throw std::invalid_argument("window spans too many vertices");
  const detail::EffectiveProblem ep = detail::make_effective(lat, j, bc);
  std::vector<int> slot(std::size_t(lat.vertex_count()), -1);
  for (int k = 0; k < nv; ++k) slot[std::size_t(verts[std::size_t(k)])] = k;

  // enumerate spin lifts; under a flip-symmetric problem the first window
  // spin stays +1 (its flip is degenerate with the environment flipped)
  const bool sym = bc.flip_symmetric();
  const std::uint32_t nlifts = 1u << (sym ? nv - 1 : nv);
  std::vector<std::int8_t> spin(std::size_t(nv), 1);
  for (std::uint32_t m = 0; m < nlifts; ++m) {
    for (int k = 0; k < nv; ++k) {
      const int bit = sym ? (k == 0 ? 0 : int(m >> (k - 1) & 1)) : int(m >> k & 1);
      spin[std::size_t(k)] = std::int8_t(bit ? -1 : 1);
    }
    SolveConstraint c;
    for (int k = 0; k < nv; ++k)
      c.pins.emplace_back(std::int32_t(verts[std::size_t(k)]), spin[std::size_t(k)]);
    const GroundStateResult g = constrained_solve(lat, j, bc, c, method);

    // outside = energy - window term, re-accumulated in extended precision
    // from the solved configuration: crossing times divide pairwise outside
    // differences by the crossing slope, which amplifies rounding noise
    long double acc = 0.0L;
    const auto& es = lat.edges();
    for (std::size_t e = 0; e < es.size(); ++e)
      acc -= static_cast<long double>(ep.jeff[e]) *
             static_cast<long double>(g.config.s[std::size_t(es[e].a)] *
                                      g.config.s[std::size_t(es[e].b)]);
    if (!ep.field.empty())
      for (std::size_t v = 0; v < ep.field.size(); ++v)
        acc -= static_cast<long double>(ep.field[v]) *
               static_cast<long double>(g.config.s[v]);
    std::uint32_t ebits = 0;
    for (std::size_t i = 0; i < wv.window_edges.size(); ++i) {
      const Edge& ed = lat.edge(wv.window_edges[i]);
      const int val = spin[std::size_t(slot[std::size_t(ed.a)])] *
                      spin[std::size_t(slot[std::size_t(ed.b)])];
      if (val < 0) ebits |= 1u << i;
      acc += static_cast<long double>(j[wv.window_edges[i]]) *
             static_cast<long double>(val);
    }
    const double outside = double(acc);

    std::string lift(std::size_t(nv), '0');
    for (int k = 0; k < nv; ++k)
      if (spin[std::size_t(k)] < 0) lift[std::size_t(k)] = '1';

    const int at = wv.find(ebits);
    if (at < 0)
      wv.entries.push_back({ebits, outside, std::move(lift)});
    else if (outside < wv.entries[std::size_t(at)].outside) {
      wv.entries[std::size_t(at)].outside = outside;
      wv.entries[std::size_t(at)].lift_bits = std::move(lift);
    }
  }

  std::sort(wv.entries.begin(), wv.entries.end(),
            [](const auto& x, const auto& y) { return x.edge_bits < y.edge_bits; });
  return wv;
}

std::vector<int> order_configs(const WindowEnergyVector& wv,
                               std::span<const double> jw) {
  if (jw.size() != wv.window_edges.size())
    throw std::invalid_argument("one coupling per window edge required");
  const int n = int(wv.entries.size());
  std::vector<double> score(std::size_t(n), 0.0);
  for (int i = 0; i < n; ++i) {
    double s = wv.entries[std::size_t(i)].outside;
    for (std::size_t k = 0; k < jw.size(); ++k)
      s -= jw[k] * double(wv.edge_value(i, int(k)));
    score[std::size_t(i)] = s;
  }
  std::vector<int> idx(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) idx[std::size_t(i)] = i;
  std::stable_sort(idx.begin(), idx.end(), [&](int x, int y) {
    return score[std::size_t(x)] < score[std::size_t(y)];
  });
  for (int k = 0; k + 1 < n; ++k)
    if (score[std::size_t(idx[std::size_t(k + 1)])] -
            score[std::size_t(idx[std::size_t(k)])] <=
        degeneracy_gap_tol)
      throw std::domain_error("window pattern energies tie; order undefined");
  return idx;
}

namespace {

// roots of a e^-t + b sqrt(1 - e^-2t) = c on [0, t_max]; the curve has at
// most one interior extremum, so bisect each monotone branch
void add_roots(double a, double b, double c, double t_max,
               std::vector<double>& out) {
  if (a == 0.0 && b == 0.0) return;  // constant: no isolated crossing
  auto g = [&](double t) {
    return a * std::exp(-t) + b * std::sqrt(-std::expm1(-2.0 * t)) - c;
  };
  double knots[3] = {0.0, t_max, t_max};
  int nk = 2;
  if (a != 0.0 && b != 0.0 && (a > 0) == (b > 0)) {
    const double tstar = -std::log(std::abs(a) / std::hypot(a, b));
    if (tstar > 0.0 && tstar < t_max) {
      knots[1] = tstar;
      knots[2] = t_max;
      nk = 3;
    }
  }
  std::vector<double> roots;
  for (int s = 0; s + 1 < nk; ++s) {
    double lo = knots[s], hi = knots[s + 1];
    double glo = g(lo), ghi = g(hi);
    if (glo == 0.0) roots.push_back(lo);
    if (ghi == 0.0 && s + 2 == nk) roots.push_back(hi);
    if (!((glo < 0 && ghi > 0) || (glo > 0 && ghi < 0))) continue;
    for (int it = 0; it < 200 && hi - lo > 1e-13; ++it) {
      const double mid = 0.5 * (lo + hi);
      const double gm = g(mid);
      if (gm == 0.0) { lo = hi = mid; break; }
      if ((gm < 0) == (glo < 0)) { lo = mid; glo = gm; } else { hi = mid; }
    }
    roots.push_back(0.5 * (lo + hi));
  }
  std::sort(roots.begin(), roots.end());
  for (std::size_t k = 0; k < roots.size(); ++k)
    if (k == 0 || roots[k] - roots[k - 1] > 1e-9) out.push_back(roots[k]);
}

}  // namespace

std::vector<double> interpolation_crossings(double a, double b, double c,
                                            double t_max) {
  if (!(t_max >= 0.0 && t_max <= 50.0))
    throw std::invalid_argument("t_max must lie in [0, 50]");
  std::vector<double> out;
  add_roots(a, b, c, t_max, out);
  return out;
}

std::vector<double> crossing_times(const WindowEnergyVector& wv,
                                   const InterpolationPath& path, double t_max) {
  if (!(t_max >= 0.0 && t_max <= 50.0))
    throw std::invalid_argument("t_max must lie in [0, 50]");
  if (!path.base || !path.target)
    throw std::invalid_argument("path needs base and target fields");
  if (path.base->lat != wv.window.lattice() || path.target->lat != wv.window.lattice())
    throw std::invalid_argument("path fields belong to a different lattice");

  std::vector<char> moving(wv.window_edges.size(), 1);
  if (!path.moves_all()) {
    std::vector<std::int32_t> sorted(path.edges);
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t k = 0; k < wv.window_edges.size(); ++k)
      moving[k] = std::binary_search(sorted.begin(), sorted.end(),
                                     wv.window_edges[k]);
  }

  std::vector<double> out;
  const int n = int(wv.entries.size());
  for (int i = 0; i < n; ++i)
    for (int jx = i + 1; jx < n; ++jx) {
      double a = 0.0, b = 0.0, frozen = 0.0;
      for (std::size_t k = 0; k < wv.window_edges.size(); ++k) {
        const int de = wv.edge_value(i, int(k)) - wv.edge_value(jx, int(k));
        if (de == 0) continue;
        const std::int32_t e = wv.window_edges[k];
        if (moving[k]) {
          a += path.base->j[std::size_t(e)] * double(de);
          b += path.target->j[std::size_t(e)] * double(de);
        } else {
          frozen += path.base->j[std::size_t(e)] * double(de);
        }
      }
      add_roots(a, b, wv.e(i, jx) - frozen, t_max, out);
    }
  std::sort(out.begin(), out.end());
  return out;
}

StabilityReport stability_scan(const BoxLattice& lat, const CouplingField& j,
                               const CouplingField& jprime,
                               const BoundaryCondition& bc, int edge,
                               std::span<const double> t_grid, SolveMethod method) {
  check_edge_id(lat, edge);
  if (t_grid.empty()) throw std::invalid_argument("empty time grid");
  for (std::size_t k = 0; k < t_grid.size(); ++k) {
    if (!(t_grid[k] >= 0.0 && t_grid[k] <= 50.0))
      throw std::invalid_argument("grid times must lie in [0, 50]");
    if (k > 0 && t_grid[k] < t_grid[k - 1])
      throw std::invalid_argument("grid must be sorted ascending");
  }

  StabilityReport r;
  r.edge = std::int32_t(edge);
  r.t.assign(t_grid.begin(), t_grid.end());
  const InterpolationPath path{&j, &jprime, {}};
  for (double t : t_grid) {
    const CouplingField jt = interpolate(path, t);
    DropletReport d = critical_droplet(lat, jt, bc, edge, method);
    r.f.push_back(d.flex.f);
    r.sign.push_back(d.flex.ground_sign);
    r.droplet_size.push_back(int(d.boundary.size()));
  }

  double maxj = 0.0;
  for (int e = 0; e < lat.edge_count(); ++e)
    maxj = std::max({maxj, std::abs(j[e]), std::abs(jprime[e])});
  int maxd = 0;
  for (int s : r.droplet_size) maxd = std::max(maxd, s);
  double dtmax = 0.0;
  for (std::size_t k = 1; k < r.t.size(); ++k)
    dtmax = std::max(dtmax, r.t[k] - r.t[k - 1]);
  r.slack = 6.0 * std::sqrt(dtmax) * maxj * double(maxd);

  for (std::size_t k = 0; k + 1 < r.t.size(); ++k)
    if (r.f[k] > r.slack && r.f[k + 1] > r.slack && r.sign[k] != r.sign[k + 1])
      r.violations.push_back(int(k));
  r.pass = r.violations.empty();
  return r;
}

DriftReport drift_check(const BoxLattice& lat, const CouplingField& j,
                        const CouplingField& jprime, const BoundaryCondition& bc,
                        int edge, double t, int grid_points, SolveMethod method) {
  check_edge_id(lat, edge);
  if (!(t >= 0.0 && t <= 1.0))
    throw std::invalid_argument("drift bound requires t in [0, 1]");

  DriftReport r;
  r.edge = std::int32_t(edge);
  r.t = t;
  for (int e = 0; e < lat.edge_count(); ++e)
    r.max_coupling = std::max({r.max_coupling, std::abs(j[e]), std::abs(jprime[e])});

  const InterpolationPath path{&j, &jprime, {}};
  const int n = t == 0.0 ? 1 : std::max(grid_points, 100);
  r.grid_points = n;
  double f0 = 0.0, ft = 0.0;
  for (int k = 0; k < n; ++k) {
    const double s = n == 1 ? 0.0 : t * double(k) / double(n - 1);
    const CouplingField jt = interpolate(path, s);
    DropletReport d = critical_droplet(lat, jt, bc, edge, method);
    r.max_droplet = std::max(r.max_droplet, int(d.boundary.size()));
    if (k == 0) f0 = d.flex.f;
    if (k == n - 1) ft = d.flex.f;
  }
  r.lhs = std::abs(ft - f0);
  r.rhs = t == 0.0 ? 0.0
                   : 6.0 * std::sqrt(t) * r.max_coupling * double(r.max_droplet);
  r.pass = r.lhs <= r.rhs + 1e-9;
  return r;
}

}  // namespace ea
