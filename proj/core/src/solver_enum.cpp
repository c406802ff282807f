#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>

#include "solver_detail.hpp"

// Gray-code enumeration. Enumeration variables are groups of vertices that
// flip together: normally one vertex each, but a fixed-edge-value constraint
// merges the two endpoints into one group with a relative sign. Pinned
// vertices are not variables; under a flip-symmetric problem with no pins the
// group holding vertex 0 is frozen so each flip class is visited once (the
// reported gap is then the gap between flip classes).
//
// The running energy uses compensated summation and any state that comes
// within a coarse margin of the tracked second-best level is re-evaluated
// through the canonical edge-order sum, so drift cannot corrupt the result.

namespace ea::detail {

namespace {

constexpr int max_free_spins = 28;
constexpr double recheck_margin = 1e-7;

struct Groups {
  std::vector<std::int32_t> group_of;       // vertex -> group id, -1 pinned
  std::vector<std::vector<int>> members;    // group -> vertices
  std::vector<std::int8_t> base_spin;       // vertex -> spin when group anchor is +1
  int frozen_group = -1;                    // gauge-fixed group, not enumerated
  std::int8_t frozen_value = 1;             // anchor value of the frozen group
  std::vector<int> variables;               // enumerated group ids
};

Groups build_groups(const EffectiveProblem& p, const SolveConstraint& c) {
  const BoxLattice& lat = *p.lat;
  const int n = int(lat.vertex_count());
  Groups g;
  g.group_of.assign(std::size_t(n), 0);
  g.base_spin.assign(std::size_t(n), 1);

  std::vector<std::int8_t> pinned(std::size_t(n), 0);
  std::vector<std::int8_t> pin_val(std::size_t(n), 0);
  for (auto [v, sp] : c.pins) {
    pinned[std::size_t(v)] = 1;
    pin_val[std::size_t(v)] = sp;
  }

  int cx = -1, cy = -1;
  std::int8_t cval = 1;
  if (c.edge) {
    const Edge& e = lat.edge(c.edge->edge);
    cx = e.a;
    cy = e.b;
    cval = c.edge->value;
    if (pinned[std::size_t(cx)] && pinned[std::size_t(cy)]) {
      if (pin_val[std::size_t(cx)] * pin_val[std::size_t(cy)] != cval)
        throw std::invalid_argument("edge constraint conflicts with pins");
      cx = cy = -1;  // constraint already implied
    } else if (pinned[std::size_t(cx)]) {
      pinned[std::size_t(cy)] = 1;
      pin_val[std::size_t(cy)] = std::int8_t(cval * pin_val[std::size_t(cx)]);
      cx = cy = -1;
    } else if (pinned[std::size_t(cy)]) {
      pinned[std::size_t(cx)] = 1;
      pin_val[std::size_t(cx)] = std::int8_t(cval * pin_val[std::size_t(cy)]);
      cx = cy = -1;
    }
  }

  int ng = 0;
  for (int v = 0; v < n; ++v) {
    if (pinned[std::size_t(v)]) {
      g.group_of[std::size_t(v)] = -1;
      g.base_spin[std::size_t(v)] = pin_val[std::size_t(v)];
      continue;
    }
    if (v == cy) {  // merged into cx's group below
      g.group_of[std::size_t(v)] = -2;
      continue;
    }
    g.group_of[std::size_t(v)] = ng;
    g.members.push_back({v});
    ++ng;
  }
  if (cx >= 0) {
    const int gid = g.group_of[std::size_t(cx)];
    g.group_of[std::size_t(cy)] = gid;
    g.members[std::size_t(gid)].push_back(cy);
    g.base_spin[std::size_t(cy)] = cval;  // sigma_cy = cval * sigma_cx
  }

  const bool any_pin = std::any_of(pinned.begin(), pinned.end(),
                                   [](std::int8_t x) { return x != 0; });
  if (p.flip_symmetric && !any_pin && ng > 0) {
    // freeze the group containing the lowest-index vertex with its spin +1
    int v0 = 0;
    const int gid = g.group_of[std::size_t(v0)];
    g.frozen_group = gid;
    g.frozen_value = g.base_spin[std::size_t(v0)];  // anchor * base(v0) = +1
  }
  for (int k = 0; k < ng; ++k)
    if (k != g.frozen_group) g.variables.push_back(k);
  return g;
}

struct Best2 {
  double e1 = std::numeric_limits<double>::infinity();
  double e2 = std::numeric_limits<double>::infinity();
  SpinConfig c1, c2;

  void offer(double e, const SpinConfig& cfg) {
    if (e < e1 || (e == e1 && lex_less(cfg, c1))) {
      e2 = e1;
      c2 = c1;
      e1 = e;
      c1 = cfg;
    } else if (e < e2) {
      e2 = e;
      c2 = cfg;
    }
  }
};

}  // namespace

bool enumeration_feasible(const EffectiveProblem& p, const SolveConstraint& c) {
  std::int64_t nvars = p.lat->vertex_count() - std::int64_t(c.pins.size());
  if (c.edge) {
    const Edge& e = p.lat->edge(c.edge->edge);
    bool ax = false, bx = false;
    for (auto [v, sp] : c.pins) {
      (void)sp;
      if (v == e.a) ax = true;
      if (v == e.b) bx = true;
    }
    if (!ax && !bx) --nvars;  // endpoints merge
  }
  if (p.flip_symmetric && c.pins.empty()) --nvars;
  return nvars <= max_free_spins;
}

GroundStateResult solve_enumeration(const EffectiveProblem& p,
                                    const SolveConstraint& c) {
  const BoxLattice& lat = *p.lat;
  const Groups g = build_groups(p, c);
  const int m = int(g.variables.size());
  if (m > max_free_spins)
    throw std::invalid_argument("enumeration infeasible: > 28 free spins");

  SpinConfig cur(lat);
  for (std::int64_t v = 0; v < lat.vertex_count(); ++v)
    cur.s[std::size_t(v)] = g.base_spin[std::size_t(v)];
  if (g.frozen_group >= 0 && g.frozen_value < 0)
    for (int v : g.members[std::size_t(g.frozen_group)])
      cur.s[std::size_t(v)] = std::int8_t(-cur.s[std::size_t(v)]);

  const bool has_field = !p.field.empty();
  double energy = effective_energy(p, cur);
  double comp = 0.0;  // Kahan compensation

  Best2 top;
  top.offer(energy, cur);

  const std::uint64_t total = 1ull << m;
  for (std::uint64_t k = 1; k < total; ++k) {
    const int var = g.variables[std::size_t(std::countr_zero(k))];
    double de = 0.0;
    for (int v : g.members[std::size_t(var)]) {
      const double sv = double(cur.s[std::size_t(v)]);
      if (has_field) de += 2.0 * p.field[std::size_t(v)] * sv;
      for (auto e : lat.incident_edges(v)) {
        const int w = lat.edge_other(e, v);
        if (g.group_of[std::size_t(w)] == var) continue;
        de += 2.0 * p.jeff[std::size_t(e)] * sv * double(cur.s[std::size_t(w)]);
      }
    }
    for (int v : g.members[std::size_t(var)])
      cur.s[std::size_t(v)] = std::int8_t(-cur.s[std::size_t(v)]);

    const double y = de - comp;
    const double t = energy + y;
    comp = (t - energy) - y;
    energy = t;

    if (energy < top.e2 + recheck_margin)
      top.offer(effective_energy(p, cur), cur);
  }

  GroundStateResult res;
  res.config = top.c1;
  normalize_config(p, c, res.config);
  res.energy = top.e1;
  res.gap = top.e2 - top.e1;
  res.degenerate = res.gap < degeneracy_gap_tol;
  res.solver = "enumeration";
  return res;
}

}  // namespace ea::detail
