#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include "solver_detail.hpp"

// Transfer DP over cross-section (column) configurations for d = 1, 2.
// Columns run along a transfer axis; a column state is one bit per vertex of
// the cross section (bit set = spin -1). Every cell keeps the two lowest
// path energies with parent pointers, so the returned gap is the distance to
// the second-lowest distinct configuration. An open transfer axis is a
// single sweep; a periodic one loops over first-column states and closes the
// ring with the wrap couplings.
//
// Constraints map onto the DP as state filters: pinned spins and an edge
// constraint inside one column restrict that column's allowed states; an
// edge constraint across a column pair restricts the transition (the inner
// Gray walk then runs over the remaining free bits). Under a flip-symmetric
// problem with no pins, column 0 is restricted to states with vertex 0 at
// +1, which visits each flip class once.

namespace ea::detail {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();
constexpr int max_width = 12;
constexpr double cost_budget = 2.5e9;

inline double spin_of(int s, int w) { return (s >> w) & 1 ? -1.0 : 1.0; }

struct AxisChoice {
  bool ok = false;
  int ta = 0, wa = -1;
  int Lt = 0, W = 1;
  double cost = 0.0;
};

AxisChoice choose_axes(const BoxLattice& lat) {
  AxisChoice best;
  const int d = lat.dim();
  if (d > 2) return best;
  if (d == 1) {
    AxisChoice c;
    c.ta = 0;
    c.wa = -1;
    c.Lt = lat.extent(0);
    c.W = 1;
    const bool per = lat.topology(0) == Topology::periodic;
    c.cost = double(c.Lt) * 4.0 * (per ? 2.0 : 1.0);
    c.ok = c.cost <= cost_budget;
    return c;
  }
  for (int ta = 0; ta < 2; ++ta) {
    const int wa = 1 - ta;
    AxisChoice c;
    c.ta = ta;
    c.wa = wa;
    c.Lt = lat.extent(ta);
    c.W = lat.extent(wa);
    if (c.W > max_width) continue;
    c.cost = double(c.Lt) * std::pow(4.0, c.W);
    if (lat.topology(ta) == Topology::periodic)
      c.cost *= double(1 << c.W);
    c.ok = c.cost <= cost_budget;
    if (c.ok && (!best.ok || c.cost < best.cost)) best = c;
  }
  return best;
}

struct DpTables {
  int Lt = 0, W = 1, ns = 2;
  bool ta_periodic = false;
  std::vector<int> vert;                        // (t, w) -> vertex id
  std::vector<std::vector<double>> intra;       // [Lt][ns]
  std::vector<std::vector<std::uint8_t>> allowed;  // [Lt][ns]
  std::vector<std::vector<double>> jh;          // [Lt-1][W]
  std::vector<double> jwrap;                    // [W], ta wrap couplings
  int hpair = -1, hrow = -1, hval = 1;          // transition constraint
};

DpTables build_tables(const EffectiveProblem& p, const SolveConstraint& c,
                      const AxisChoice& ax) {
  const BoxLattice& lat = *p.lat;
  DpTables tb;
  tb.Lt = ax.Lt;
  tb.W = ax.W;
  tb.ns = 1 << ax.W;
  tb.ta_periodic = lat.topology(ax.ta) == Topology::periodic;

  tb.vert.assign(std::size_t(tb.Lt) * std::size_t(tb.W), -1);
  std::array<int, 3> co{0, 0, 0};
  for (int t = 0; t < tb.Lt; ++t)
    for (int w = 0; w < tb.W; ++w) {
      co[std::size_t(ax.ta)] = t;
      if (ax.wa >= 0) co[std::size_t(ax.wa)] = w;
      tb.vert[std::size_t(t) * std::size_t(tb.W) + std::size_t(w)] =
          lat.vertex_at(std::span<const int>(co.data(), std::size_t(lat.dim())));
    }
  auto vat = [&](int t, int w) {
    return tb.vert[std::size_t(t) * std::size_t(tb.W) + std::size_t(w)];
  };

  const bool wa_periodic =
      ax.wa >= 0 && lat.topology(ax.wa) == Topology::periodic;
  const bool has_field = !p.field.empty();

  // intra-column energies
  tb.intra.assign(std::size_t(tb.Lt), std::vector<double>(std::size_t(tb.ns), 0.0));
  for (int t = 0; t < tb.Lt; ++t) {
    std::vector<double> jv(std::size_t(std::max(tb.W - 1, 0)), 0.0);
    for (int w = 0; w + 1 < tb.W; ++w)
      jv[std::size_t(w)] = p.jeff[std::size_t(lat.edge_index(vat(t, w), ax.wa))];
    double jvw = 0.0;
    if (wa_periodic && tb.W >= 3)
      jvw = p.jeff[std::size_t(lat.edge_index(vat(t, tb.W - 1), ax.wa))];
    for (int s = 0; s < tb.ns; ++s) {
      double e = 0.0;
      for (int w = 0; w + 1 < tb.W; ++w)
        e -= jv[std::size_t(w)] * spin_of(s, w) * spin_of(s, w + 1);
      if (wa_periodic && tb.W >= 3)
        e -= jvw * spin_of(s, tb.W - 1) * spin_of(s, 0);
      if (has_field)
        for (int w = 0; w < tb.W; ++w)
          e -= p.field[std::size_t(vat(t, w))] * spin_of(s, w);
      tb.intra[std::size_t(t)][std::size_t(s)] = e;
    }
  }

  // transfer couplings
  tb.jh.assign(std::size_t(std::max(tb.Lt - 1, 0)),
               std::vector<double>(std::size_t(tb.W), 0.0));
  for (int t = 0; t + 1 < tb.Lt; ++t)
    for (int w = 0; w < tb.W; ++w)
      tb.jh[std::size_t(t)][std::size_t(w)] =
          p.jeff[std::size_t(lat.edge_index(vat(t, w), ax.ta))];
  if (tb.ta_periodic) {
    tb.jwrap.assign(std::size_t(tb.W), 0.0);
    for (int w = 0; w < tb.W; ++w)
      tb.jwrap[std::size_t(w)] =
          p.jeff[std::size_t(lat.edge_index(vat(tb.Lt - 1, w), ax.ta))];
  }

  // allowed-state filters
  tb.allowed.assign(std::size_t(tb.Lt),
                    std::vector<std::uint8_t>(std::size_t(tb.ns), 1));
  std::vector<int> col_of(std::size_t(lat.vertex_count()), -1);
  std::vector<int> row_of(std::size_t(lat.vertex_count()), -1);
  for (int t = 0; t < tb.Lt; ++t)
    for (int w = 0; w < tb.W; ++w) {
      col_of[std::size_t(vat(t, w))] = t;
      row_of[std::size_t(vat(t, w))] = w;
    }

  for (auto [v, sp] : c.pins) {
    const int t = col_of[std::size_t(v)], w = row_of[std::size_t(v)];
    for (int s = 0; s < tb.ns; ++s)
      if (spin_of(s, w) != double(sp)) tb.allowed[std::size_t(t)][std::size_t(s)] = 0;
  }

  if (c.edge) {
    const Edge& e = lat.edge(c.edge->edge);
    const int val = c.edge->value;
    if (ax.wa >= 0 && e.axis == ax.wa) {
      // both endpoints in one column
      const int t = col_of[std::size_t(e.a)];
      const int w1 = row_of[std::size_t(e.a)], w2 = row_of[std::size_t(e.b)];
      for (int s = 0; s < tb.ns; ++s)
        if (spin_of(s, w1) * spin_of(s, w2) != double(val))
          tb.allowed[std::size_t(t)][std::size_t(s)] = 0;
    } else {
      // spans a column pair; wrap edges close the ring at pair Lt-1
      tb.hrow = row_of[std::size_t(e.a)];
      tb.hval = val;
      tb.hpair = e.wrap ? tb.Lt - 1 : std::min(col_of[std::size_t(e.a)],
                                               col_of[std::size_t(e.b)]);
    }
  }

  if (p.flip_symmetric && c.pins.empty()) {
    // gauge: vertex 0 sits at (t=0, w=0); keep its spin at +1
    for (int s = 0; s < tb.ns; ++s)
      if (s & 1) tb.allowed[0][std::size_t(s)] = 0;
  }

  return tb;
}

struct Cell2 {
  std::vector<double> best, second;
  std::vector<std::int16_t> par_s[2];
  std::vector<std::int8_t> par_k[2];
};

// one forward sweep; parents recorded for columns 1..Lt-1
struct Sweep {
  const DpTables& tb;
  std::vector<double> b0, b1;        // current column best/second
  std::vector<std::int16_t> ps[2];   // parent state per column (flattened)
  std::vector<std::int8_t> pk[2];    // parent slot per column

  explicit Sweep(const DpTables& t)
      : tb(t),
        b0(std::size_t(t.ns)), b1(std::size_t(t.ns)) {
    for (int k = 0; k < 2; ++k) {
      ps[k].assign(std::size_t(t.Lt) * std::size_t(t.ns), -1);
      pk[k].assign(std::size_t(t.Lt) * std::size_t(t.ns), -1);
    }
  }

  // restrict_first >= 0 limits column 0 to that single state
  void run(int restrict_first) {
    const int ns = tb.ns, W = tb.W;
    for (int s = 0; s < ns; ++s) {
      const bool ok = tb.allowed[0][std::size_t(s)] &&
                      (restrict_first < 0 || s == restrict_first);
      b0[std::size_t(s)] = ok ? tb.intra[0][std::size_t(s)] : inf;
      b1[std::size_t(s)] = inf;
    }
    std::vector<double> nb(static_cast<std::size_t>(ns)), ns2(static_cast<std::size_t>(ns));
    for (int pair = 0; pair + 1 < tb.Lt; ++pair) {
      const int dst = pair + 1;
      std::fill(nb.begin(), nb.end(), inf);
      std::fill(ns2.begin(), ns2.end(), inf);
      const auto& jc = tb.jh[std::size_t(pair)];
      const auto& okdst = tb.allowed[std::size_t(dst)];
      auto* ps0 = ps[0].data() + std::size_t(dst) * std::size_t(ns);
      auto* ps1 = ps[1].data() + std::size_t(dst) * std::size_t(ns);
      auto* pk0 = pk[0].data() + std::size_t(dst) * std::size_t(ns);
      auto* pk1 = pk[1].data() + std::size_t(dst) * std::size_t(ns);

      const bool hc = tb.hpair == pair;
      // free target bits; a transition constraint fixes one of them
      int freebits[max_width];
      int nfree = 0;
      for (int w = 0; w < W; ++w)
        if (!(hc && w == tb.hrow)) freebits[nfree++] = w;

      for (int s = 0; s < ns; ++s) {
        const double vb = b0[std::size_t(s)];
        if (vb == inf) continue;
        const double vs = b1[std::size_t(s)];

        int sp = 0;
        if (hc) {
          const int sbit = (s >> tb.hrow) & 1;
          const int tbit = tb.hval > 0 ? sbit : 1 - sbit;
          sp = tbit << tb.hrow;
        }
        double tval = 0.0;
        for (int w = 0; w < W; ++w)
          tval -= jc[std::size_t(w)] * spin_of(s, w) * spin_of(sp, w);

        auto relax = [&](int sdst, double tv) {
          if (!okdst[std::size_t(sdst)]) return;
          const double v0 = vb + tv;
          if (v0 < nb[std::size_t(sdst)]) {
            ns2[std::size_t(sdst)] = nb[std::size_t(sdst)];
            ps1[sdst] = ps0[sdst];
            pk1[sdst] = pk0[sdst];
            nb[std::size_t(sdst)] = v0;
            ps0[sdst] = std::int16_t(s);
            pk0[sdst] = 0;
          } else if (v0 < ns2[std::size_t(sdst)]) {
            ns2[std::size_t(sdst)] = v0;
            ps1[sdst] = std::int16_t(s);
            pk1[sdst] = 0;
          }
          if (vs == inf) return;
          const double v1 = vs + tv;
          if (v1 < nb[std::size_t(sdst)]) {
            ns2[std::size_t(sdst)] = nb[std::size_t(sdst)];
            ps1[sdst] = ps0[sdst];
            pk1[sdst] = pk0[sdst];
            nb[std::size_t(sdst)] = v1;
            ps0[sdst] = std::int16_t(s);
            pk0[sdst] = 1;
          } else if (v1 < ns2[std::size_t(sdst)]) {
            ns2[std::size_t(sdst)] = v1;
            ps1[sdst] = std::int16_t(s);
            pk1[sdst] = 1;
          }
        };

        relax(sp, tval);
        int scur = sp;
        for (int g = 1; g < (1 << nfree); ++g) {
          const int w = freebits[std::countr_zero(unsigned(g))];
          tval += 2.0 * jc[std::size_t(w)] * spin_of(s, w) * spin_of(scur, w);
          scur ^= 1 << w;
          relax(scur, tval);
        }
      }
      for (int s = 0; s < ns; ++s) {
        if (nb[std::size_t(s)] != inf) nb[std::size_t(s)] += tb.intra[std::size_t(dst)][std::size_t(s)];
        if (ns2[std::size_t(s)] != inf) ns2[std::size_t(s)] += tb.intra[std::size_t(dst)][std::size_t(s)];
      }
      b0.swap(nb);
      b1.swap(ns2);
    }
  }

  // states along the path ending at (last column, state, slot)
  std::vector<int> backtrack(int state, int slot) const {
    std::vector<int> states(std::size_t(tb.Lt), 0);
    int s = state, k = slot;
    for (int t = tb.Lt - 1; t >= 1; --t) {
      states[std::size_t(t)] = s;
      const int idx = int(std::size_t(t) * std::size_t(tb.ns) + std::size_t(s));
      const int psn = ps[std::size_t(k)][std::size_t(idx)];
      const int pkn = pk[std::size_t(k)][std::size_t(idx)];
      s = psn;
      k = pkn;
    }
    states[0] = s;
    return states;
  }
};

struct Candidate {
  double value = inf;
  std::vector<int> states;
};

void offer(Candidate& c1, Candidate& c2, double v, std::vector<int>&& states) {
  if (v < c1.value) {
    c2 = std::move(c1);
    c1.value = v;
    c1.states = std::move(states);
  } else if (v < c2.value) {
    c2.value = v;
    c2.states = std::move(states);
  }
}

SpinConfig config_from_states(const EffectiveProblem& p, const DpTables& tb,
                              const std::vector<int>& states) {
  SpinConfig cfg(*p.lat);
  for (int t = 0; t < tb.Lt; ++t)
    for (int w = 0; w < tb.W; ++w)
      cfg.s[std::size_t(tb.vert[std::size_t(t) * std::size_t(tb.W) + std::size_t(w)])] =
          std::int8_t(spin_of(states[std::size_t(t)], w) > 0 ? 1 : -1);
  return cfg;
}

}  // namespace

bool column_dp_feasible(const EffectiveProblem& p, const SolveConstraint& c) {
  (void)c;
  return choose_axes(*p.lat).ok;
}

GroundStateResult solve_column_dp(const EffectiveProblem& p,
                                  const SolveConstraint& c) {
  const AxisChoice ax = choose_axes(*p.lat);
  if (!ax.ok) throw std::invalid_argument("column_dp infeasible for this lattice");
  const DpTables tb = build_tables(p, c, ax);
  Sweep sweep(tb);

  Candidate c1, c2;
  const int ns = tb.ns;

  if (!tb.ta_periodic) {
    sweep.run(-1);
    // two lowest over the last column
    for (int s = 0; s < ns; ++s) {
      if (sweep.b0[std::size_t(s)] < c1.value || sweep.b0[std::size_t(s)] < c2.value)
        offer(c1, c2, sweep.b0[std::size_t(s)], sweep.backtrack(s, 0));
      if (sweep.b1[std::size_t(s)] < c2.value)
        offer(c1, c2, sweep.b1[std::size_t(s)], sweep.backtrack(s, 1));
    }
  } else {
    for (int s0 = 0; s0 < ns; ++s0) {
      if (!tb.allowed[0][std::size_t(s0)]) continue;
      sweep.run(s0);
      const bool hc = tb.hpair == tb.Lt - 1;
      for (int s = 0; s < ns; ++s) {
        if (sweep.b0[std::size_t(s)] == inf) continue;
        if (hc) {
          const double prod = spin_of(s, tb.hrow) * spin_of(s0, tb.hrow);
          if (prod != double(tb.hval)) continue;
        }
        double close = 0.0;
        for (int w = 0; w < tb.W; ++w)
          close -= tb.jwrap[std::size_t(w)] * spin_of(s, w) * spin_of(s0, w);
        const double v0 = sweep.b0[std::size_t(s)] + close;
        if (v0 < c2.value) offer(c1, c2, v0, sweep.backtrack(s, 0));
        const double v1 = sweep.b1[std::size_t(s)] + close;
        if (v1 != inf && v1 < c2.value) offer(c1, c2, v1, sweep.backtrack(s, 1));
      }
    }
  }

  if (c1.value == inf)
    throw std::runtime_error("column_dp found no admissible configuration");

  GroundStateResult res;
  res.config = config_from_states(p, tb, c1.states);
  res.energy = effective_energy(p, res.config);
  if (c2.value != inf) {
    SpinConfig snd = config_from_states(p, tb, c2.states);
    res.gap = effective_energy(p, snd) - res.energy;
  } else {
    res.gap = inf;
  }
  res.degenerate = res.gap < degeneracy_gap_tol;
  res.solver = "column_dp";
  normalize_config(p, c, res.config);
  return res;
}

}  // namespace ea::detail
