#include "ealab/groundstate.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ealab/rng.hpp"
#include "solver_detail.hpp"

namespace ea {

const char* to_string(BcKind k) {
  switch (k) {
    case BcKind::free_bc: return "free";
    case BcKind::periodic_bc: return "periodic";
    case BcKind::antiperiodic_bc: return "antiperiodic";
    case BcKind::fixed_bc: return "fixed";
  }
  return "?";
}

std::string BoundaryCondition::label() const {
  std::string s = to_string(kind);
  if (kind == BcKind::antiperiodic_bc) s += "(axis" + std::to_string(ap_axis) + ")";
  return s;
}

void validate_bc(const BoxLattice& lat, const BoundaryCondition& bc) {
  switch (bc.kind) {
    case BcKind::free_bc:
      break;
    case BcKind::periodic_bc:
      if (!lat.fully_periodic())
        throw std::invalid_argument("periodic bc needs a fully periodic lattice");
      break;
    case BcKind::antiperiodic_bc:
      if (bc.ap_axis < 0 || bc.ap_axis >= lat.dim())
        throw std::invalid_argument("antiperiodic axis out of range");
      if (lat.topology(bc.ap_axis) != Topology::periodic)
        throw std::invalid_argument("antiperiodic bc needs a periodic axis");
      break;
    case BcKind::fixed_bc:
      if (lat.layer_edges().empty())
        throw std::invalid_argument("fixed bc needs at least one open axis");
      if (bc.layer_spins.size() != lat.layer_edges().size() ||
          bc.layer_couplings.size() != lat.layer_edges().size())
        throw std::invalid_argument("fixed bc layer size mismatch");
      break;
  }
}

BoundaryCondition sample_fixed_bc(const BoxLattice& lat, std::uint64_t coupling_seed,
                                  std::uint64_t spin_seed) {
  const auto n = lat.layer_edges().size();
  std::vector<std::int8_t> spins(n);
  std::vector<double> coup(n);
  for (std::size_t i = 0; i < n; ++i) {
    spins[i] = std::int8_t(rng::coin(spin_seed, rng::stream_layer_spins_a, i));
    coup[i] = rng::normal(coupling_seed, rng::stream_layer_couplings, i);
  }
  return BoundaryCondition::fixed(std::move(spins), std::move(coup));
}

namespace detail {

EffectiveProblem make_effective(const BoxLattice& lat, const CouplingField& j,
                                const BoundaryCondition& bc) {
  if (j.lat != &lat) throw std::invalid_argument("coupling field lattice mismatch");
  if (std::int64_t(j.j.size()) != lat.edge_count())
    throw std::invalid_argument("coupling field size mismatch");
  validate_bc(lat, bc);

  EffectiveProblem p;
  p.lat = &lat;
  p.jeff = j.j;
  p.flip_symmetric = bc.flip_symmetric();

  if (bc.kind == BcKind::antiperiodic_bc) {
    const auto& es = lat.edges();
    for (std::size_t e = 0; e < es.size(); ++e)
      if (es[e].wrap && es[e].axis == bc.ap_axis) p.jeff[e] = -p.jeff[e];
  }
  if (bc.kind == BcKind::fixed_bc) {
    p.field.assign(std::size_t(lat.vertex_count()), 0.0);
    const auto& les = lat.layer_edges();
    for (std::size_t i = 0; i < les.size(); ++i)
      p.field[std::size_t(les[i].vertex)] +=
          bc.layer_couplings[i] * double(bc.layer_spins[i]);
  }
  return p;
}

double effective_energy(const EffectiveProblem& p, const SpinConfig& s) {
  const auto& es = p.lat->edges();
  double e = 0.0;
  for (std::size_t i = 0; i < es.size(); ++i)
    e -= p.jeff[i] * double(s.s[std::size_t(es[i].a)] * s.s[std::size_t(es[i].b)]);
  if (!p.field.empty())
    for (std::size_t v = 0; v < p.field.size(); ++v)
      e -= p.field[v] * double(s.s[v]);
  return e;
}

void normalize_config(const EffectiveProblem& p, const SolveConstraint& c,
                      SpinConfig& s) {
  if (!p.flip_symmetric || !c.pins.empty()) return;
  if (s.s[0] < 0) s.flip_all();
}

}  // namespace detail

double energy(const BoxLattice& lat, const CouplingField& j, const SpinConfig& s,
              const BoundaryCondition& bc) {
  if (std::int64_t(s.s.size()) != lat.vertex_count())
    throw std::invalid_argument("config size mismatch");
  const auto p = detail::make_effective(lat, j, bc);
  return detail::effective_energy(p, s);
}

double interior_energy(const BoxLattice& lat, const CouplingField& j,
                       const SpinConfig& s) {
  const auto& es = lat.edges();
  double e = 0.0;
  for (std::size_t i = 0; i < es.size(); ++i)
    e -= j.j[i] * double(s.s[std::size_t(es[i].a)] * s.s[std::size_t(es[i].b)]);
  return e;
}

double edge_overlap(const BoxLattice& lat, const SpinConfig& a, const SpinConfig& b) {
  if (a.s.size() != b.s.size() || std::int64_t(a.s.size()) != lat.vertex_count())
    throw std::invalid_argument("config size mismatch");
  std::int64_t sum = 0;
  for (const Edge& e : lat.edges())
    sum += std::int64_t(a.edge_value(e)) * std::int64_t(b.edge_value(e));
  return double(sum) / double(lat.edge_count());
}

const char* to_string(SolveMethod m) {
  switch (m) {
    case SolveMethod::automatic: return "auto";
    case SolveMethod::enumeration: return "enumeration";
    case SolveMethod::column_dp: return "column_dp";
  }
  return "?";
}

namespace {

void validate_constraint(const BoxLattice& lat, const SolveConstraint& c) {
  if (c.edge) {
    if (c.edge->edge < 0 || c.edge->edge >= lat.edge_count())
      throw std::invalid_argument("constraint edge out of range");
    if (c.edge->value != 1 && c.edge->value != -1)
      throw std::invalid_argument("constraint edge value must be +-1");
  }
  std::vector<std::int8_t> seen(std::size_t(lat.vertex_count()), 0);
  for (auto [v, sp] : c.pins) {
    if (v < 0 || v >= lat.vertex_count())
      throw std::invalid_argument("pinned vertex out of range");
    if (sp != 1 && sp != -1)
      throw std::invalid_argument("pinned spin must be +-1");
    if (seen[std::size_t(v)]) throw std::invalid_argument("vertex pinned twice");
    seen[std::size_t(v)] = 1;
  }
}

GroundStateResult dispatch(const detail::EffectiveProblem& p,
                           const SolveConstraint& c, SolveMethod method) {
  switch (method) {
    case SolveMethod::enumeration:
      if (!detail::enumeration_feasible(p, c))
        throw std::invalid_argument("enumeration infeasible: > 28 free spins");
      return detail::solve_enumeration(p, c);
    case SolveMethod::column_dp:
      if (!detail::column_dp_feasible(p, c))
        throw std::invalid_argument("column_dp infeasible for this lattice");
      return detail::solve_column_dp(p, c);
    case SolveMethod::automatic:
      if (detail::column_dp_feasible(p, c)) return detail::solve_column_dp(p, c);
      if (detail::enumeration_feasible(p, c)) return detail::solve_enumeration(p, c);
      throw std::invalid_argument("no exact solver can handle this instance");
  }
  throw std::logic_error("bad solve method");
}

}  // namespace

GroundStateResult solve(const BoxLattice& lat, const CouplingField& j,
                        const BoundaryCondition& bc, SolveMethod method) {
  return constrained_solve(lat, j, bc, SolveConstraint{}, method);
}

GroundStateResult constrained_solve(const BoxLattice& lat, const CouplingField& j,
                                    const BoundaryCondition& bc,
                                    const SolveConstraint& constraint,
                                    SolveMethod method) {
  validate_constraint(lat, constraint);
  const auto p = detail::make_effective(lat, j, bc);
  return dispatch(p, constraint, method);
}

// --- local ground-state criterion ----------------------------------------

namespace {

// enumerate connected vertex subsets of size <= k whose minimum vertex is
// the root, extending only to vertices above the root and not yet adjacent
struct SubsetScan {
  const BoxLattice& lat;
  const detail::EffectiveProblem& p;
  const SpinConfig& s;
  int max_size;
  std::vector<std::int8_t> in_subset;
  std::vector<std::int8_t> blocked;  // in subset or already in some ext set
  std::vector<int> subset;
  CriterionReport report;

  SubsetScan(const BoxLattice& l, const detail::EffectiveProblem& pp,
             const SpinConfig& cfg, int k)
      : lat(l), p(pp), s(cfg), max_size(k),
        in_subset(std::size_t(l.vertex_count()), 0),
        blocked(std::size_t(l.vertex_count()), 0) {}

  double boundary_sum() const {
    double val = 0.0;
    for (int v : subset) {
      for (auto e : lat.incident_edges(v)) {
        const int w = lat.edge_other(e, v);
        if (in_subset[std::size_t(w)]) continue;
        val += p.jeff[std::size_t(e)] * double(s.s[std::size_t(v)] * s.s[std::size_t(w)]);
      }
      if (!p.field.empty())
        val += p.field[std::size_t(v)] * double(s.s[std::size_t(v)]);
    }
    return val;
  }

  void emit() {
    ++report.subsets_checked;
    const double val = boundary_sum();
    if (val < report.worst_value || report.worst_subset.empty()) {
      report.worst_value = val;
      report.worst_subset = subset;
    }
    if (val < -1e-12) report.pass = false;
  }

  void extend(int root, std::vector<int>& ext) {
    emit();
    if (int(subset.size()) == max_size) return;
    // each candidate is consumed once; children may only add fresh ones
    std::vector<int> local = ext;
    while (!local.empty()) {
      const int w = local.back();
      local.pop_back();
      std::vector<int> added;
      subset.push_back(w);
      in_subset[std::size_t(w)] = 1;
      std::vector<int> next = local;
      for (auto e : lat.incident_edges(w)) {
        const int u = lat.edge_other(e, w);
        if (u <= root || blocked[std::size_t(u)]) continue;
        blocked[std::size_t(u)] = 1;
        added.push_back(u);
        next.push_back(u);
      }
      extend(root, next);
      subset.pop_back();
      in_subset[std::size_t(w)] = 0;
      for (int u : added) blocked[std::size_t(u)] = 0;
    }
  }

  void run() {
    const int n = int(lat.vertex_count());
    for (int root = 0; root < n; ++root) {
      subset.assign(1, root);
      in_subset[std::size_t(root)] = 1;
      std::fill(blocked.begin(), blocked.end(), 0);
      blocked[std::size_t(root)] = 1;
      std::vector<int> ext;
      for (auto e : lat.incident_edges(root)) {
        const int u = lat.edge_other(e, root);
        if (u > root && !blocked[std::size_t(u)]) {
          blocked[std::size_t(u)] = 1;
          ext.push_back(u);
        }
      }
      extend(root, ext);
      in_subset[std::size_t(root)] = 0;
    }
  }
};

}  // namespace

CriterionReport check_gs_criterion(const BoxLattice& lat, const CouplingField& j,
                                   const SpinConfig& s, const BoundaryCondition& bc,
                                   int max_size) {
  if (max_size < 1 || max_size > 6)
    throw std::invalid_argument("subset size must be 1..6");
  if (std::int64_t(s.s.size()) != lat.vertex_count())
    throw std::invalid_argument("config size mismatch");
  const auto p = detail::make_effective(lat, j, bc);
  SubsetScan scan(lat, p, s, max_size);
  scan.run();
  return scan.report;
}

}
