#pragma once

#include <cstdint>
#include <vector>

#include "ealab/groundstate.hpp"

// Internal solver plumbing. A BoundaryCondition is folded into an
// EffectiveProblem once: antiperiodic wrap signs into the couplings, fixed
// boundary terms into a per-vertex field. Solvers only ever see the
// effective problem plus an optional constraint.

namespace ea::detail {

struct EffectiveProblem {
  const BoxLattice* lat = nullptr;
  std::vector<double> jeff;   // per edge, boundary signs folded in
  std::vector<double> field;  // per vertex; empty when no boundary field
  bool flip_symmetric = true;
};

EffectiveProblem make_effective(const BoxLattice& lat, const CouplingField& j,
                                const BoundaryCondition& bc);

// canonical edge-order sum; all reported energies go through this
double effective_energy(const EffectiveProblem& p, const SpinConfig& s);

bool enumeration_feasible(const EffectiveProblem& p, const SolveConstraint& c);
bool column_dp_feasible(const EffectiveProblem& p, const SolveConstraint& c);

GroundStateResult solve_enumeration(const EffectiveProblem& p,
                                    const SolveConstraint& c);
GroundStateResult solve_column_dp(const EffectiveProblem& p,
                                  const SolveConstraint& c);

// normalize a flip-symmetric result so the lowest-index spin is +1 unless a
// pin already fixed the gauge
void normalize_config(const EffectiveProblem& p, const SolveConstraint& c,
                      SpinConfig& s);

}
