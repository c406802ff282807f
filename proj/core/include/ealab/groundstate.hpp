#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ealab/disorder.hpp"
#include "ealab/lattice.hpp"

// Exact zero-temperature ground states.
//
// Two exact solvers:
//  - enumeration: Gray-code walk over free spins with O(coordination)
//    incremental energy updates; <= 28 free spins.
//  - column_dp: transfer DP over cross-section configurations for d = 1, 2;
//    cross-section width <= 12. Open transfer axis is linear; a periodic
//    transfer axis loops over first-column states.
// Both support pinned spins and a single fixed-edge-value constraint, track
// the two lowest energy levels for the degeneracy gap, and recompute the
// returned energies through the canonical edge-order sum so cross-solver
// results are directly comparable.

namespace ea {

enum class BcKind : std::uint8_t { free_bc, periodic_bc, antiperiodic_bc, fixed_bc };

const char* to_string(BcKind k);

struct BoundaryCondition {
  BcKind kind = BcKind::free_bc;
  int ap_axis = 0;  // axis whose wrap couplings flip sign
  // fixed bc: one spin and one coupling per lattice layer edge, giving the
  // boundary term  -sum_layer J_layer * xi * sigma_vertex
  std::vector<std::int8_t> layer_spins;
  std::vector<double> layer_couplings;

  static BoundaryCondition free() { return {}; }
  static BoundaryCondition periodic() { return {BcKind::periodic_bc, 0, {}, {}}; }
  static BoundaryCondition antiperiodic(int axis = 0) {
    return {BcKind::antiperiodic_bc, axis, {}, {}};
  }
  static BoundaryCondition fixed(std::vector<std::int8_t> spins,
                                 std::vector<double> couplings) {
    return {BcKind::fixed_bc, 0, std::move(spins), std::move(couplings)};
  }

  // no boundary or sign terms, so H(-sigma) = H(sigma)
  bool flip_symmetric() const { return kind != BcKind::fixed_bc; }
  std::string label() const;
};

void validate_bc(const BoxLattice& lat, const BoundaryCondition& bc);

// random fixed bc: layer couplings are standard normals (part of the
// disorder), layer spins fair coins drawn from spin_seed (independent of it)
BoundaryCondition sample_fixed_bc(const BoxLattice& lat, std::uint64_t coupling_seed,
                                  std::uint64_t spin_seed);

// full Hamiltonian: interior edge terms, antiperiodic sign flips, fixed-bc
// boundary terms
double energy(const BoxLattice& lat, const CouplingField& j, const SpinConfig& s,
              const BoundaryCondition& bc);

// interior edge sum only, raw couplings; the quantity replica differences use
double interior_energy(const BoxLattice& lat, const CouplingField& j,
                       const SpinConfig& s);

// fraction of interior edges where the two configs carry the same edge value
double edge_overlap(const BoxLattice& lat, const SpinConfig& a, const SpinConfig& b);

enum class SolveMethod : std::uint8_t { automatic, enumeration, column_dp };
const char* to_string(SolveMethod m);

struct SolveConstraint {
  // force sigma_x sigma_y = value on one edge
  struct EdgeValue {
    std::int32_t edge = -1;
    std::int8_t value = 1;
  };
  std::optional<EdgeValue> edge;
  std::vector<std::pair<std::int32_t, std::int8_t>> pins;  // (vertex, spin)

  bool empty() const { return !edge && pins.empty(); }
};

struct GroundStateResult {
  SpinConfig config;
  double energy = 0.0;
  double gap = 0.0;        // to the second-lowest level (mod global flip when
                           // the problem is flip symmetric)
  bool degenerate = false; // gap < degeneracy_gap_tol
  std::string solver;
};

inline constexpr double degeneracy_gap_tol = 1e-12;

GroundStateResult solve(const BoxLattice& lat, const CouplingField& j,
                        const BoundaryCondition& bc,
                        SolveMethod method = SolveMethod::automatic);

GroundStateResult constrained_solve(const BoxLattice& lat, const CouplingField& j,
                                    const BoundaryCondition& bc,
                                    const SolveConstraint& constraint,
                                    SolveMethod method = SolveMethod::automatic);

// local ground-state criterion: for every connected vertex subset B with
// |B| <= max_size, the signed coupling sum over the boundary of B is >= 0
struct CriterionReport {
  bool pass = true;
  double worst_value = 0.0;
  std::vector<int> worst_subset;
  std::int64_t subsets_checked = 0;
};

CriterionReport check_gs_criterion(const BoxLattice& lat, const CouplingField& j,
                                   const SpinConfig& s, const BoundaryCondition& bc,
                                   int max_size);

}
