#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ealab/disorder.hpp"
#include "ealab/groundstate.hpp"

// Edge excitations. Forcing one edge to each of its two satisfaction values
// and minimizing gives an excitation pair; the energy split is the edge's
// flexibility, and the coupling value where the split closes is its crossing
// value. The edges whose values differ between the two members form the
// critical droplet boundary. Windowed energy vectors compress the
// environment's response to a small edge window into one number per window
// edge-value pattern, from which configuration order and the interpolation
// times where that order changes are computed.

namespace ea {

struct ExcitationPair {
  std::int32_t edge = -1;
  SpinConfig plus, minus;          // edge value forced to +1 / -1
  double e_plus = 0.0, e_minus = 0.0;  // exact constrained minima
  bool degenerate = false;         // a constrained solve returned a tie
};

ExcitationPair excitation_pair(const BoxLattice& lat, const CouplingField& j,
                               const BoundaryCondition& bc, int edge,
                               SolveMethod method = SolveMethod::automatic);

struct FlexibilityRecord {
  std::int32_t edge = -1;
  double f = 0.0;        // |e_plus - e_minus|
  double c = 0.0;        // crossing value: the edge coupling where f hits 0
  int ground_sign = 0;   // satisfied sign of the edge in the ground state
  bool degenerate = false;
};

// energy split of the excitation pair plus the crossing value from the
// zeroed-coupling pair; f = 2|J_b - c| holds to rounding
FlexibilityRecord flexibility(const BoxLattice& lat, const CouplingField& j,
                              const BoundaryCondition& bc, int edge,
                              SolveMethod method = SolveMethod::automatic);

struct DropletReport {
  std::int32_t edge = -1;
  FlexibilityRecord flex;
  std::vector<std::int32_t> boundary;  // edges whose value differs in the pair
  Region region;  // flipped vertex cluster containing an endpoint of `edge`
  bool region_is_whole_disagreement = true;  // disagreement had one component
};

DropletReport critical_droplet(const BoxLattice& lat, const CouplingField& j,
                               const BoundaryCondition& bc, int edge,
                               SolveMethod method = SolveMethod::automatic);

// window vertex set spanned by a list of edges
Region window_of_edges(const BoxLattice& lat, std::span<const std::int32_t> edges);

struct WindowEnergyVector {
  Region window;
  std::vector<std::int32_t> window_edges;  // induced edges, ascending
  double bound = 0.0;  // 2 sum |J_e| over couplings leaving the window

  struct Entry {
    std::uint32_t edge_bits = 0;  // bit i set = window_edges[i] at value -1
    double outside = 0.0;   // minimal environment energy over spin lifts
    std::string lift_bits;  // winning window assignment, '0' = +1, vertex asc
  };
  std::vector<Entry> entries;  // achievable patterns, edge_bits ascending;
                               // entries[0] is the all-plus reference

  int edge_value(int entry, int i) const {
    return entries[std::size_t(entry)].edge_bits >> i & 1 ? -1 : 1;
  }
  // environment energy difference between two patterns
  double e(int i, int j) const {
    return entries[std::size_t(i)].outside - entries[std::size_t(j)].outside;
  }
  int find(std::uint32_t edge_bits) const;  // entry index, -1 if absent
};

// one constrained solve per window spin lift; at most 4 window edges
WindowEnergyVector window_energy_vector(const BoxLattice& lat,
                                        const CouplingField& j,
                                        const BoundaryCondition& bc,
                                        const Region& window,
                                        SolveMethod method = SolveMethod::automatic);

// entry indices sorted by total energy under window couplings jw (parallel
// to window_edges); throws std::domain_error when two patterns tie within
// degeneracy_gap_tol
std::vector<int> order_configs(const WindowEnergyVector& wv,
                               std::span<const double> jw);

// roots of a e^(-t) + b sqrt(1 - e^(-2t)) = c on [0, t_max]; at most two,
// ascending. The curve between two interpolated quantities has this shape.
std::vector<double> interpolation_crossings(double a, double b, double c,
                                            double t_max);

// times in [0, t_max] where some pattern pair exchanges order along the
// path, merged and sorted; each pair contributes at most two times
std::vector<double> crossing_times(const WindowEnergyVector& wv,
                                   const InterpolationPath& path,
                                   double t_max);

struct StabilityReport {
  std::int32_t edge = -1;
  std::vector<double> t;          // grid
  std::vector<double> f;          // flexibility along the path
  std::vector<int> sign;          // satisfied edge sign along the path
  std::vector<int> droplet_size;  // boundary size along the path
  double slack = 0.0;             // grid-resolution allowance on f
  // grid indices i where sign[i] != sign[i+1] while both f values clear the
  // slack: the satisfied sign moved without the split closing
  std::vector<int> violations;
  bool pass = true;
};

StabilityReport stability_scan(const BoxLattice& lat, const CouplingField& j,
                               const CouplingField& jprime,
                               const BoundaryCondition& bc, int edge,
                               std::span<const double> t_grid,
                               SolveMethod method = SolveMethod::automatic);

struct DriftReport {
  std::int32_t edge = -1;
  double t = 0.0;
  double lhs = 0.0;  // |f(t) - f(0)|
  double rhs = 0.0;  // 6 sqrt(t) * max coupling magnitude * max droplet size
  double max_coupling = 0.0;
  int max_droplet = 0;
  int grid_points = 0;
  bool pass = true;  // lhs <= rhs + 1e-9
};

// flexibility drift over [0, t], t <= 1; droplet sizes sampled on a grid of
// at least 100 points
DriftReport drift_check(const BoxLattice& lat, const CouplingField& j,
                        const CouplingField& jprime,
                        const BoundaryCondition& bc, int edge, double t,
                        int grid_points = 101,
                        SolveMethod method = SolveMethod::automatic);

}
