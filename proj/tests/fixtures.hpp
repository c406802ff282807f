#pragma once

// Shared hand-worked instances.

#include <vector>

#include "ealab/disorder.hpp"
#include "ealab/lattice.hpp"

namespace fixtures {

// 2x2 open square with a frustrated cycle; worked out by hand:
//   J(A-B) = 1.0, J(A-C) = 0.5, J(B-D) = 2.0, J(C-D) = -1.5
// sign product negative, cheapest violation is the 0.5 edge:
//   E_gs = -4 (violate A-C), next level -3 (violate A-B), gap 1.
// Forcing the A-C edge value: E_plus = -3, E_minus = -4, so its
// flexibility is 1 and its crossing value is 1.0; the excitation pair
// differs exactly on edges {A-B, A-C}, the flipped cluster is {A}.
struct FrustratedSquare {
  ea::BoxLattice lat = ea::BoxLattice::build(2, 2, ea::Topology::open);
  ea::CouplingField j{lat};
  int A, B, C, D;
  int eAB, eAC, eBD, eCD;

  FrustratedSquare() {
    A = lat.vertex_at(std::vector<int>{0, 0});
    B = lat.vertex_at(std::vector<int>{1, 0});
    C = lat.vertex_at(std::vector<int>{0, 1});
    D = lat.vertex_at(std::vector<int>{1, 1});
    eAB = lat.edge_index(A, 0);
    eAC = lat.edge_index(A, 1);
    eBD = lat.edge_index(B, 1);
    eCD = lat.edge_index(C, 0);
    j[eAB] = 1.0;
    j[eAC] = 0.5;
    j[eBD] = 2.0;
    j[eCD] = -1.5;
  }
};

}  // namespace fixtures
