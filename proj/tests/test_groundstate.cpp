#include <cmath>
#include <vector>

#include "doctest.h"
#include "ealab/disorder.hpp"
#include "ealab/groundstate.hpp"
#include "ealab/rng.hpp"
#include "fixtures.hpp"
#include "oracle.hpp"

using namespace ea;
using fixtures::FrustratedSquare;

TEST_CASE("groundstate: satisfiable open chain reaches -sum |J|") {
  const auto lat = BoxLattice::build(1, 4, Topology::open);
  CouplingField j(lat);
  j[0] = 1.0;
  j[1] = -0.5;
  j[2] = 2.0;
  for (const auto method : {SolveMethod::enumeration, SolveMethod::column_dp}) {
    const auto g = solve(lat, j, BoundaryCondition::free(), method);
    CHECK(g.energy == doctest::Approx(-3.5).epsilon(1e-14));
    CHECK_FALSE(g.degenerate);
    // every edge satisfied: sign of the edge value matches sign of J
    for (int e = 0; e < lat.edge_count(); ++e)
      CHECK(g.config.edge_value(e) == (j[e] > 0 ? 1 : -1));
  }
}

TEST_CASE("groundstate: frustrated square energies and gap") {
  FrustratedSquare fs;
  for (const auto method : {SolveMethod::enumeration, SolveMethod::column_dp}) {
    const auto g = solve(fs.lat, fs.j, BoundaryCondition::free(), method);
    CHECK(g.energy == doctest::Approx(-4.0).epsilon(1e-14));
    CHECK(g.gap == doctest::Approx(1.0).epsilon(1e-12));
    CHECK_FALSE(g.degenerate);
    // only the 0.5 edge is violated
    CHECK(g.config.edge_value(fs.eAC) == -1);
    CHECK(g.config.edge_value(fs.eAB) == 1);
    CHECK(g.config.edge_value(fs.eBD) == 1);
    CHECK(g.config.edge_value(fs.eCD) == -1);
  }
}

TEST_CASE("groundstate: energy with each boundary condition, hand checked") {
  const auto ring = BoxLattice::build(1, 3, Topology::periodic);
  CouplingField j(ring);
  j[0] = 1.0;
  j[1] = 1.0;
  j[2] = 1.0;
  SpinConfig up(ring);  // all +1
  CHECK(energy(ring, j, up, BoundaryCondition::periodic()) == doctest::Approx(-3.0));
  // antiperiodic flips the wrap coupling sign
  CHECK(energy(ring, j, up, BoundaryCondition::antiperiodic(0)) == doctest::Approx(-1.0));
  CHECK(interior_energy(ring, j, up) == doctest::Approx(-3.0));

  const auto chain = BoxLattice::build(1, 2, Topology::open);
  CouplingField cj(chain);
  cj[0] = 2.0;
  SpinConfig cs(chain);
  cs.s = {1, -1};
  BoundaryCondition fixed = BoundaryCondition::fixed({1, -1}, {0.5, 3.0});
  // interior: -2 * (1 * -1) = 2; boundary: -(0.5 * 1 * 1) - (3 * -1 * -1) = -3.5
  CHECK(interior_energy(chain, cj, cs) == doctest::Approx(2.0));
  CHECK(energy(chain, cj, cs, fixed) == doctest::Approx(-1.5));
}

TEST_CASE("groundstate: solvers match brute force on random instances") {
  struct Case {
    int d, L;
    Topology topo;
  };
  const Case cases[] = {
      {1, 8, Topology::periodic},
      {2, 3, Topology::open},
      {2, 3, Topology::periodic},
      {2, 4, Topology::open},
  };
  for (const auto& c : cases) {
    const auto lat = BoxLattice::build(c.d, c.L, c.topo);
    for (int r = 0; r < 10; ++r) {
      const auto j = sample_couplings(lat, rng::derive_seed(11, rng::stream_couplings, std::uint64_t(r)));
      const auto ref = oracle::brute_force(lat, j, BoundaryCondition::free());
      for (const auto method : {SolveMethod::enumeration, SolveMethod::column_dp}) {
        const auto g = solve(lat, j, BoundaryCondition::free(), method);
        CHECK(g.energy == doctest::Approx(ref.energy).epsilon(1e-13));
        CHECK(std::abs(g.gap - (ref.second - ref.energy)) < 1e-10);
        if (!ref.degenerate) CHECK(equal_mod_flip(g.config, ref.config));
      }
    }
  }
}

TEST_CASE("groundstate: brute force agreement under fixed boundaries") {
  const std::vector<int> ext = {3, 3};
  const std::vector<Topology> topo = {Topology::open, Topology::open};
  const auto lat = BoxLattice::build(ext, topo);
  for (int r = 0; r < 5; ++r) {
    const auto j = sample_couplings(lat, std::uint64_t(100 + r));
    const auto bc = sample_fixed_bc(lat, std::uint64_t(200 + r), std::uint64_t(300 + r));
    const auto ref = oracle::brute_force(lat, j, bc);
    for (const auto method : {SolveMethod::enumeration, SolveMethod::column_dp}) {
      const auto g = solve(lat, j, bc, method);
      CHECK(g.energy == doctest::Approx(ref.energy).epsilon(1e-13));
      CHECK(g.config == ref.config);  // no flip freedom with fixed boundaries
    }
  }
}

TEST_CASE("groundstate: constraints agree with brute force") {
  const auto lat = BoxLattice::build(2, 3, Topology::periodic);
  const auto j = sample_couplings(lat, 55);
  for (int e : {0, 5, 11}) {
    for (int v : {1, -1}) {
      SolveConstraint con;
      con.edge = SolveConstraint::EdgeValue{e, std::int8_t(v)};
      const auto ref = oracle::brute_force(lat, j, BoundaryCondition::free(), con);
      for (const auto method : {SolveMethod::enumeration, SolveMethod::column_dp}) {
        const auto g = constrained_solve(lat, j, BoundaryCondition::free(), con, method);
        CHECK(g.energy == doctest::Approx(ref.energy).epsilon(1e-13));
        CHECK(g.config.edge_value(e) == v);
      }
    }
  }

  SolveConstraint pins;
  pins.pins = {{0, std::int8_t(1)}, {4, std::int8_t(-1)}};
  const auto ref = oracle::brute_force(lat, j, BoundaryCondition::free(), pins);
  for (const auto method : {SolveMethod::enumeration, SolveMethod::column_dp}) {
    const auto g = constrained_solve(lat, j, BoundaryCondition::free(), pins, method);
    CHECK(g.energy == doctest::Approx(ref.energy).epsilon(1e-13));
    CHECK(g.config.s[0] == 1);
    CHECK(g.config.s[4] == -1);
  }
}

TEST_CASE("groundstate: exact ties are flagged degenerate") {
  // frustrated ring with all |J| = 1: four ground states mod flip
  const auto ring = BoxLattice::build(1, 4, Topology::periodic);
  CouplingField j(ring);
  j[0] = 1.0;
  j[1] = 1.0;
  j[2] = 1.0;
  j[3] = -1.0;
  for (const auto method : {SolveMethod::enumeration, SolveMethod::column_dp}) {
    const auto g = solve(ring, j, BoundaryCondition::periodic(), method);
    CHECK(g.energy == doctest::Approx(-2.0));
    CHECK(g.degenerate);
    CHECK(g.gap < degeneracy_gap_tol);
  }
}

TEST_CASE("groundstate: edge overlap counts interior edge agreements") {
  const auto lat = BoxLattice::build(2, 3, Topology::open);
  SpinConfig a(lat);
  SpinConfig b(lat);
  CHECK(edge_overlap(lat, a, b) == 1.0);
  b.s[std::size_t(lat.vertex_at(std::vector<int>{1, 1}))] = -1;  // degree-4 vertex
  CHECK(edge_overlap(lat, a, b) == doctest::Approx((12.0 - 2.0 * 4.0) / 12.0));
  b.flip_all();  // overlap is flip invariant
  CHECK(edge_overlap(lat, a, b) == doctest::Approx((12.0 - 2.0 * 4.0) / 12.0));
}

TEST_CASE("groundstate: local criterion accepts ground states, rejects others") {
  const auto lat = BoxLattice::build(2, 4, Topology::periodic);
  for (int r = 0; r < 5; ++r) {
    const auto j = sample_couplings(lat, std::uint64_t(400 + r));
    const auto g = solve(lat, j, BoundaryCondition::periodic());
    if (g.degenerate) continue;
    const auto ok = check_gs_criterion(lat, j, g.config, BoundaryCondition::periodic(), 3);
    CHECK(ok.pass);
    CHECK(ok.worst_value >= -1e-12);
    CHECK(ok.subsets_checked > 0);

    // flipping one spin of a unique ground state must break a size-1 subset
    SpinConfig bad = g.config;
    bad.s[3] = std::int8_t(-bad.s[3]);
    const auto no = check_gs_criterion(lat, j, bad, BoundaryCondition::periodic(), 1);
    CHECK_FALSE(no.pass);
    CHECK(no.worst_value < 0.0);
  }
}

TEST_CASE("groundstate: fixed boundary sampling is shaped and deterministic") {
  const auto lat = BoxLattice::build(2, 3, Topology::open);
  const auto bc = sample_fixed_bc(lat, 10, 20);
  CHECK(bc.kind == BcKind::fixed_bc);
  CHECK(bc.layer_spins.size() == lat.layer_edges().size());
  CHECK(bc.layer_couplings.size() == lat.layer_edges().size());
  for (auto s : bc.layer_spins) CHECK((s == 1 || s == -1));
  const auto again = sample_fixed_bc(lat, 10, 20);
  CHECK(bc.layer_spins == again.layer_spins);
  CHECK(bc.layer_couplings == again.layer_couplings);
  // spins move with the spin seed, couplings stay
  const auto other = sample_fixed_bc(lat, 10, 21);
  CHECK(other.layer_couplings == bc.layer_couplings);
  CHECK(other.layer_spins != bc.layer_spins);
  validate_bc(lat, bc);
  CHECK_THROWS(validate_bc(BoxLattice::build(2, 4, Topology::open), bc));
}
