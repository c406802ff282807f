#include <algorithm>
#include <set>
#include <vector>

#include "doctest.h"
#include "ealab/lattice.hpp"

using namespace ea;

TEST_CASE("lattice: open chain") {
  const auto lat = BoxLattice::build(1, 5, Topology::open);
  CHECK(lat.vertex_count() == 5);
  CHECK(lat.edge_count() == 4);
  CHECK(lat.fully_open());
  for (const Edge& e : lat.edges()) CHECK_FALSE(e.wrap);
  CHECK(lat.neighbor(0, 0, -1) == -1);
  CHECK(lat.neighbor(4, 0, +1) == -1);
  CHECK(lat.neighbor(2, 0, +1) == 3);
  // one layer slot per open face vertex
  CHECK(lat.layer_edges().size() == 2);
}

TEST_CASE("lattice: periodic ring edge order and wrap") {
  const auto lat = BoxLattice::build(1, 5, Topology::periodic);
  CHECK(lat.edge_count() == 5);
  CHECK(lat.fully_periodic());
  CHECK(lat.layer_edges().empty());
  int wraps = 0;
  for (const Edge& e : lat.edges()) wraps += e.wrap;
  CHECK(wraps == 1);
  const Edge& last = lat.edge(int(lat.edge_count()) - 1);
  CHECK(last.wrap);
  CHECK(last.a == 0);
  CHECK(last.b == 4);
  CHECK(lat.neighbor(4, 0, +1) == 0);
  CHECK(lat.edge_index(4, 0) == 4);
}

TEST_CASE("lattice: 2d degree counts") {
  const auto open3 = BoxLattice::build(2, 3, Topology::open);
  CHECK(open3.vertex_count() == 9);
  CHECK(open3.edge_count() == 12);
  const auto per3 = BoxLattice::build(2, 3, Topology::periodic);
  CHECK(per3.edge_count() == 18);
  for (int v = 0; v < 9; ++v) CHECK(per3.incident_edges(v).size() == 4);
  // open corner has degree 2, center 4
  CHECK(open3.incident_edges(open3.vertex_at(std::vector<int>{0, 0})).size() == 2);
  CHECK(open3.incident_edges(open3.vertex_at(std::vector<int>{1, 1})).size() == 4);
}

TEST_CASE("lattice: mixed topology box") {
  const std::vector<int> ext = {4, 3};
  const std::vector<Topology> topo = {Topology::open, Topology::periodic};
  const auto lat = BoxLattice::build(ext, topo);
  CHECK(lat.vertex_count() == 12);
  // axis 0 open: 3*3 edges, axis 1 periodic: 4*3 edges
  CHECK(lat.edge_count() == 9 + 12);
  int wraps = 0;
  for (const Edge& e : lat.edges()) wraps += e.wrap;
  CHECK(wraps == 4);
  CHECK(lat.topology_string() == "open,periodic");
  // layer slots only on the open axis faces
  CHECK(lat.layer_edges().size() == 2 * 3);
  for (const LayerEdge& le : lat.layer_edges()) CHECK(le.axis == 0);
}

TEST_CASE("lattice: coords round trip and edge navigation") {
  const auto lat = BoxLattice::build(3, 3, Topology::periodic);
  for (int v = 0; v < lat.vertex_count(); ++v) {
    const auto c = lat.coords(v);
    CHECK(lat.vertex_at(std::vector<int>{c[0], c[1], c[2]}) == v);
  }
  for (int e = 0; e < lat.edge_count(); ++e) {
    const Edge& ed = lat.edge(e);
    CHECK(ed.a < ed.b);
    CHECK(lat.edge_other(e, ed.a) == ed.b);
    CHECK(lat.edge_other(e, ed.b) == ed.a);
    const int from = ed.wrap ? ed.b : ed.a;
    CHECK(lat.edge_index(from, ed.axis) == e);
  }
}

TEST_CASE("lattice: canonical edge order is (vertex, axis) ascending") {
  const auto lat = BoxLattice::build(2, 4, Topology::periodic);
  std::vector<std::pair<int, int>> keys;
  for (int e = 0; e < lat.edge_count(); ++e) {
    const Edge& ed = lat.edge(e);
    keys.emplace_back(ed.wrap ? ed.b : ed.a, ed.axis);
  }
  CHECK(std::is_sorted(keys.begin(), keys.end()));
}

TEST_CASE("lattice: periodic extents below 3 are rejected") {
  CHECK_THROWS(BoxLattice::build(2, 2, Topology::periodic));
  CHECK_NOTHROW(BoxLattice::build(2, 2, Topology::open));
}

TEST_CASE("spin config: bits round trip") {
  const auto lat = BoxLattice::build(2, 2, Topology::open);
  SpinConfig s(lat);
  s.s = {1, -1, -1, 1};
  CHECK(s.bits() == "0110");
  const SpinConfig t = SpinConfig::from_bits(lat, "0110");
  CHECK(t == s);
  SpinConfig f = s;
  f.flip_all();
  CHECK(f.bits() == "1001");
  CHECK(equal_mod_flip(s, f));
  CHECK_FALSE(s == f);
  CHECK(lex_less(s, f));
}

TEST_CASE("region: membership, boundary, components") {
  const auto lat = BoxLattice::build(2, 3, Topology::open);
  Region r(lat);
  const int v00 = lat.vertex_at(std::vector<int>{0, 0});
  const int v10 = lat.vertex_at(std::vector<int>{1, 0});
  const int v22 = lat.vertex_at(std::vector<int>{2, 2});
  r.add(v00);
  r.add(v10);
  r.add(v22);
  CHECK(r.size() == 3);
  CHECK(r.contains(v10));
  r.remove(v10);
  CHECK(r.size() == 2);
  r.add(v10);

  // {v00, v10} adjacent, v22 isolated corner
  const auto comps = connected_components(lat, r);
  REQUIRE(comps.size() == 2);
  CHECK(comps[0].size() == 2);
  CHECK(comps[1].size() == 1);
  CHECK(comps[1].contains(v22));

  // boundary of the pair: edges leaving {v00, v10}
  Region pair = Region::of(lat, {v00, v10});
  const auto be = boundary_edges(lat, pair);
  CHECK(be.size() == 3);
  for (int e : be) {
    const Edge& ed = lat.edge(e);
    CHECK(pair.contains(ed.a) != pair.contains(ed.b));
  }
}

TEST_CASE("gauge_align picks the closer flip class") {
  const auto lat = BoxLattice::build(1, 4, Topology::open);
  SpinConfig ref(lat);  // all +1
  SpinConfig far(lat);
  far.s = {-1, -1, -1, 1};
  const SpinConfig aligned = gauge_align(ref, far);
  CHECK(aligned.s == std::vector<std::int8_t>{1, 1, 1, -1});
  // exact tie keeps the config as passed
  SpinConfig half(lat);
  half.s = {-1, -1, 1, 1};
  CHECK(gauge_align(ref, half) == half);
  const Region d = disagreement_region(ref, aligned);
  CHECK(d.size() == 1);
  CHECK(d.contains(3));
}
