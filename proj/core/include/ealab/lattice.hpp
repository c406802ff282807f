#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

// Finite box lattices in d = 1..3 with per-axis open or periodic topology.
// Vertices are indexed row-major over coordinates; edges are indexed in
// (vertex, axis) order: for v ascending, for axis ascending, one index per
// existing edge. Wrap edges (periodic seam) hang off the last layer of their
// axis. This canonical order is what coupling files and CSV reports use.

namespace ea {

enum class Topology : std::uint8_t { open = 0, periodic = 1 };

const char* to_string(Topology t);
Topology topology_from_string(const std::string& s);

struct Edge {
  std::int32_t a = -1, b = -1;  // endpoints, a < b
  std::int16_t axis = 0;
  bool wrap = false;            // crosses the periodic seam of its axis
};

// one edge from a vertex to the enclosing layer, present on open axes only;
// used by fixed boundary conditions
struct LayerEdge {
  std::int32_t vertex = -1;
  std::int16_t axis = 0;
  std::int16_t dir = 0;  // -1 low face, +1 high face
};

class BoxLattice {
public:
  // cubic box, same topology on every axis
  static BoxLattice build(int d, int L, Topology topo);
  // general box; extents.size() == topo.size() == d, extents >= 2,
  // periodic axes require extent >= 3
  static BoxLattice build(std::span<const int> extents,
                          std::span<const Topology> topo);

  int dim() const { return d_; }
  int extent(int axis) const { return extents_[axis]; }
  int side() const { return extents_[0]; }
  Topology topology(int axis) const { return topo_[axis]; }
  bool fully_open() const;
  bool fully_periodic() const;

  std::int64_t vertex_count() const { return nv_; }
  std::int64_t edge_count() const { return std::int64_t(edges_.size()); }

  std::array<int, 3> coords(int v) const;
  int vertex_at(std::span<const int> c) const;
  // neighbor along axis in direction dir (+1/-1); -1 if outside an open face
  int neighbor(int v, int axis, int dir) const;

  const std::vector<Edge>& edges() const { return edges_; }
  const Edge& edge(int e) const { return edges_[std::size_t(e)]; }
  // edge leaving v in +axis direction (wrap included); -1 if absent
  int edge_index(int v, int axis) const { return edge_at_[std::size_t(v) * d_ + axis]; }

  // incident edge ids of a vertex, ascending
  std::span<const std::int32_t> incident_edges(int v) const;
  // other endpoint of edge e as seen from v
  int edge_other(int e, int v) const {
    const Edge& ed = edges_[std::size_t(e)];
    return ed.a == v ? ed.b : ed.a;
  }

  // enclosing-layer edges (fixed-bc slots), canonical order: vertex asc,
  // axis asc, low face before high face
  const std::vector<LayerEdge>& layer_edges() const { return layer_edges_; }

  std::string topology_string() const;  // e.g. "open,periodic"

private:
  int d_ = 0;
  std::array<int, 3> extents_{1, 1, 1};
  std::array<Topology, 3> topo_{Topology::open, Topology::open, Topology::open};
  std::int64_t nv_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::int32_t> edge_at_;      // (v, axis) -> edge id or -1
  std::vector<std::int32_t> inc_off_;      // CSR offsets
  std::vector<std::int32_t> inc_edges_;    // CSR incident edge ids
  std::vector<LayerEdge> layer_edges_;
};

// spin configuration, one +-1 value per vertex
struct SpinConfig {
  const BoxLattice* lat = nullptr;
  std::vector<std::int8_t> s;

  SpinConfig() = default;
  explicit SpinConfig(const BoxLattice& l, std::int8_t fill = 1)
      : lat(&l), s(std::size_t(l.vertex_count()), fill) {}

  int edge_value(const Edge& e) const { return s[std::size_t(e.a)] * s[std::size_t(e.b)]; }
  int edge_value(int e) const { return edge_value(lat->edge(e)); }
  void flip_all() { for (auto& v : s) v = std::int8_t(-v); }
  bool operator==(const SpinConfig& o) const { return s == o.s; }

  std::string bits() const;  // "0" for +1, "1" for -1, vertex order
  static SpinConfig from_bits(const BoxLattice& l, const std::string& bits);
};

// true if a equals b or -b
bool equal_mod_flip(const SpinConfig& a, const SpinConfig& b);
// lexicographic on the bit pattern (+1 sorts before -1)
bool lex_less(const SpinConfig& a, const SpinConfig& b);

// vertex subset of one lattice, dense bitmask
class Region {
public:
  Region() = default;
  explicit Region(const BoxLattice& l);
  static Region of(const BoxLattice& l, std::initializer_list<int> vs);

  const BoxLattice* lattice() const { return lat_; }
  void add(int v);
  void remove(int v);
  bool contains(int v) const;
  int size() const;
  bool empty() const { return size() == 0; }
  std::vector<int> vertices() const;  // ascending
  bool operator==(const Region& o) const { return words_ == o.words_; }

private:
  const BoxLattice* lat_ = nullptr;
  std::vector<std::uint64_t> words_;
};

// edges with exactly one endpoint inside the region, ascending edge id
std::vector<std::int32_t> boundary_edges(const BoxLattice& lat, const Region& r);

// connected components of the induced subgraph, ordered by smallest vertex
std::vector<Region> connected_components(const BoxLattice& lat, const Region& r);

// returns other or its global flip, whichever is Hamming-closer to ref;
// exact tie keeps other as passed
SpinConfig gauge_align(const SpinConfig& ref, const SpinConfig& other);

// vertices where the two configs disagree
Region disagreement_region(const SpinConfig& a, const SpinConfig& b);

}
