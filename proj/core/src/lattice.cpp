#include "ealab/lattice.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

namespace ea {

const char* to_string(Topology t) {
  return t == Topology::open ? "open" : "periodic";
}

Topology topology_from_string(const std::string& s) {
  if (s == "open") return Topology::open;
  if (s == "periodic") return Topology::periodic;
  throw std::invalid_argument("unknown topology: " + s);
}

BoxLattice BoxLattice::build(int d, int L, Topology topo) {
  if (d < 1 || d > 3) throw std::invalid_argument("dimension must be 1..3");
  std::array<int, 3> ext{};
  std::array<Topology, 3> tp{};
  for (int a = 0; a < d; ++a) { ext[std::size_t(a)] = L; tp[std::size_t(a)] = topo; }
  return build(std::span<const int>(ext.data(), std::size_t(d)),
               std::span<const Topology>(tp.data(), std::size_t(d)));
}

BoxLattice BoxLattice::build(std::span<const int> extents,
                             std::span<const Topology> topo) {
  const int d = int(extents.size());
  if (d < 1 || d > 3) throw std::invalid_argument("dimension must be 1..3");
  if (topo.size() != extents.size())
    throw std::invalid_argument("extents/topology size mismatch");

  BoxLattice lat;
  lat.d_ = d;
  lat.nv_ = 1;
  for (int a = 0; a < d; ++a) {
    const int L = extents[std::size_t(a)];
    if (L < 2) throw std::invalid_argument("extent must be >= 2");
    if (topo[std::size_t(a)] == Topology::periodic && L < 3)
      throw std::invalid_argument("periodic axis needs extent >= 3");
    lat.extents_[std::size_t(a)] = L;
    lat.topo_[std::size_t(a)] = topo[std::size_t(a)];
    lat.nv_ *= L;
  }

  const int nv = int(lat.nv_);
  lat.edge_at_.assign(std::size_t(nv) * std::size_t(d), -1);

  // strides for row-major coordinates: index = sum c_a * stride_a
  std::array<std::int64_t, 3> stride{0, 0, 0};
  stride[std::size_t(d - 1)] = 1;
  for (int a = d - 2; a >= 0; --a)
    stride[std::size_t(a)] = stride[std::size_t(a + 1)] * lat.extents_[std::size_t(a + 1)];

  for (int v = 0; v < nv; ++v) {
    const auto c = lat.coords(v);
    for (int a = 0; a < d; ++a) {
      const int L = lat.extents_[std::size_t(a)];
      const bool last = (c[std::size_t(a)] == L - 1);
      if (last && lat.topo_[std::size_t(a)] == Topology::open) continue;
      int w = last ? v - int(stride[std::size_t(a)]) * (L - 1)
                   : v + int(stride[std::size_t(a)]);
      Edge e;
      e.a = std::min(v, w);
      e.b = std::max(v, w);
      e.axis = std::int16_t(a);
      e.wrap = last;
      lat.edge_at_[std::size_t(v) * std::size_t(d) + std::size_t(a)] =
          std::int32_t(lat.edges_.size());
      lat.edges_.push_back(e);
    }
  }

  // incident-edge CSR
  std::vector<std::int32_t> deg(std::size_t(nv), 0);
  for (const Edge& e : lat.edges_) { ++deg[std::size_t(e.a)]; ++deg[std::size_t(e.b)]; }
  lat.inc_off_.assign(std::size_t(nv) + 1, 0);
  for (int v = 0; v < nv; ++v)
    lat.inc_off_[std::size_t(v) + 1] = lat.inc_off_[std::size_t(v)] + deg[std::size_t(v)];
  lat.inc_edges_.assign(std::size_t(lat.inc_off_[std::size_t(nv)]), -1);
  std::vector<std::int32_t> fill(lat.inc_off_.begin(), lat.inc_off_.end() - 1);
  for (std::size_t i = 0; i < lat.edges_.size(); ++i) {
    const Edge& e = lat.edges_[i];
    lat.inc_edges_[std::size_t(fill[std::size_t(e.a)]++)] = std::int32_t(i);
    lat.inc_edges_[std::size_t(fill[std::size_t(e.b)]++)] = std::int32_t(i);
  }

  // enclosing-layer slots on open faces
  for (int v = 0; v < nv; ++v) {
    const auto c = lat.coords(v);
    for (int a = 0; a < d; ++a) {
      if (lat.topo_[std::size_t(a)] != Topology::open) continue;
      if (c[std::size_t(a)] == 0)
        lat.layer_edges_.push_back({v, std::int16_t(a), std::int16_t(-1)});
      if (c[std::size_t(a)] == lat.extents_[std::size_t(a)] - 1)
        lat.layer_edges_.push_back({v, std::int16_t(a), std::int16_t(+1)});
    }
  }

  return lat;
}

bool BoxLattice::fully_open() const {
  for (int a = 0; a < d_; ++a)
    if (topo_[std::size_t(a)] != Topology::open) return false;
  return true;
}

bool BoxLattice::fully_periodic() const {
  for (int a = 0; a < d_; ++a)
    if (topo_[std::size_t(a)] != Topology::periodic) return false;
  return true;
}

std::array<int, 3> BoxLattice::coords(int v) const {
  std::array<int, 3> c{0, 0, 0};
  for (int a = d_ - 1; a >= 0; --a) {
    c[std::size_t(a)] = v % extents_[std::size_t(a)];
    v /= extents_[std::size_t(a)];
  }
  return c;
}

int BoxLattice::vertex_at(std::span<const int> c) const {
  int v = 0;
  for (int a = 0; a < d_; ++a) v = v * extents_[std::size_t(a)] + c[std::size_t(a)];
  return v;
}

int BoxLattice::neighbor(int v, int axis, int dir) const {
  auto c = coords(v);
  int x = c[std::size_t(axis)] + dir;
  const int L = extents_[std::size_t(axis)];
  if (x < 0 || x >= L) {
    if (topo_[std::size_t(axis)] == Topology::open) return -1;
    x = (x + L) % L;
  }
  c[std::size_t(axis)] = x;
  return vertex_at(std::span<const int>(c.data(), std::size_t(d_)));
}

std::span<const std::int32_t> BoxLattice::incident_edges(int v) const {
  const auto lo = std::size_t(inc_off_[std::size_t(v)]);
  const auto hi = std::size_t(inc_off_[std::size_t(v) + 1]);
  return {inc_edges_.data() + lo, hi - lo};
}

std::string BoxLattice::topology_string() const {
  std::string s;
  for (int a = 0; a < d_; ++a) {
    if (a) s += ',';
    s += to_string(topo_[std::size_t(a)]);
  }
  return s;
}

std::string SpinConfig::bits() const {
  std::string b(s.size(), '0');
  for (std::size_t i = 0; i < s.size(); ++i) b[i] = s[i] < 0 ? '1' : '0';
  return b;
}

SpinConfig SpinConfig::from_bits(const BoxLattice& l, const std::string& bits) {
  if (std::int64_t(bits.size()) != l.vertex_count())
    throw std::invalid_argument("bit string length != vertex count");
  SpinConfig c(l);
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i] != '0' && bits[i] != '1')
      throw std::invalid_argument("bit string must be 0/1");
    c.s[i] = bits[i] == '1' ? -1 : 1;
  }
  return c;
}

bool equal_mod_flip(const SpinConfig& a, const SpinConfig& b) {
  if (a.s.size() != b.s.size()) return false;
  if (a.s == b.s) return true;
  for (std::size_t i = 0; i < a.s.size(); ++i)
    if (a.s[i] != -b.s[i]) return false;
  return true;
}

bool lex_less(const SpinConfig& a, const SpinConfig& b) {
  // +1 encodes as 0, so all-plus is the smallest pattern
  for (std::size_t i = 0; i < a.s.size(); ++i) {
    const int x = a.s[i] < 0, y = b.s[i] < 0;
    if (x != y) return x < y;
  }
  return false;
}

Region::Region(const BoxLattice& l)
    : lat_(&l), words_(std::size_t((l.vertex_count() + 63) / 64), 0) {}

Region Region::of(const BoxLattice& l, std::initializer_list<int> vs) {
  Region r(l);
  for (int v : vs) r.add(v);
  return r;
}

void Region::add(int v) { words_[std::size_t(v) >> 6] |= 1ull << (v & 63); }
void Region::remove(int v) { words_[std::size_t(v) >> 6] &= ~(1ull << (v & 63)); }
bool Region::contains(int v) const { return (words_[std::size_t(v) >> 6] >> (v & 63)) & 1; }

int Region::size() const {
  int n = 0;
  for (auto w : words_) n += std::popcount(w);
  return n;
}

std::vector<int> Region::vertices() const {
  std::vector<int> out;
  for (std::size_t wi = 0; wi < words_.size(); ++wi) {
    std::uint64_t w = words_[wi];
    while (w) {
      out.push_back(int(wi * 64) + std::countr_zero(w));
      w &= w - 1;
    }
  }
  return out;
}

std::vector<std::int32_t> boundary_edges(const BoxLattice& lat, const Region& r) {
  std::vector<std::int32_t> out;
  const auto& es = lat.edges();
  for (std::size_t i = 0; i < es.size(); ++i)
    if (r.contains(es[i].a) != r.contains(es[i].b)) out.push_back(std::int32_t(i));
  return out;
}

std::vector<Region> connected_components(const BoxLattice& lat, const Region& r) {
  std::vector<Region> comps;
  Region seen(lat);
  std::vector<int> stack;
  for (int v : r.vertices()) {
    if (seen.contains(v)) continue;
    Region comp(lat);
    stack.push_back(v);
    seen.add(v);
    comp.add(v);
    while (!stack.empty()) {
      const int u = stack.back();
      stack.pop_back();
      for (auto e : lat.incident_edges(u)) {
        const int w = lat.edge_other(e, u);
        if (r.contains(w) && !seen.contains(w)) {
          seen.add(w);
          comp.add(w);
          stack.push_back(w);
        }
      }
    }
    comps.push_back(std::move(comp));
  }
  return comps;
}

SpinConfig gauge_align(const SpinConfig& ref, const SpinConfig& other) {
  if (ref.s.size() != other.s.size())
    throw std::invalid_argument("config size mismatch");
  std::size_t ham = 0;
  for (std::size_t i = 0; i < ref.s.size(); ++i) ham += ref.s[i] != other.s[i];
  if (2 * ham <= ref.s.size()) return other;  // tie keeps the passed config
  SpinConfig flipped = other;
  flipped.flip_all();
  return flipped;
}

Region disagreement_region(const SpinConfig& a, const SpinConfig& b) {
  Region r(*a.lat);
  for (std::size_t i = 0; i < a.s.size(); ++i)
    if (a.s[i] != b.s[i]) r.add(int(i));
  return r;
}

}
