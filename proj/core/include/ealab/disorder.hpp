#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ealab/lattice.hpp"

// Gaussian coupling fields over a lattice's edges, plus the correlated
// interpolation between a field and an independent copy. The interpolation
//   J_e(t) = exp(-t) J_e + sqrt(1 - exp(-2t)) J'_e
// acts on a chosen edge subset and leaves every other edge untouched.

namespace ea {

struct CouplingField {
  const BoxLattice* lat = nullptr;
  std::vector<double> j;   // one value per canonical edge index
  std::uint64_t seed = 0;  // seed it was sampled from, 0 if synthetic

  CouplingField() = default;
  explicit CouplingField(const BoxLattice& l, double fill = 0.0)
      : lat(&l), j(std::size_t(l.edge_count()), fill) {}
  double operator[](int e) const { return j[std::size_t(e)]; }
  double& operator[](int e) { return j[std::size_t(e)]; }
};

// iid standard normals keyed by (seed, edge index)
CouplingField sample_couplings(const BoxLattice& lat, std::uint64_t seed);

struct InterpolationPath {
  const CouplingField* base = nullptr;    // J
  const CouplingField* target = nullptr;  // J', independent copy
  std::vector<std::int32_t> edges;        // subset the path moves; empty = all

  bool moves_all() const { return edges.empty(); }
};

// field at time t >= 0; t = 0 returns base bit-exactly
CouplingField interpolate(const InterpolationPath& path, double t);

// (J + eta * dj) / sqrt(1 + dj^2), eta an independent standard normal field;
// marginals stay standard normal for any dj
CouplingField perturb(const CouplingField& j, const CouplingField& eta, double dj);

// time along the interpolation with the same base correlation as a
// perturbation of size dj: corr = exp(-t) = 1/sqrt(1+dj^2)
double deltaj_to_t(double dj);
double t_to_deltaj(double t);

// --- serialization -------------------------------------------------------
// binary: magic/version header with (d, extents, topology, seed), then one
// little-endian double per canonical edge index; round trips bit-exactly.
// csv: same header as # comments, hexfloat values; also bit-exact.

void save_couplings(const CouplingField& f, const std::string& path);

struct LoadedCouplings {
  std::vector<int> extents;
  std::vector<Topology> topology;
  std::uint64_t seed = 0;
  std::vector<double> j;
};

LoadedCouplings load_couplings_raw(const std::string& path);
// validates geometry against lat and attaches to it
CouplingField load_couplings(const BoxLattice& lat, const std::string& path);

}
