#include <cmath>
#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include "doctest.h"
#include "ealab/disorder.hpp"
#include "ealab/rng.hpp"

using namespace ea;

namespace {
std::string tmp_path(const char* name) {
  return (std::filesystem::temp_directory_path() / name).string();
}
}  // namespace

TEST_CASE("disorder: sampling is deterministic with normal marginals") {
  const auto lat = BoxLattice::build(2, 8, Topology::periodic);
  const auto a = sample_couplings(lat, 42);
  const auto b = sample_couplings(lat, 42);
  CHECK(a.j == b.j);
  CHECK(a.seed == 42);
  const auto c = sample_couplings(lat, 43);
  CHECK(a.j != c.j);

  double s1 = 0, s2 = 0;
  for (double x : a.j) {
    s1 += x;
    s2 += x * x;
  }
  const double n = double(a.j.size());
  CHECK(std::abs(s1 / n) < 4.0 / std::sqrt(n));
  CHECK(std::abs(s2 / n - 1.0) < 4.0 * std::sqrt(2.0 / n));
}

TEST_CASE("disorder: interpolation endpoints and formula") {
  const auto lat = BoxLattice::build(2, 4, Topology::periodic);
  const auto j = sample_couplings(lat, 1);
  const auto jp = sample_couplings(lat, 2);
  InterpolationPath path{&j, &jp, {}};

  const auto at0 = interpolate(path, 0.0);
  CHECK(at0.j == j.j);  // bit exact

  const double t = 0.7;
  const auto att = interpolate(path, t);
  const double a = std::exp(-t), b = std::sqrt(-std::expm1(-2.0 * t));
  for (int e = 0; e < lat.edge_count(); ++e)
    CHECK(att[e] == doctest::Approx(a * j[e] + b * jp[e]).epsilon(1e-15));

  const auto far = interpolate(path, 40.0);
  for (int e = 0; e < lat.edge_count(); ++e)
    CHECK(std::abs(far[e] - jp[e]) < 1e-14);
}

TEST_CASE("disorder: subset paths leave other edges untouched") {
  const auto lat = BoxLattice::build(2, 4, Topology::periodic);
  const auto j = sample_couplings(lat, 1);
  const auto jp = sample_couplings(lat, 2);
  InterpolationPath path{&j, &jp, {3, 17}};
  const auto att = interpolate(path, 1.3);
  for (int e = 0; e < lat.edge_count(); ++e) {
    if (e == 3 || e == 17)
      CHECK(att[e] != j[e]);
    else
      CHECK(att[e] == j[e]);  // bit exact
  }
}

TEST_CASE("disorder: perturbation formula and correlation map") {
  const auto lat = BoxLattice::build(2, 4, Topology::open);
  const auto j = sample_couplings(lat, 5);
  const auto eta = sample_couplings(lat, 6);
  const double dj = 0.3;
  const auto p = perturb(j, eta, dj);
  const double norm = std::sqrt(1.0 + dj * dj);
  for (int e = 0; e < lat.edge_count(); ++e)
    CHECK(p[e] == doctest::Approx((j[e] + dj * eta[e]) / norm).epsilon(1e-15));

  const auto same = perturb(j, eta, 0.0);
  CHECK(same.j == j.j);

  const double t = deltaj_to_t(dj);
  CHECK(std::exp(-t) == doctest::Approx(1.0 / norm).epsilon(1e-15));
  CHECK(t_to_deltaj(t) == doctest::Approx(dj).epsilon(1e-12));
  CHECK(deltaj_to_t(0.0) == 0.0);
}

TEST_CASE("disorder: binary and csv round trips are bit exact") {
  const std::vector<int> ext = {3, 4};
  const std::vector<Topology> topo = {Topology::periodic, Topology::open};
  const auto lat = BoxLattice::build(ext, topo);
  auto j = sample_couplings(lat, 99);
  j[0] = 1e-300;  // subnormal-adjacent values must survive
  j[1] = -0.1;

  for (const char* name : {"cpl_rt.bin", "cpl_rt.csv"}) {
    const std::string path = tmp_path(name);
    save_couplings(j, path);
    const auto back = load_couplings(lat, path);
    CHECK(back.j == j.j);
    CHECK(back.seed == j.seed);
    const auto raw = load_couplings_raw(path);
    CHECK(raw.extents == ext);
    CHECK((raw.topology == topo));
    std::filesystem::remove(path);
  }
}

TEST_CASE("disorder: loading onto a mismatched lattice throws") {
  const auto lat = BoxLattice::build(2, 4, Topology::periodic);
  const auto j = sample_couplings(lat, 7);
  const std::string path = tmp_path("cpl_geom.bin");
  save_couplings(j, path);
  const auto other = BoxLattice::build(2, 5, Topology::periodic);
  CHECK_THROWS(load_couplings(other, path));
  const auto wrong_topo = BoxLattice::build(2, 4, Topology::open);
  CHECK_THROWS(load_couplings(wrong_topo, path));
  std::filesystem::remove(path);
}
