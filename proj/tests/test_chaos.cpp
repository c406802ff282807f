#include <cmath>
#include <utility>
#include <vector>

#include "doctest.h"
#include "ealab/chaos.hpp"
#include "ealab/rng.hpp"

using namespace ea;

TEST_CASE("chaos: boundary recipes realize per realization") {
  const auto lat = BoxLattice::build(2, 3, Topology::open);
  const BcSpec fixed{BcKind::fixed_bc, 0};
  const auto b0 = realize_bc(fixed, lat, 9, 0);
  const auto b0_again = realize_bc(fixed, lat, 9, 0);
  const auto b1 = realize_bc(fixed, lat, 9, 1);
  CHECK(b0.kind == BcKind::fixed_bc);
  CHECK(b0.layer_spins == b0_again.layer_spins);
  CHECK(b0.layer_couplings == b0_again.layer_couplings);
  CHECK(b0.layer_couplings != b1.layer_couplings);

  const BcSpec ap{BcKind::antiperiodic_bc, 1};
  const auto a = realize_bc(ap, BoxLattice::build(2, 3, Topology::periodic), 9, 4);
  CHECK(a.kind == BcKind::antiperiodic_bc);
  CHECK(a.ap_axis == 1);
}

TEST_CASE("chaos: default grid starts at zero and ascends") {
  const auto g = default_chaos_grid();
  REQUIRE(g.size() == 26);
  CHECK(g.front() == 0.0);
  for (std::size_t k = 1; k < g.size(); ++k) CHECK(g[k] > g[k - 1]);
  CHECK(g.back() == doctest::Approx(10.0));
}

TEST_CASE("chaos: overlap curve starts congruent and decorrelates") {
  const auto grid = std::vector<double>{0.0, 0.05, 0.3, 1.0, 4.0};
  const auto curve = chaos_curve(1, 16, Topology::periodic, BcSpec{}, grid, 40, 21);
  CHECK(curve.n_real + curve.n_degenerate == 40);
  REQUIRE(curve.mean_q.size() == grid.size());
  CHECK(curve.mean_q[0] == 1.0);  // same solve against itself
  CHECK(curve.se_q[0] == 0.0);
  CHECK(curve.mean_q.back() < curve.mean_q[0]);
  // against an independent field the mean overlap is near zero
  CHECK(std::abs(curve.mean_q.back()) < 0.35);
  for (double q : curve.q50) CHECK((q >= -1.0 && q <= 1.0));

  // deterministic, and worker count changes nothing
  const auto again = chaos_curve(1, 16, Topology::periodic, BcSpec{}, grid, 40, 21);
  CHECK(curve.mean_q == again.mean_q);
  const auto par = chaos_curve(1, 16, Topology::periodic, BcSpec{}, grid, 40, 21,
                               SolveMethod::automatic, 3);
  CHECK(curve.mean_q == par.mean_q);
}

TEST_CASE("chaos: decorrelation time is a prefix statistic") {
  ChaosCurve c;
  c.t = {0.0, 0.1, 0.2, 0.4, 0.8};
  c.mean_q = {1.0, 0.95, 0.75, 0.9, 0.5};  // dips back below threshold late
  const auto th = adc_threshold(c, 0.2);
  CHECK(th.t_star == doctest::Approx(0.1));
  CHECK_FALSE(th.first_point_fails);

  c.mean_q = {1.0, 0.95, 0.92, 0.9, 0.85};
  CHECK(adc_threshold(c, 0.2).t_star == doctest::Approx(0.8));

  c.mean_q = {1.0, 0.5, 0.4, 0.3, 0.2};
  const auto bad = adc_threshold(c, 0.2);
  CHECK(bad.first_point_fails);
  CHECK(bad.t_star == doctest::Approx(0.1));
}

TEST_CASE("chaos: size exponent recovers an exact power law") {
  // t* = (L^d)^-0.8 at d = 2
  std::vector<std::pair<int, double>> pts;
  for (int L : {4, 6, 8}) pts.emplace_back(L, std::pow(double(L) * L, -0.8));
  const auto fit = fit_alpha(pts, 2);
  CHECK(fit.value == doctest::Approx(0.8).epsilon(1e-10));
  CHECK(fit.se == doctest::Approx(0.0));
  CHECK(fit.r2 == doctest::Approx(1.0));
  CHECK(fit.sizes == std::vector<int>{4, 6, 8});
}

TEST_CASE("chaos: chain droplets have unit boundaries and zero size exponent") {
  const std::vector<int> sizes = {8, 12, 16};
  const auto scan = droplet_size_scan(1, sizes, Topology::open, BcSpec{}, 6, 31);
  REQUIRE(scan.sizes == sizes);
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    CHECK(scan.mean_max[i] == 1.0);
    CHECK(scan.se_max[i] == 0.0);
    CHECK(scan.mean_size[i] == 1.0);
    // histogram mass sits entirely at size 1
    REQUIRE(scan.size_counts[i].size() >= 2);
    CHECK(scan.size_counts[i][1] > 0);
    for (std::size_t s = 2; s < scan.size_counts[i].size(); ++s)
      CHECK(scan.size_counts[i][s] == 0);
  }
  CHECK(scan.gamma.value == 0.0);
  CHECK(scan.gamma.se == 0.0);
  CHECK(scan.df.value == 0.0);
}

TEST_CASE("chaos: 2d droplet boundaries are nontrivial") {
  const std::vector<int> sizes = {3, 4, 5};
  const auto scan = droplet_size_scan(2, sizes, Topology::periodic, BcSpec{BcKind::periodic_bc, 0}, 4, 32);
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    CHECK(scan.mean_max[i] > 1.0);
    CHECK(scan.mean_size[i] >= 1.0);
  }
  // larger boxes host larger maximal droplets on average
  CHECK(scan.mean_max.back() > scan.mean_max.front());
}

TEST_CASE("chaos: flexibility distribution respects the density ceiling") {
  const std::vector<double> deltas = {0.05, 0.1, 0.2};
  const auto h = flexibility_histogram(2, 4, Topology::periodic,
                                       BcSpec{BcKind::periodic_bc, 0}, 60, deltas, 77);
  REQUIRE(h.p_hat.size() == deltas.size());
  CHECK(h.n_samples > 1000);
  for (std::size_t i = 0; i < deltas.size(); ++i) {
    CHECK(h.p_hat[i] >= 0.0);
    CHECK(h.p_hat[i] <= 1.0);
    CHECK(h.bound[i] == doctest::Approx(deltas[i] / std::sqrt(2.0 * 3.141592653589793)
                                        + 3.0 * h.se[i]).epsilon(1e-12));
    CHECK(h.pass[i]);
  }
  CHECK(h.all_pass);
}

TEST_CASE("chaos: chain flexibility matches the closed form") {
  const std::vector<double> deltas = {0.2, 0.5, 1.0};
  const auto h = flexibility_histogram(1, 32, Topology::open, BcSpec{}, 40, deltas, 78);
  for (std::size_t i = 0; i < deltas.size(); ++i) {
    CHECK(h.exact[i] == doctest::Approx(std::erf(deltas[i] / (2.0 * std::sqrt(2.0)))).epsilon(1e-12));
    CHECK(std::abs(h.p_hat[i] - h.exact[i]) <= 3.0 * h.se[i] + 1e-12);
    CHECK(h.exact_pass[i]);
  }
}

TEST_CASE("chaos: collapse fit recovers a planted exponent") {
  const double xi = 0.75;
  std::vector<ChaosCurve> curves;
  const auto t = log_spaced(1e-3, 2.0, 24);
  for (int L : {4, 6, 8, 12}) {
    ChaosCurve c;
    c.d = 2;
    c.L = L;
    c.t.push_back(0.0);
    c.mean_q.push_back(1.0);
    for (double tt : t) {
      c.t.push_back(tt);
      // q depends on time and size only through L * t^(1/(2 xi))
      c.mean_q.push_back(std::exp(-double(L) * std::pow(tt, 1.0 / (2.0 * xi))));
    }
    curves.push_back(std::move(c));
  }
  const auto fit = collapse_fit(curves);
  CHECK_FALSE(fit.flat);
  CHECK(fit.xi == doctest::Approx(xi).epsilon(0.03));
  CHECK(fit.objective < 1e-4);
}

TEST_CASE("chaos: collapse on size-independent curves reports flat") {
  std::vector<ChaosCurve> curves;
  for (int L : {4, 6, 8}) {
    ChaosCurve c;
    c.L = L;
    c.t = {0.0, 0.1, 0.5, 1.0};
    c.mean_q = {1.0, 0.8, 0.5, 0.3};  // identical for every size
    curves.push_back(std::move(c));
  }
  const auto fit = collapse_fit(curves);
  CHECK(fit.flat);
}

TEST_CASE("chaos: exponent relations carry verdicts with error bands") {
  const EstimateSE alpha{1.6, 0.05};
  const EstimateSE gamma{0.5, 0.05};
  const EstimateSE xi{1.6, 0.05};  // alpha = 2 xi / d at d = 2
  const EstimateSE theta{-0.3, 0.1};
  const EstimateSE df{1.7, 0.2};
  const auto rep = relation_report(2, alpha, gamma, xi, theta, df);
  CHECK(rep.d == 2);
  REQUIRE(!rep.checks.empty());
  for (const auto& c : rep.checks) {
    CHECK((c.verdict == "pass" || c.verdict == "inconclusive" || c.verdict == "fail"));
  }
  // alpha > 2 gamma separated by > 2 SE on both sides passes
  bool saw_strict = false;
  for (const auto& c : rep.checks)
    if (c.relation.find("2*gamma") != std::string::npos) {
      saw_strict = true;
      CHECK(c.verdict == "pass");
    }
  CHECK(saw_strict);
  // alpha >= 1/d holds with margin here
  bool saw_floor = false;
  for (const auto& c : rep.checks)
    if (c.relation.find("1/d") != std::string::npos) {
      saw_floor = true;
      CHECK(c.verdict == "pass");
    }
  CHECK(saw_floor);
}
