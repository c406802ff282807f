#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ealab/disorder.hpp"
#include "ealab/groundstate.hpp"
#include "ealab/stats.hpp"

// Coupling-chaos experiments: overlap decay curves along the interpolation,
// the size scale where overlaps start to drop, critical droplet geometry
// across sizes, the flexibility density bound, the overlap collapse, and the
// exponent-relation report.

namespace ea {

// boundary-condition recipe reusable across lattices; fixed boundaries are
// resampled per realization, independently of the couplings
struct BcSpec {
  BcKind kind = BcKind::free_bc;
  int ap_axis = 0;
};

BoundaryCondition realize_bc(const BcSpec& spec, const BoxLattice& lat,
                             std::uint64_t master_seed, std::int64_t realization);

// {0} followed by 25 log-spaced points in [1e-6, 10]
std::vector<double> default_chaos_grid();

struct ChaosCurve {
  int d = 0, L = 0;
  std::string topology;
  std::string bc_label;
  std::uint64_t seed = 0;
  int n_requested = 0;
  int n_real = 0;        // realizations kept
  int n_degenerate = 0;  // realizations discarded for ground-state ties
  std::vector<double> t;
  std::vector<double> mean_q, se_q, q05, q50, q95;
};

// per realization: sample a field and an independent copy, solve at every
// grid time, record edge overlaps against the t = 0 solve
ChaosCurve chaos_curve(int d, int L, Topology topo, const BcSpec& bc,
                       std::span<const double> t_grid, int n_real,
                       std::uint64_t seed,
                       SolveMethod method = SolveMethod::automatic,
                       int workers = 1);

struct AdcThreshold {
  double eps = 0.0;
  double t_star = 0.0;
  bool first_point_fails = false;  // even the first positive grid time fails
};

// largest grid time t such that mean(1 - Q) <= eps at every grid point up to
// t; when the first positive grid point already fails, returns it flagged
AdcThreshold adc_threshold(const ChaosCurve& curve, double eps);

struct ExponentFit {
  double value = 0.0;
  double se = 0.0;
  double r2 = 1.0;
  std::vector<int> sizes;
  std::string method;
};

// least squares of log t* on log of the vertex count; value = -slope
ExponentFit fit_alpha(std::span<const std::pair<int, double>> thresholds, int d);

struct DropletScan {
  int d = 0;
  std::vector<int> sizes;
  std::string topology;
  std::string bc_label;
  std::uint64_t seed = 0;
  int n_real = 0;
  // per size
  std::vector<double> mean_max, se_max;    // mean over realizations of max_b size
  std::vector<double> mean_size, se_size;  // pooled mean size over edges
  std::vector<std::vector<std::int64_t>> size_counts;  // histogram, index = size
  std::vector<int> degenerate;             // discarded realizations
  ExponentFit gamma;  // log mean_max vs log vertex count
  ExponentFit df;     // log mean_size vs log L
};

// critical droplet of every edge, n_real realizations per size (>= 3 sizes)
DropletScan droplet_size_scan(int d, std::span<const int> sizes, Topology topo,
                              const BcSpec& bc, int n_real, std::uint64_t seed,
                              SolveMethod method = SolveMethod::automatic,
                              int workers = 1);

struct FlexibilityHistogram {
  int d = 0, L = 0;
  std::string topology;
  std::string bc_label;
  std::uint64_t seed = 0;
  std::int64_t n_samples = 0;  // pooled edge samples kept
  std::int64_t n_degenerate = 0;
  std::vector<double> delta;
  std::vector<double> p_hat;  // empirical P(F <= delta)
  std::vector<double> se;     // binomial
  std::vector<double> bound;  // delta/sqrt(2 pi) + 3 se
  std::vector<std::uint8_t> asserted;  // bound enforced (delta < 1)
  std::vector<std::uint8_t> pass;
  bool all_pass = true;
  // 1D closed form P(F <= delta) = erf(delta / (2 sqrt 2)) and 3-SE match
  std::vector<double> exact;
  std::vector<std::uint8_t> exact_pass;
};

FlexibilityHistogram flexibility_histogram(int d, int L, Topology topo,
                                           const BcSpec& bc, int n_real,
                                           std::span<const double> deltas,
                                           std::uint64_t seed,
                                           SolveMethod method = SolveMethod::automatic,
                                           int workers = 1);

struct CollapseFit {
  double xi = 0.0;
  double objective = 0.0;  // mean squared mismatch at the optimum
  bool flat = false;       // no interior optimum: curves carry no usable
                           // size dependence
  std::vector<int> sizes;
  std::vector<double> t;      // shared positive grid
  std::vector<double> ell_c;  // t^(-1/(2 xi))
};

// exponent that best collapses mean Q against L * t^(1/(2 xi)): coarse scan
// over [0.01, 5] then golden-section refinement of the pairwise
// curve-mismatch objective
CollapseFit collapse_fit(std::span<const ChaosCurve> curves);

struct EstimateSE {
  double value = 0.0;
  double se = 0.0;
};

struct RelationCheck {
  std::string relation;
  double lhs = 0.0, lhs_se = 0.0;
  double rhs = 0.0, rhs_se = 0.0;
  std::string verdict;  // "pass" | "inconclusive" | "fail"
};

struct RelationReport {
  int d = 0;
  EstimateSE alpha, gamma, xi, theta, df;
  std::vector<RelationCheck> checks;
};

// cross-checks between the fitted exponents with 2-SE bands; always a
// report, never a hard failure
RelationReport relation_report(int d, EstimateSE alpha, EstimateSE gamma,
                               EstimateSE xi, EstimateSE theta, EstimateSE df);

}
