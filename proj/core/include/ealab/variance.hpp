#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ealab/chaos.hpp"
#include "ealab/disorder.hpp"
#include "ealab/groundstate.hpp"
#include "ealab/lattice.hpp"
#include "ealab/stats.hpp"

namespace ea {

// Two-replica disorder ensembles used by the variance lower bound.
//   pa: fully periodic box; replica 1 plain wrap, replica 2 antiperiodic
//       along axis 0. Same couplings, same everything else.
//   ff: fully open box; both replicas pinned to a sampled boundary layer.
//       The layer couplings are part of the disorder (shared between
//       replicas); the layer spins are resampled independently per replica.
enum class EnsembleKind : std::uint8_t { pa, ff };

const char* to_string(EnsembleKind k);
EnsembleKind ensemble_from_string(const std::string& name);

// lattice topology the ensemble is defined on
Topology ensemble_topology(EnsembleKind k);

struct ReplicaPair {
  BoundaryCondition bc1;
  BoundaryCondition bc2;
};

// boundary conditions for one disorder realization; independent of the bulk
// couplings, so the same pair serves every point of an interpolation path
ReplicaPair make_replicas(EnsembleKind k, const BoxLattice& lat,
                          std::uint64_t master_seed, std::int64_t realization);

// ---------------------------------------------------------------------------
// Gaussian integration-by-parts identity self-test
//
//   Var h(Y) = integral_0^inf sum_i E[d_i h(Y) d_i h(Y(s))] e^-s ds,
//   Y(s) = e^-s Y + sqrt(1 - e^-2s) Y'
//
// estimated by Monte Carlo over (Y, Y') pairs with a per-sample Simpson
// quadrature in s, and compared against the closed-form variance.

enum class TestFunction : std::uint8_t { linear, square, product, cubic };

const char* to_string(TestFunction h);

struct SelfTestReport {
  std::string h;
  int dim = 0;
  std::int64_t n_samples = 0;
  double s_max = 0.0;
  double exact = 0.0;     // closed-form Var h(Y)
  double estimate = 0.0;  // quadrature estimate
  double se = 0.0;        // standard error over samples
  double tail = 0.0;      // allowance for the truncated s > s_max tail
  bool pass = false;      // |estimate - exact| <= 3 se + tail
};

// s_grid must start at 0 and be uniform with an odd point count (Simpson);
// default is 601 uniform points on [0, 15]. dim >= 2 (the product function
// needs two coordinates).
SelfTestReport gaussian_identity_selftest(TestFunction h, int dim,
                                          std::int64_t n_samples,
                                          std::uint64_t seed,
                                          std::span<const double> s_grid = {});

// ---------------------------------------------------------------------------
// Variance lower bound for the two-replica energy difference

struct LhsReport {
  std::string ensemble;
  int d = 0;
  int L = 0;
  std::uint64_t seed = 0;
  int n_requested = 0;
  int n_real = 0;        // kept realizations
  int n_degenerate = 0;  // discarded (a solve had a degenerate minimum)
  double var = 0.0;      // Var of dh = H(sigma1) - H(sigma2), raw couplings
  double se = 0.0;       // jackknife SE of the variance
  double mean_dh = 0.0;
  double mean_one_minus_q = 0.0;  // replica incongruence E[1 - Q(s1, s2)]
  double se_one_minus_q = 0.0;
  // pa bookkeeping: dh differs from the solved energy gap E_P - E_AP by the
  // flipped-wrap term, recorded so the identity dh = ep - eap + wrap is
  // checkable from the report
  double mean_ep = 0.0;
  double mean_eap = 0.0;
  double mean_wrap = 0.0;
};

LhsReport lhs_variance(EnsembleKind kind, int d, int L, int n_real,
                       std::uint64_t seed,
                       SolveMethod method = SolveMethod::automatic,
                       int workers = 1);

struct RhsReport {
  std::string ensemble;
  int d = 0;
  int L = 0;
  std::uint64_t seed = 0;
  double t = 0.0;  // interpolation horizon
  int n_requested = 0;
  int n_real = 0;
  int n_degenerate = 0;
  std::int64_t n_edges = 0;  // |interior edge set|, the prefactor is 2x this
  double value = 0.0;        // the integral bound
  double se = 0.0;           // jackknife SE
  std::vector<double> s;            // quadrature grid, s[0] = 0, back() = t
  double mean_one_minus_q12 = 0.0;  // E[1 - Q(sigma1, sigma2)], s-independent
  std::vector<double> b1;           // E[1 - Q(sigma1(0), sigma1(s))]
  std::vector<double> b2;           // same for replica 2
  // gradient-alignment diagnostic: MC mean over realizations of
  // sum_e (s1_e(s) - s2_e(s)) (s1_e(0) - s2_e(0)) must not be
  // significantly negative at any s
  std::vector<double> grad_mean;
  std::vector<double> grad_se;
  bool grad_nonneg = false;  // all s: grad_mean >= -3 grad_se
};

// quadrature grid {0} then log-spaced from t * 1e-4 to t; n >= 8 total
std::vector<double> default_s_grid(double t, int n = 21);

// right-hand side 2 |edges| int_0^t { E[1-Q12] - sqrt(2 E[1-Q1(s)])
// - sqrt(2 E[1-Q2(s)]) } e^-s ds with the square roots applied to Monte
// Carlo means. s_grid must start at 0 and end at t.
RhsReport rhs_bound(EnsembleKind kind, int d, int L, double t, int n_real,
                    std::uint64_t seed, std::span<const double> s_grid = {},
                    SolveMethod method = SolveMethod::automatic,
                    int workers = 1);

struct BoundVerdict {
  double lhs = 0.0;
  double lhs_se = 0.0;
  double rhs = 0.0;
  double rhs_se = 0.0;
  // "holds_trivially" (rhs <= 0), "holds" (lhs - 2se above rhs + 2se),
  // "violated" (lhs + 2se below rhs - 2se), else "consistent"
  std::string verdict;
};

BoundVerdict bound_verdict(const LhsReport& lhs, const RhsReport& rhs);

// ---------------------------------------------------------------------------
// Single-edge version of the bound
//
// Only J_b moves along the path. The constrained minimizers flanking edge b
// do not depend on J_b, so the ground-state edge value is sign(J_b(s) - C_b)
// with a per-replica crossing level C_b computed once; the whole path is
// then analytic in s.

struct SingleEdgeReport {
  std::string ensemble;
  int d = 0;
  int L = 0;
  std::int32_t edge = -1;
  std::uint64_t seed = 0;
  double t = 0.0;
  int n_requested = 0;
  int n_real = 0;
  int n_degenerate = 0;
  double lhs = 0.0;  // Var of J_b (s1_b - s2_b)
  double lhs_se = 0.0;
  double rhs = 0.0;  // 2 int_0^t { E[1 - s1 s2] - sum_i sqrt(2 E[1-rho_i]) }
  double rhs_se = 0.0;
  std::string verdict;
  // distribution of the constancy window: first s where the edge value
  // under replica 1 departs from its s = 0 value, censored at t
  double window_q05 = 0.0;
  double window_q50 = 0.0;
  double window_q95 = 0.0;
  double frac_constant = 0.0;  // fraction with no change on [0, t]
};

SingleEdgeReport single_edge_bound(EnsembleKind kind, int d, int L,
                                   std::int32_t edge, double t, int n_real,
                                   std::uint64_t seed,
                                   std::span<const double> s_grid = {},
                                   SolveMethod method = SolveMethod::automatic,
                                   int workers = 1);

// ---------------------------------------------------------------------------
// Stiffness: X(L) = E_plain - E_antiperiodic across sizes

struct StiffnessScan {
  int d = 0;
  std::vector<int> sizes;
  std::string topology;  // lattice topology used (per size, same pattern)
  std::uint64_t seed = 0;
  int n_real = 0;
  std::vector<double> var_x;  // per size
  std::vector<double> se_var;
  std::vector<double> mean_abs_x;
  std::vector<int> degenerate;
  ExponentFit two_theta;      // slope of ln Var X vs ln L, i.e. 2 theta
  std::vector<double> ratio;  // Var X / L^(d-1)
  TrendTest trend;            // Mann-Kendall on ratio across sizes
};

// d = 1: periodic ring, plain vs antiperiodic wrap. d = 2: axis 0 open,
// axis 1 periodic; plain wrap vs flipped wrap on axis 1.
StiffnessScan stiffness_scan(int d, std::span<const int> sizes, int n_real,
                             std::uint64_t seed,
                             SolveMethod method = SolveMethod::automatic,
                             int workers = 1);

// ---------------------------------------------------------------------------
// Metric sanity: d(a, b) = sqrt(2 - 2 Q(a, b)) is a true metric on edge
// configurations, so random triples must satisfy the triangle inequality
// up to floating-point rounding.

struct TriangleReport {
  std::int64_t n_triples = 0;
  double worst_slack = 0.0;  // max over triples of d(a,c) - d(a,b) - d(b,c)
  bool pass = false;
};

TriangleReport triangle_check(const BoxLattice& lat, std::int64_t n_triples,
                              std::uint64_t seed, double tol = 1e-12);

}  // namespace ea
