#include "ealab/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <limits>
#include <map>
#include <stdexcept>

#include "ealab/chaos.hpp"
#include "ealab/excitation.hpp"
#include "ealab/io.hpp"
#include "ealab/parallel.hpp"
#include "ealab/rng.hpp"
#include "ealab/svg.hpp"
#include "ealab/variance.hpp"
#include "ealab/version.hpp"

#include "json.hpp"

namespace ea {

namespace {

using nlohmann::json;

std::string now_iso() {
  const std::time_t tt =
      std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&tt, &tm);
  char buf[40];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

SolveMethod method_of(const std::string& name) {
  if (name == "enumeration") return SolveMethod::enumeration;
  if (name == "dp") return SolveMethod::column_dp;
  return SolveMethod::automatic;
}

BcSpec bc_spec_of(const ExperimentConfig& cfg) {
  BcSpec spec;
  if (cfg.bc == "free") spec.kind = BcKind::free_bc;
  else if (cfg.bc == "periodic") spec.kind = BcKind::periodic_bc;
  else if (cfg.bc == "antiperiodic") spec.kind = BcKind::antiperiodic_bc;
  else spec.kind = BcKind::fixed_bc;
  spec.ap_axis = cfg.ap_axis;
  return spec;
}

std::string path_in(const RunManifest& m, const std::string& name) {
  return m.out_dir + "/" + name;
}

void emit(RunManifest& m, const std::string& name, const std::string& body) {
  io::write_file(path_in(m, name), body);
  m.outputs.push_back(name);
}

json fit_json(const ExponentFit& f) {
  json j;
  j["value"] = f.value;
  j["se"] = f.se;
  j["r2"] = f.r2;
  j["sizes"] = f.sizes;
  j["method"] = f.method;
  return j;
}

json relation_json(const RelationReport& r) {
  json j;
  j["d"] = r.d;
  auto est = [](const EstimateSE& e) {
    return json{{"value", e.value}, {"se", e.se}};
  };
  j["alpha"] = est(r.alpha);
  j["gamma"] = est(r.gamma);
  j["xi"] = est(r.xi);
  j["theta"] = est(r.theta);
  j["df"] = est(r.df);
  j["checks"] = json::array();
  for (const RelationCheck& c : r.checks)
    j["checks"].push_back({{"relation", c.relation},
                           {"lhs", c.lhs},
                           {"lhs_se", c.lhs_se},
                           {"rhs", c.rhs},
                           {"rhs_se", c.rhs_se},
                           {"verdict", c.verdict}});
  return j;
}

void write_histogram_csv(RunManifest& m, const ExperimentConfig& cfg,
                         const std::map<std::int64_t, std::int64_t>& counts,
                         int L) {
  io::CsvWriter w({"size", "count"});
  w.meta("kind", std::string("droplet_boundary_histogram"));
  w.meta("config_hash", io::fmt_hex(config_hash(cfg)));
  w.meta("L", std::int64_t(L));
  for (const auto& [size, count] : counts) {
    if (size <= 0 || count <= 0) continue;
    const std::string cells[] = {std::to_string(size), std::to_string(count)};
    w.add_row(cells);
  }
  emit(m, "droplet_hist.csv", w.str());
}

// --------------------------------------------------------------------------
// experiment bodies

void run_gs(const ExperimentConfig& cfg, RunManifest& m) {
  const SolveMethod method = method_of(cfg.method);
  const BcSpec spec = bc_spec_of(cfg);
  const Topology topo = topology_from_string(cfg.topology);
  const BoxLattice lat = BoxLattice::build(cfg.d, cfg.sizes[0], topo);

  struct Slot {
    std::uint64_t seed;
    GroundStateResult g;
    BoundaryCondition bc;
  };
  std::vector<Slot> slot(static_cast<std::size_t>(cfg.n_real));
  parallel_for(cfg.n_real, cfg.workers, [&](int r) {
    const std::uint64_t sr =
        rng::derive_seed(cfg.seed, rng::stream_couplings, std::uint64_t(r));
    const CouplingField j = sample_couplings(lat, sr);
    const BoundaryCondition bc = realize_bc(spec, lat, cfg.seed, r);
    slot[std::size_t(r)] = {sr, solve(lat, j, bc, method), bc};
  });

  io::CsvWriter w({"realization", "seed", "energy", "gap", "degenerate",
                   "solver", "config"});
  w.meta("kind", std::string("gs"));
  w.meta("config_hash", io::fmt_hex(config_hash(cfg)));
  w.meta("d", std::int64_t(cfg.d));
  w.meta("L", std::int64_t(cfg.sizes[0]));
  w.meta("topology", lat.topology_string());
  w.meta("bc", slot[0].bc.label());
  w.meta("master_seed", cfg.seed);
  for (int r = 0; r < cfg.n_real; ++r) {
    const Slot& s = slot[std::size_t(r)];
    if (s.g.degenerate) ++m.degenerate_discarded;
    const std::string cells[] = {
        std::to_string(r),        std::to_string(s.seed),
        io::fmt(s.g.energy),      io::fmt(s.g.gap),
        s.g.degenerate ? "1" : "0", s.g.solver,
        s.g.config.bits()};
    w.add_row(cells);
  }
  emit(m, "gs.csv", w.str());
  emit(m, "gs.json",
       io::groundstate_json(lat, slot[0].bc, slot[0].seed, slot[0].g));

  const CouplingField j0 = sample_couplings(lat, slot[0].seed);
  save_couplings(j0, path_in(m, "couplings_0.csv"));
  m.outputs.push_back("couplings_0.csv");
}

void run_droplet(const ExperimentConfig& cfg, RunManifest& m) {
  const SolveMethod method = method_of(cfg.method);
  const BcSpec spec = bc_spec_of(cfg);
  const Topology topo = topology_from_string(cfg.topology);
  const int L = cfg.sizes[0];
  const BoxLattice lat = BoxLattice::build(cfg.d, L, topo);
  const int ne = int(lat.edge_count());

  struct Slot {
    std::uint64_t seed = 0;
    std::vector<DropletReport> reps;
    int discarded = 0;
  };
  std::vector<Slot> slot(static_cast<std::size_t>(cfg.n_real));
  parallel_for(cfg.n_real, cfg.workers, [&](int r) {
    Slot& s = slot[std::size_t(r)];
    s.seed = rng::derive_seed(cfg.seed, rng::stream_couplings, std::uint64_t(r));
    const CouplingField j = sample_couplings(lat, s.seed);
    const BoundaryCondition bc = realize_bc(spec, lat, cfg.seed, r);
    for (int e = 0; e < ne; ++e) {
      DropletReport rep = critical_droplet(lat, j, bc, e, method);
      if (rep.flex.degenerate) {
        ++s.discarded;
        continue;
      }
      s.reps.push_back(std::move(rep));
    }
  });

  io::CsvWriter w(io::droplet_columns());
  w.meta("kind", std::string("droplet"));
  w.meta("config_hash", io::fmt_hex(config_hash(cfg)));
  w.meta("topology", lat.topology_string());
  w.meta("master_seed", cfg.seed);
  w.meta("n_real", std::int64_t(cfg.n_real));
  const std::string bc_label = realize_bc(spec, lat, cfg.seed, 0).label();
  std::map<std::int64_t, std::int64_t> hist;
  for (const Slot& s : slot) {
    io::droplet_rows(w, s.seed, cfg.d, L, bc_label, s.reps);
    m.degenerate_discarded += s.discarded;
    for (const DropletReport& rep : s.reps)
      ++hist[std::int64_t(rep.boundary.size())];
  }
  emit(m, "droplets.csv", w.str());
  write_histogram_csv(m, cfg, hist, L);

  if (!cfg.deltas.empty()) {
    const FlexibilityHistogram fh = flexibility_histogram(
        cfg.d, L, topo, spec, cfg.n_real, cfg.deltas,
        rng::derive_seed(cfg.seed, rng::stream_misc, 0x5000), method,
        cfg.workers);
    m.degenerate_discarded += fh.n_degenerate;
    io::CsvWriter fw({"delta", "p_hat", "se", "bound", "asserted", "pass",
                      "exact_1d"});
    fw.meta("kind", std::string("flexibility"));
    fw.meta("config_hash", io::fmt_hex(config_hash(cfg)));
    fw.meta("n_samples", fh.n_samples);
    for (std::size_t i = 0; i < fh.delta.size(); ++i) {
      const std::string cells[] = {
          io::fmt(fh.delta[i]),  io::fmt(fh.p_hat[i]),
          io::fmt(fh.se[i]),     io::fmt(fh.bound[i]),
          fh.asserted[i] ? "1" : "0", fh.pass[i] ? "1" : "0",
          fh.exact.empty() ? "" : io::fmt(fh.exact[i])};
      fw.add_row(cells);
    }
    emit(m, "flexibility.csv", fw.str());
    if (!fh.all_pass) m.exit_code = 1;  // density bound is an invariant
  }
}

void write_curve_csv(RunManifest& m, const ExperimentConfig& cfg,
                     const ChaosCurve& c) {
  io::CsvWriter w({"t", "mean_q", "se_q", "q05", "q50", "q95"});
  w.meta("kind", std::string("chaos_curve"));
  w.meta("config_hash", io::fmt_hex(config_hash(cfg)));
  w.meta("d", std::int64_t(c.d));
  w.meta("L", std::int64_t(c.L));
  w.meta("topology", c.topology);
  w.meta("bc", c.bc_label);
  w.meta("seed", c.seed);
  w.meta("n_real", std::int64_t(c.n_real));
  w.meta("n_degenerate", std::int64_t(c.n_degenerate));
  for (std::size_t k = 0; k < c.t.size(); ++k) {
    const std::string cells[] = {io::fmt(c.t[k]),   io::fmt(c.mean_q[k]),
                                 io::fmt(c.se_q[k]), io::fmt(c.q05[k]),
                                 io::fmt(c.q50[k]),  io::fmt(c.q95[k])};
    w.add_row(cells);
  }
  emit(m, "chaos_L" + std::to_string(c.L) + ".csv", w.str());
}

void run_chaos(const ExperimentConfig& cfg, RunManifest& m) {
  const SolveMethod method = method_of(cfg.method);
  const BcSpec spec = bc_spec_of(cfg);
  const Topology topo = topology_from_string(cfg.topology);
  const std::vector<double> grid =
      cfg.t_grid.empty() ? default_chaos_grid() : cfg.t_grid;

  std::vector<ChaosCurve> curves;
  for (std::size_t i = 0; i < cfg.sizes.size(); ++i) {
    const std::uint64_t si =
        rng::derive_seed(cfg.seed, rng::stream_misc, 0x10000 + i);
    curves.push_back(chaos_curve(cfg.d, cfg.sizes[i], topo, spec, grid,
                                 cfg.n_real, si, method, cfg.workers));
    m.degenerate_discarded += curves.back().n_degenerate;
    write_curve_csv(m, cfg, curves.back());
  }

  json out;
  out["schema_version"] = schema_version;
  out["artifact_version"] = artifact_version;
  out["config_hash"] = io::fmt_hex(config_hash(cfg));
  out["d"] = cfg.d;
  out["sizes"] = cfg.sizes;
  out["eps"] = cfg.eps;

  out["adc"] = json::array();
  std::vector<std::pair<int, double>> thresholds;
  bool alpha_ok = true;
  for (const ChaosCurve& c : curves) {
    const AdcThreshold a = adc_threshold(c, cfg.eps);
    out["adc"].push_back({{"L", c.L},
                          {"t_star", a.t_star},
                          {"first_point_fails", a.first_point_fails}});
    thresholds.emplace_back(c.L, a.t_star);
    if (a.first_point_fails || !(a.t_star > 0.0)) alpha_ok = false;
  }

  EstimateSE alpha{}, gamma{}, xi{}, df{};
  bool have_fits = false;
  if (cfg.sizes.size() >= 3 && alpha_ok) {
    const ExponentFit af = fit_alpha(thresholds, cfg.d);
    out["alpha"] = fit_json(af);
    alpha = {af.value, af.se};
    have_fits = true;
  } else {
    out["alpha"] = nullptr;
    out["alpha_skipped"] =
        cfg.sizes.size() < 3 ? "needs at least 3 sizes"
                             : "a size decorrelates below the first grid time";
  }

  if (cfg.sizes.size() >= 3) {
    const DropletScan scan = droplet_size_scan(cfg.d, cfg.sizes, topo, spec,
                                               cfg.n_real, cfg.seed, method,
                                               cfg.workers);
    for (int dd : scan.degenerate) m.degenerate_discarded += dd;
    io::CsvWriter w({"L", "mean_max", "se_max", "mean_size", "se_size",
                     "degenerate"});
    w.meta("kind", std::string("droplet_scan"));
    w.meta("config_hash", io::fmt_hex(config_hash(cfg)));
    w.meta("topology", scan.topology);
    w.meta("bc", scan.bc_label);
    w.meta("master_seed", cfg.seed);
    for (std::size_t i = 0; i < scan.sizes.size(); ++i) {
      const std::string cells[] = {std::to_string(scan.sizes[i]),
                                   io::fmt(scan.mean_max[i]),
                                   io::fmt(scan.se_max[i]),
                                   io::fmt(scan.mean_size[i]),
                                   io::fmt(scan.se_size[i]),
                                   std::to_string(scan.degenerate[i])};
      w.add_row(cells);
    }
    emit(m, "droplet_scan.csv", w.str());
    out["gamma"] = fit_json(scan.gamma);
    out["df"] = fit_json(scan.df);
    gamma = {scan.gamma.value, scan.gamma.se};
    df = {scan.df.value, scan.df.se};

    std::map<std::int64_t, std::int64_t> hist;
    const std::vector<std::int64_t>& counts = scan.size_counts.back();
    for (std::size_t sz = 1; sz < counts.size(); ++sz)
      if (counts[sz] > 0) hist[std::int64_t(sz)] = counts[sz];
    write_histogram_csv(m, cfg, hist, scan.sizes.back());

    const CollapseFit col = collapse_fit(curves);
    json cj;
    cj["xi"] = col.xi;
    cj["objective"] = col.objective;
    cj["flat"] = col.flat;
    cj["sizes"] = col.sizes;
    cj["t"] = col.t;
    cj["ell_c"] = col.ell_c;
    out["collapse"] = cj;
    xi = {col.xi, 0.0};

    if (have_fits && !col.flat) {
      const RelationReport rel = relation_report(
          cfg.d, alpha, gamma, xi,
          {std::numeric_limits<double>::quiet_NaN(), 0.0}, df);
      out["relations"] = relation_json(rel);
    } else {
      out["relations"] = nullptr;
    }
  } else {
    out["gamma"] = nullptr;
    out["df"] = nullptr;
    out["collapse"] = nullptr;
    out["relations"] = nullptr;
  }
  emit(m, "chaos.json", out.dump(2) + "\n");
}

void run_variance(const ExperimentConfig& cfg, RunManifest& m) {
  const SolveMethod method = method_of(cfg.method);
  const EnsembleKind kind = ensemble_from_string(cfg.ensemble);
  const int L = cfg.sizes[0];

  const LhsReport lhs =
      lhs_variance(kind, cfg.d, L, cfg.n_real, cfg.seed, method, cfg.workers);
  const std::vector<double> sgrid = default_s_grid(cfg.t, cfg.n_s);
  const RhsReport rhs = rhs_bound(kind, cfg.d, L, cfg.t, cfg.n_real, cfg.seed,
                                  sgrid, method, cfg.workers);
  m.degenerate_discarded += lhs.n_degenerate + rhs.n_degenerate;
  const BoundVerdict v = bound_verdict(lhs, rhs);

  const BoxLattice lat = BoxLattice::build(cfg.d, L, ensemble_topology(kind));
  const TriangleReport tri = triangle_check(
      lat, 10000, rng::derive_seed(cfg.seed, rng::stream_misc, 0x7000));

  json out;
  out["schema_version"] = schema_version;
  out["artifact_version"] = artifact_version;
  out["config_hash"] = io::fmt_hex(config_hash(cfg));
  out["ensemble"] = lhs.ensemble;
  out["d"] = cfg.d;
  out["L"] = L;
  out["t"] = cfg.t;
  out["seed"] = cfg.seed;
  out["lhs"] = {{"var", lhs.var},
                {"se", lhs.se},
                {"mean_dh", lhs.mean_dh},
                {"mean_one_minus_q", lhs.mean_one_minus_q},
                {"se_one_minus_q", lhs.se_one_minus_q},
                {"mean_ep", lhs.mean_ep},
                {"mean_eap", lhs.mean_eap},
                {"mean_wrap", lhs.mean_wrap},
                {"n_real", lhs.n_real},
                {"n_degenerate", lhs.n_degenerate}};
  out["rhs"] = {{"value", rhs.value},
                {"se", rhs.se},
                {"n_edges", rhs.n_edges},
                {"mean_one_minus_q12", rhs.mean_one_minus_q12},
                {"n_real", rhs.n_real},
                {"n_degenerate", rhs.n_degenerate},
                {"grad_nonneg", rhs.grad_nonneg}};
  out["verdict"] = v.verdict;
  out["triangle"] = {{"n_triples", tri.n_triples},
                     {"worst_slack", tri.worst_slack},
                     {"pass", tri.pass}};

  io::CsvWriter w({"s", "one_minus_q1", "one_minus_q2", "grad_mean",
                   "grad_se"});
  w.meta("kind", std::string("bound_integrand"));
  w.meta("config_hash", io::fmt_hex(config_hash(cfg)));
  w.meta("mean_one_minus_q12", rhs.mean_one_minus_q12);
  for (std::size_t k = 0; k < rhs.s.size(); ++k) {
    const std::string cells[] = {io::fmt(rhs.s[k]), io::fmt(rhs.b1[k]),
                                 io::fmt(rhs.b2[k]), io::fmt(rhs.grad_mean[k]),
                                 io::fmt(rhs.grad_se[k])};
    w.add_row(cells);
  }
  emit(m, "bound_integrand.csv", w.str());

  if (cfg.edge >= 0) {
    const SingleEdgeReport se = single_edge_bound(
        kind, cfg.d, L, cfg.edge, cfg.t, cfg.n_real,
        rng::derive_seed(cfg.seed, rng::stream_misc, 0x7100), sgrid, method,
        cfg.workers);
    m.degenerate_discarded += se.n_degenerate;
    out["single_edge"] = {{"edge", se.edge},
                          {"lhs", se.lhs},
                          {"lhs_se", se.lhs_se},
                          {"rhs", se.rhs},
                          {"rhs_se", se.rhs_se},
                          {"verdict", se.verdict},
                          {"window_q05", se.window_q05},
                          {"window_q50", se.window_q50},
                          {"window_q95", se.window_q95},
                          {"frac_constant", se.frac_constant},
                          {"n_real", se.n_real},
                          {"n_degenerate", se.n_degenerate}};
    if (se.verdict == "violated") m.exit_code = 1;
  }
  emit(m, "variance.json", out.dump(2) + "\n");

  if (v.verdict == "violated" || !rhs.grad_nonneg || !tri.pass)
    m.exit_code = 1;
}

void run_stiffness(const ExperimentConfig& cfg, RunManifest& m) {
  const SolveMethod method = method_of(cfg.method);
  const StiffnessScan scan = stiffness_scan(cfg.d, cfg.sizes, cfg.n_real,
                                            cfg.seed, method, cfg.workers);
  for (int dd : scan.degenerate) m.degenerate_discarded += dd;

  io::CsvWriter w({"L", "var_x", "se_var", "mean_abs_x", "ratio",
                   "degenerate"});
  w.meta("kind", std::string("stiffness"));
  w.meta("config_hash", io::fmt_hex(config_hash(cfg)));
  w.meta("d", std::int64_t(cfg.d));
  w.meta("topology", scan.topology);
  w.meta("master_seed", cfg.seed);
  w.meta("n_real", std::int64_t(cfg.n_real));
  for (std::size_t i = 0; i < scan.sizes.size(); ++i) {
    const std::string cells[] = {std::to_string(scan.sizes[i]),
                                 io::fmt(scan.var_x[i]),
                                 io::fmt(scan.se_var[i]),
                                 io::fmt(scan.mean_abs_x[i]),
                                 io::fmt(scan.ratio[i]),
                                 std::to_string(scan.degenerate[i])};
    w.add_row(cells);
  }
  emit(m, "stiffness.csv", w.str());

  json out;
  out["schema_version"] = schema_version;
  out["artifact_version"] = artifact_version;
  out["config_hash"] = io::fmt_hex(config_hash(cfg));
  out["d"] = cfg.d;
  out["sizes"] = scan.sizes;
  out["two_theta"] = fit_json(scan.two_theta);
  out["theta"] = scan.two_theta.value * 0.5;
  out["trend"] = {{"s", scan.trend.s},
                  {"z", scan.trend.z},
                  {"increasing", scan.trend.increasing}};
  emit(m, "stiffness.json", out.dump(2) + "\n");
}

void run_window(const ExperimentConfig& cfg, RunManifest& m) {
  const SolveMethod method = method_of(cfg.method);
  const BcSpec spec = bc_spec_of(cfg);
  const Topology topo = topology_from_string(cfg.topology);
  const BoxLattice lat = BoxLattice::build(cfg.d, cfg.sizes[0], topo);
  if (cfg.edge >= lat.edge_count())
    throw std::invalid_argument("config key 'edge': out of range");

  const CouplingField j = sample_couplings(
      lat, rng::derive_seed(cfg.seed, rng::stream_couplings, 0));
  const CouplingField jp = sample_couplings(
      lat, rng::derive_seed(cfg.seed, rng::stream_couplings_prime, 0));
  const BoundaryCondition bc = realize_bc(spec, lat, cfg.seed, 0);

  const std::int32_t edges[] = {cfg.edge};
  const Region window = window_of_edges(lat, edges);
  const WindowEnergyVector wv = window_energy_vector(lat, j, bc, window, method);
  const DropletReport drop = critical_droplet(lat, j, bc, cfg.edge, method);
  const InterpolationPath path{&j, &jp, {}};
  const std::vector<double> crossings = crossing_times(wv, path, cfg.t_max);

  json out;
  out["schema_version"] = schema_version;
  out["artifact_version"] = artifact_version;
  out["config_hash"] = io::fmt_hex(config_hash(cfg));
  out["d"] = cfg.d;
  out["L"] = cfg.sizes[0];
  out["topology"] = lat.topology_string();
  out["bc"] = bc.label();
  out["seed"] = cfg.seed;
  out["edge"] = cfg.edge;
  out["window_vertices"] = wv.window.vertices();
  out["window_edges"] = wv.window_edges;
  out["bound"] = wv.bound;
  out["entries"] = json::array();
  for (const auto& e : wv.entries)
    out["entries"].push_back({{"edge_bits", e.edge_bits},
                              {"outside", e.outside},
                              {"lift_bits", e.lift_bits}});
  out["crossings"] = crossings;
  out["t_max"] = cfg.t_max;
  out["droplet"] = {{"f", drop.flex.f},
                    {"c", drop.flex.c},
                    {"ground_sign", drop.flex.ground_sign},
                    {"degenerate", drop.flex.degenerate},
                    {"boundary_size", drop.boundary.size()},
                    {"region_size", drop.region.size()}};
  if (drop.flex.degenerate) m.degenerate_discarded += 1;
  emit(m, "window.json", out.dump(2) + "\n");
}

void run_selftest(const ExperimentConfig& cfg, RunManifest& m) {
  json out;
  out["schema_version"] = schema_version;
  out["artifact_version"] = artifact_version;
  out["config_hash"] = io::fmt_hex(config_hash(cfg));
  bool all_pass = true;

  out["gaussian"] = json::array();
  for (TestFunction h : {TestFunction::linear, TestFunction::square,
                         TestFunction::product, TestFunction::cubic}) {
    const SelfTestReport r =
        gaussian_identity_selftest(h, 4, cfg.n_samples, cfg.seed);
    out["gaussian"].push_back({{"h", r.h},
                               {"exact", r.exact},
                               {"estimate", r.estimate},
                               {"se", r.se},
                               {"tail", r.tail},
                               {"pass", r.pass}});
    all_pass = all_pass && r.pass;
  }

  // the two solvers must agree on small instances, constrained or not
  int mismatches = 0;
  double max_diff = 0.0;
  const int n_inst = 24;
  for (int i = 0; i < n_inst; ++i) {
    BoxLattice lat = [&] {
      if (i % 2 == 0) {
        const int L = 6 + (i / 2) % 5;
        return BoxLattice::build(1, L,
                                 i % 4 == 0 ? Topology::periodic
                                            : Topology::open);
      }
      const int L = 3 + (i / 2) % 2;
      return BoxLattice::build(2, L,
                               i % 4 == 1 ? Topology::open
                                          : Topology::periodic);
    }();
    const CouplingField j = sample_couplings(
        lat, rng::derive_seed(cfg.seed, rng::stream_misc, 0x200 + i));
    const BoundaryCondition bc = BoundaryCondition::free();
    const GroundStateResult a = solve(lat, j, bc, SolveMethod::enumeration);
    const GroundStateResult b = solve(lat, j, bc, SolveMethod::column_dp);
    SolveConstraint con;
    con.edge = SolveConstraint::EdgeValue{0, -1};
    const GroundStateResult ca =
        constrained_solve(lat, j, bc, con, SolveMethod::enumeration);
    const GroundStateResult cb =
        constrained_solve(lat, j, bc, con, SolveMethod::column_dp);
    const double diff = std::max(std::abs(a.energy - b.energy),
                                 std::abs(ca.energy - cb.energy));
    max_diff = std::max(max_diff, diff);
    if (diff > 1e-12 || a.degenerate != b.degenerate) ++mismatches;
  }
  out["solver_crosscheck"] = {{"instances", n_inst},
                              {"mismatches", mismatches},
                              {"max_energy_diff", max_diff}};
  all_pass = all_pass && mismatches == 0;

  const BoxLattice tl = BoxLattice::build(2, 4, Topology::periodic);
  const TriangleReport tri = triangle_check(
      tl, 1000, rng::derive_seed(cfg.seed, rng::stream_misc, 0x300));
  out["triangle"] = {{"n_triples", tri.n_triples},
                     {"worst_slack", tri.worst_slack},
                     {"pass", tri.pass}};
  all_pass = all_pass && tri.pass;

  out["all_pass"] = all_pass;
  emit(m, "selftest.json", out.dump(2) + "\n");
  if (!all_pass) m.exit_code = 1;
}

}  // namespace

std::vector<std::string> emit_plots(const RunManifest& m) {
  auto has = [&](const std::string& name) {
    return std::find(m.outputs.begin(), m.outputs.end(), name) !=
           m.outputs.end();
  };
  std::vector<std::string> wrote;
  auto save = [&](const std::string& name, const std::string& body) {
    io::write_file(path_in(m, name), body);
    wrote.push_back(name);
  };

  if (m.kind == "chaos") {
    std::vector<std::string> curve_files;
    for (const std::string& f : m.outputs)
      if (f.rfind("chaos_L", 0) == 0 && f.size() > 4 &&
          f.compare(f.size() - 4, 4, ".csv") == 0)
        curve_files.push_back(f);
    std::sort(curve_files.begin(), curve_files.end());
    if (curve_files.empty())
      throw std::runtime_error(
          "manifest lists no chaos_L<L>.csv curves to plot");

    svg::LinePlot qt;
    qt.title = "edge overlap vs interpolation time";
    qt.xlabel = "t";
    qt.ylabel = "mean Q";
    qt.logx = true;
    struct CurveData {
      int L = 0;
      std::vector<double> t, q;
    };
    std::vector<CurveData> data;
    for (const std::string& f : curve_files) {
      const io::CsvTable tab = io::parse_csv(io::read_file(path_in(m, f)));
      const int ct = tab.col("t"), cq = tab.col("mean_q"),
                cs = tab.col("se_q");
      if (ct < 0 || cq < 0) throw std::runtime_error("bad curve csv: " + f);
      svg::Series s;
      CurveData cd;
      const std::string* lmeta = tab.find_meta("L");
      s.label = "L=" + (lmeta ? *lmeta : std::string("?"));
      cd.L = lmeta ? std::atoi(lmeta->c_str()) : 0;
      for (const auto& row : tab.rows) {
        s.x.push_back(std::atof(row[std::size_t(ct)].c_str()));
        s.y.push_back(std::atof(row[std::size_t(cq)].c_str()));
        if (cs >= 0) s.yerr.push_back(std::atof(row[std::size_t(cs)].c_str()));
      }
      cd.t = s.x;
      cd.q = s.y;
      data.push_back(std::move(cd));
      qt.series.push_back(std::move(s));
    }
    save("qt.svg", qt.render());

    if (has("chaos.json")) {
      const json cj = json::parse(io::read_file(path_in(m, "chaos.json")));
      if (cj.contains("collapse") && cj["collapse"].is_object() &&
          !cj["collapse"]["flat"].get<bool>()) {
        const double xi = cj["collapse"]["xi"].get<double>();
        svg::LinePlot cp;
        cp.title = "overlap collapse";
        cp.xlabel = "L t^(1/(2 xi))";
        cp.ylabel = "mean Q";
        cp.logx = true;
        for (std::size_t i = 0; i < data.size(); ++i) {
          svg::Series s;
          s.label = qt.series[i].label;
          for (std::size_t k = 0; k < data[i].t.size(); ++k) {
            if (!(data[i].t[k] > 0.0)) continue;
            s.x.push_back(double(data[i].L) *
                          std::pow(data[i].t[k], 1.0 / (2.0 * xi)));
            s.y.push_back(data[i].q[k]);
          }
          cp.series.push_back(std::move(s));
        }
        save("collapse.svg", cp.render());
      }
    }
    if (has("droplet_hist.csv")) {
      const io::CsvTable tab =
          io::parse_csv(io::read_file(path_in(m, "droplet_hist.csv")));
      svg::Histogram hist;
      hist.title = "critical droplet boundary sizes";
      hist.xlabel = "boundary size";
      hist.ylabel = "count";
      const int cv = tab.col("size"), cc = tab.col("count");
      for (const auto& row : tab.rows)
        hist.bars.emplace_back(std::atof(row[std::size_t(cv)].c_str()),
                               std::atof(row[std::size_t(cc)].c_str()));
      save("droplet_hist.svg", hist.render());
    }
    return wrote;
  }

  if (m.kind == "stiffness") {
    if (!has("stiffness.csv"))
      throw std::runtime_error("manifest lists no stiffness.csv to plot");
    const io::CsvTable tab =
        io::parse_csv(io::read_file(path_in(m, "stiffness.csv")));
    svg::LinePlot p;
    p.title = "interface energy variance vs size";
    p.xlabel = "L";
    p.ylabel = "Var X";
    p.logx = true;
    p.logy = true;
    svg::Series s;
    s.label = "Var X";
    const int cl = tab.col("L"), cv = tab.col("var_x"), ce = tab.col("se_var");
    for (const auto& row : tab.rows) {
      s.x.push_back(std::atof(row[std::size_t(cl)].c_str()));
      s.y.push_back(std::atof(row[std::size_t(cv)].c_str()));
      if (ce >= 0) s.yerr.push_back(std::atof(row[std::size_t(ce)].c_str()));
    }
    p.series.push_back(std::move(s));
    save("varx.svg", p.render());
    return wrote;
  }

  if (m.kind == "droplet") {
    if (!has("droplet_hist.csv"))
      throw std::runtime_error("manifest lists no droplet_hist.csv to plot");
    const io::CsvTable tab =
        io::parse_csv(io::read_file(path_in(m, "droplet_hist.csv")));
    svg::Histogram hist;
    hist.title = "critical droplet boundary sizes";
    hist.xlabel = "boundary size";
    hist.ylabel = "count";
    const int cv = tab.col("size"), cc = tab.col("count");
    for (const auto& row : tab.rows)
      hist.bars.emplace_back(std::atof(row[std::size_t(cv)].c_str()),
                             std::atof(row[std::size_t(cc)].c_str()));
    save("droplet_hist.svg", hist.render());
    return wrote;
  }

  throw std::runtime_error("kind '" + m.kind + "' produces no plots");
}

RunManifest run(const ExperimentConfig& cfg) {
  validate(cfg);
  std::filesystem::create_directories(cfg.out);

  RunManifest m;
  m.kind = cfg.kind;
  m.out_dir = cfg.out;
  m.config_hash = config_hash(cfg);
  m.artifact = artifact_version;
  m.started = now_iso();

  emit(m, "config.resolved", canonical_text(cfg));

  if (cfg.kind == "gs") run_gs(cfg, m);
  else if (cfg.kind == "droplet") run_droplet(cfg, m);
  else if (cfg.kind == "chaos") run_chaos(cfg, m);
  else if (cfg.kind == "variance") run_variance(cfg, m);
  else if (cfg.kind == "stiffness") run_stiffness(cfg, m);
  else if (cfg.kind == "window") run_window(cfg, m);
  else run_selftest(cfg, m);

  if (cfg.plots && (m.kind == "chaos" || m.kind == "stiffness" ||
                    m.kind == "droplet")) {
    const std::vector<std::string> plots = emit_plots(m);
    m.outputs.insert(m.outputs.end(), plots.begin(), plots.end());
  }

  m.finished = now_iso();
  std::sort(m.outputs.begin(), m.outputs.end());

  json mj;
  mj["schema_version"] = schema_version;
  mj["artifact_version"] = m.artifact;
  mj["kind"] = m.kind;
  mj["config_hash"] = io::fmt_hex(m.config_hash);
  mj["started"] = m.started;
  mj["finished"] = m.finished;
  mj["degenerate_discarded"] = m.degenerate_discarded;
  mj["outputs"] = m.outputs;
  io::write_file(path_in(m, "manifest.json"), mj.dump(2) + "\n");
  return m;
}

RunManifest load_manifest(const std::string& out_dir) {
  const json mj = json::parse(io::read_file(out_dir + "/manifest.json"));
  RunManifest m;
  m.kind = mj.at("kind").get<std::string>();
  m.out_dir = out_dir;
  m.artifact = mj.at("artifact_version").get<std::string>();
  m.config_hash = std::strtoull(
      mj.at("config_hash").get<std::string>().c_str(), nullptr, 16);
  m.started = mj.at("started").get<std::string>();
  m.finished = mj.at("finished").get<std::string>();
  m.degenerate_discarded = mj.at("degenerate_discarded").get<std::int64_t>();
  m.outputs = mj.at("outputs").get<std::vector<std::string>>();
  return m;
}

}  // namespace ea
