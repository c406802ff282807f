#include <cstdio>
#include <exception>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "ealab/config.hpp"
#include "ealab/io.hpp"
#include "ealab/runner.hpp"

namespace {

// every flag mirrors one config key; values are handed to the config parser
// so the file format and the CLI accept exactly the same spellings
struct FlagSet {
  static constexpr int n = 20;
  static constexpr const char* keys[n] = {
      "seed",   "out",       "workers", "d",         "L",      "topology",
      "n_real", "bc",        "ap_axis", "ensemble",  "t",      "t_max",
      "t_grid", "deltas",    "eps",     "n_samples", "n_s",    "edge",
      "method", "plots"};
  static constexpr const char* flags[n] = {
      "--seed",   "--out",       "--workers", "--d",         "--L",
      "--topology", "--n-real",  "--bc",      "--ap-axis",   "--ensemble",
      "--t",      "--t-max",     "--t-grid",  "--deltas",    "--eps",
      "--n-samples", "--n-s",    "--edge",    "--method",    "--plots"};
  std::optional<std::string> vals[n];
  std::string config_path;
};

void add_flags(CLI::App* sub, FlagSet& fs) {
  sub->add_option("--config", fs.config_path, "config file (key = value)");
  for (int i = 0; i < FlagSet::n; ++i)
    sub->add_option(fs.flags[i], fs.vals[i],
                    std::string("config key ") + fs.keys[i]);
}

int run_kind(const std::string& kind, const FlagSet& fs) {
  ea::ExperimentConfig cfg;
  if (!fs.config_path.empty())
    cfg = ea::parse_config_text(ea::io::read_file(fs.config_path));
  cfg.kind = kind;
  for (int i = 0; i < FlagSet::n; ++i)
    if (fs.vals[i]) ea::apply_kv(cfg, FlagSet::keys[i], *fs.vals[i]);

  const ea::RunManifest m = ea::run(cfg);
  std::printf("%s: wrote %zu files to %s (config %s, discarded %lld)\n",
              m.kind.c_str(), m.outputs.size(), m.out_dir.c_str(),
              ea::io::fmt_hex(m.config_hash).c_str(),
              static_cast<long long>(m.degenerate_discarded));
  if (m.exit_code != 0)
    std::fprintf(stderr, "%s: invariant violation reported, see %s\n",
                 m.kind.c_str(), m.out_dir.c_str());
  return m.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"zero-temperature spin-glass ground-state laboratory"};
  app.require_subcommand(1);

  const char* kinds[] = {"gs",        "droplet", "chaos",  "variance",
                         "stiffness", "window",  "selftest"};
  const char* blurbs[] = {
      "exact ground states for sampled couplings",
      "critical droplets and flexibilities, every edge",
      "overlap decay curves, droplet scans, exponent fits",
      "two-replica variance lower bound",
      "interface free-energy variance across sizes",
      "windowed energy vector and crossing times for one edge",
      "Gaussian-identity and solver self-tests"};
  FlagSet fs[7];
  CLI::App* subs[7];
  for (int i = 0; i < 7; ++i) {
    subs[i] = app.add_subcommand(kinds[i], blurbs[i]);
    add_flags(subs[i], fs[i]);
  }

  CLI::App* plot = app.add_subcommand(
      "plot", "regenerate SVG plots from a run's manifest");
  std::string plot_out = "out";
  plot->add_option("--out", plot_out, "run directory holding manifest.json");

  CLI11_PARSE(app, argc, argv);

  try {
    if (plot->parsed()) {
      const ea::RunManifest m = ea::load_manifest(plot_out);
      for (const std::string& f : ea::emit_plots(m))
        std::printf("wrote %s/%s\n", m.out_dir.c_str(), f.c_str());
      return 0;
    }
    for (int i = 0; i < 7; ++i)
      if (subs[i]->parsed()) return run_kind(kinds[i], fs[i]);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
