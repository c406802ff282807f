#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

// Experiment configuration: a flat key=value text file ('#' comments) plus
// CLI overrides that mirror the keys one-to-one. Unknown keys are rejected.
// The canonical text normalizes every science-relevant key; its FNV-1a hash
// identifies the run. Execution context (out, workers) never enters the
// hash, so reruns at different worker counts regenerate identical results.

namespace ea {

struct ExperimentConfig {
  std::string kind;  // gs|droplet|chaos|variance|stiffness|window|selftest
  int d = 2;
  std::vector<int> sizes = {4};      // key L: single value or comma list
  std::string topology = "periodic"; // uniform axis topology
  std::string bc = "free";           // free|periodic|antiperiodic|fixed
  int ap_axis = 0;
  std::string ensemble = "pa";       // variance runs: pa|ff
  double t = 0.5;                    // interpolation horizon (variance)
  double t_max = 10.0;               // crossing-scan horizon (window)
  std::vector<double> t_grid;        // chaos grid; empty = default
  std::vector<double> deltas;        // flexibility thresholds
  double eps = 0.2;                  // decorrelation threshold on Q
  int n_real = 100;
  std::int64_t n_samples = 100000;   // selftest sample count
  int n_s = 21;                      // bound quadrature points
  std::uint64_t seed = 1;
  int edge = -1;                     // window/single-edge target
  std::string method = "auto";       // auto|enumeration|dp
  bool plots = true;
  std::string out = "out";
  int workers = 1;
};

// set one key; throws invalid_argument naming the key on unknown keys or
// unparsable values
void apply_kv(ExperimentConfig& cfg, const std::string& key,
              const std::string& value);

// parse a config file body on top of defaults
ExperimentConfig parse_config_text(const std::string& text);

// kind-aware validation; throws invalid_argument naming the field
void validate(const ExperimentConfig& cfg);

// normalized key=value lines, sorted by key; excludes out and workers
std::string canonical_text(const ExperimentConfig& cfg);

std::uint64_t fnv1a64(std::string_view s);
std::uint64_t config_hash(const ExperimentConfig& cfg);

}  // namespace ea
