#include "ealab/config.hpp"

#include <algorithm>
#include <cerrno>
#include <cstdlib>
#include <sstream>
#include <stdexcept>

#include "ealab/io.hpp"

namespace ea {

namespace {

[[noreturn]] void bad(const std::string& key, const std::string& why) {
  throw std::invalid_argument("config key '" + key + "': " + why);
}

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t");
  return s.substr(a, b - a + 1);
}

long long parse_ll(const std::string& key, const std::string& v) {
  errno = 0;
  char* end = nullptr;
  const long long x = std::strtoll(v.c_str(), &end, 10);
  if (errno != 0 || end == v.c_str() || *end != '\0')
    bad(key, "not an integer: '" + v + "'");
  return x;
}

std::uint64_t parse_u64(const std::string& key, const std::string& v) {
  errno = 0;
  char* end = nullptr;
  const unsigned long long x = std::strtoull(v.c_str(), &end, 0);
  if (errno != 0 || end == v.c_str() || *end != '\0' || v.empty() ||
      v[0] == '-')
    bad(key, "not an unsigned integer: '" + v + "'");
  return x;
}

double parse_dbl(const std::string& key, const std::string& v) {
  errno = 0;
  char* end = nullptr;
  const double x = std::strtod(v.c_str(), &end);
  if (errno != 0 || end == v.c_str() || *end != '\0')
    bad(key, "not a number: '" + v + "'");
  return x;
}

template <class T, class F>
std::vector<T> parse_list(const std::string& key, const std::string& v,
                          F parse_one) {
  std::vector<T> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) bad(key, "empty list element");
    out.push_back(parse_one(key, item));
  }
  if (out.empty()) bad(key, "empty list");
  return out;
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  bad(key, "expected true/false");
}

}  // namespace

void apply_kv(ExperimentConfig& cfg, const std::string& key,
              const std::string& value) {
  const std::string v = trim(value);
  if (key == "kind") {
    cfg.kind = v;
  } else if (key == "d") {
    cfg.d = int(parse_ll(key, v));
  } else if (key == "L") {
    cfg.sizes = parse_list<int>(key, v, [](const std::string& k,
                                           const std::string& s) {
      return int(parse_ll(k, s));
    });
  } else if (key == "topology") {
    cfg.topology = v;
  } else if (key == "bc") {
    cfg.bc = v;
  } else if (key == "ap_axis") {
    cfg.ap_axis = int(parse_ll(key, v));
  } else if (key == "ensemble") {
    cfg.ensemble = v;
  } else if (key == "t") {
    cfg.t = parse_dbl(key, v);
  } else if (key == "t_max") {
    cfg.t_max = parse_dbl(key, v);
  } else if (key == "t_grid") {
    cfg.t_grid = parse_list<double>(key, v, parse_dbl);
  } else if (key == "deltas") {
    cfg.deltas = parse_list<double>(key, v, parse_dbl);
  } else if (key == "eps") {
    cfg.eps = parse_dbl(key, v);
  } else if (key == "n_real") {
    cfg.n_real = int(parse_ll(key, v));
  } else if (key == "n_samples") {
    cfg.n_samples = parse_ll(key, v);
  } else if (key == "n_s") {
    cfg.n_s = int(parse_ll(key, v));
  } else if (key == "seed") {
    cfg.seed = parse_u64(key, v);
  } else if (key == "edge") {
    cfg.edge = int(parse_ll(key, v));
  } else if (key == "method") {
    cfg.method = v;
  } else if (key == "plots") {
    cfg.plots = parse_bool(key, v);
  } else if (key == "out") {
    cfg.out = v;
  } else if (key == "workers") {
    cfg.workers = int(parse_ll(key, v));
  } else {
    bad(key, "unknown key");
  }
}

ExperimentConfig parse_config_text(const std::string& text) {
  ExperimentConfig cfg;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::string s = trim(line);
    if (s.empty() || s[0] == '#') continue;
    const std::size_t eq = s.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config line " + std::to_string(lineno) +
                                  ": expected key = value");
    apply_kv(cfg, trim(s.substr(0, eq)), trim(s.substr(eq + 1)));
  }
  return cfg;
}

void validate(const ExperimentConfig& cfg) {
  static const char* kinds[] = {"gs",        "droplet", "chaos",  "variance",
                                "stiffness", "window",  "selftest"};
  if (std::find_if(std::begin(kinds), std::end(kinds), [&](const char* k) {
        return cfg.kind == k;
      }) == std::end(kinds))
    bad("kind", "must be one of gs, droplet, chaos, variance, stiffness, "
                "window, selftest (got '" + cfg.kind + "')");
  if (cfg.d < 1 || cfg.d > 3) bad("d", "must be 1, 2, or 3");
  if (cfg.sizes.empty()) bad("L", "needs at least one size");
  for (std::size_t i = 0; i < cfg.sizes.size(); ++i) {
    if (cfg.sizes[i] < 2) bad("L", "sizes must be at least 2");
    if (i > 0 && cfg.sizes[i] <= cfg.sizes[i - 1])
      bad("L", "sizes must be strictly increasing");
  }
  if (cfg.topology != "open" && cfg.topology != "periodic")
    bad("topology", "must be open or periodic");
  if (cfg.bc != "free" && cfg.bc != "periodic" && cfg.bc != "antiperiodic" &&
      cfg.bc != "fixed")
    bad("bc", "must be free, periodic, antiperiodic, or fixed");
  if (cfg.ap_axis < 0 || cfg.ap_axis >= cfg.d) bad("ap_axis", "out of range");
  if (cfg.ensemble != "pa" && cfg.ensemble != "ff")
    bad("ensemble", "must be pa or ff");
  if (!(cfg.t > 0.0 && cfg.t <= 50.0)) bad("t", "must lie in (0, 50]");
  if (!(cfg.t_max >= 0.0 && cfg.t_max <= 50.0))
    bad("t_max", "must lie in [0, 50]");
  for (double x : cfg.t_grid)
    if (!(x >= 0.0 && x <= 50.0)) bad("t_grid", "times must lie in [0, 50]");
  for (double x : cfg.deltas)
    if (!(x > 0.0)) bad("deltas", "thresholds must be positive");
  if (!(cfg.eps > 0.0 && cfg.eps < 2.0)) bad("eps", "must lie in (0, 2)");
  if (cfg.n_real < 1) bad("n_real", "must be positive");
  if (cfg.n_samples < 2) bad("n_samples", "must be at least 2");
  if (cfg.n_s < 8) bad("n_s", "needs at least 8 quadrature points");
  if (cfg.method != "auto" && cfg.method != "enumeration" &&
      cfg.method != "dp")
    bad("method", "must be auto, enumeration, or dp");
  if (cfg.workers < 1) bad("workers", "must be positive");
  if (cfg.out.empty()) bad("out", "must not be empty");
  if (cfg.kind == "window" && cfg.edge < 0)
    bad("edge", "window runs need a target edge");
}

namespace {

template <class T>
std::string join(const std::vector<T>& xs, std::string (*one)(T)) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ',';
    out += one(xs[i]);
  }
  return out;
}

}  // namespace

std::string canonical_text(const ExperimentConfig& cfg) {
  // keep sorted by key
  std::string out;
  out += "L = " + join<int>(cfg.sizes, [](int x) { return std::to_string(x); }) + "\n";
  out += "ap_axis = " + std::to_string(cfg.ap_axis) + "\n";
  out += "bc = " + cfg.bc + "\n";
  out += "d = " + std::to_string(cfg.d) + "\n";
  out += "deltas = " + join<double>(cfg.deltas, [](double x) { return io::fmt(x); }) + "\n";
  out += "edge = " + std::to_string(cfg.edge) + "\n";
  out += "ensemble = " + cfg.ensemble + "\n";
  out += "eps = " + io::fmt(cfg.eps) + "\n";
  out += "kind = " + cfg.kind + "\n";
  out += "method = " + cfg.method + "\n";
  out += "n_real = " + std::to_string(cfg.n_real) + "\n";
  out += "n_s = " + std::to_string(cfg.n_s) + "\n";
  out += "n_samples = " + std::to_string(cfg.n_samples) + "\n";
  out += "plots = " + std::string(cfg.plots ? "true" : "false") + "\n";
  out += "seed = " + std::to_string(cfg.seed) + "\n";
  out += "t = " + io::fmt(cfg.t) + "\n";
  out += "t_grid = " + join<double>(cfg.t_grid, [](double x) { return io::fmt(x); }) + "\n";
  out += "t_max = " + io::fmt(cfg.t_max) + "\n";
  out += "topology = " + cfg.topology + "\n";
  return out;
}

std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::uint64_t config_hash(const ExperimentConfig& cfg) {
  return fnv1a64(canonical_text(cfg));
}

}  // namespace ea
