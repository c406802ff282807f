#include <stdexcept>
#include <string>
#include <vector>

#include "doctest.h"
#include "ealab/config.hpp"

using namespace ea;

TEST_CASE("config: keys parse into typed fields") {
  ExperimentConfig cfg;
  apply_kv(cfg, "d", "3");
  apply_kv(cfg, "L", "4,6,8");
  apply_kv(cfg, "topology", "open");
  apply_kv(cfg, "seed", "18446744073709551615");
  apply_kv(cfg, "t", "0.25");
  apply_kv(cfg, "deltas", "0.05,0.1");
  apply_kv(cfg, "plots", "false");
  apply_kv(cfg, "n_samples", "50000");
  CHECK(cfg.d == 3);
  CHECK(cfg.sizes == std::vector<int>{4, 6, 8});
  CHECK(cfg.topology == "open");
  CHECK(cfg.seed == 18446744073709551615ull);
  CHECK(cfg.t == 0.25);
  CHECK(cfg.deltas == std::vector<double>{0.05, 0.1});
  CHECK_FALSE(cfg.plots);
  CHECK(cfg.n_samples == 50000);
}

TEST_CASE("config: unknown keys and bad values are rejected by name") {
  ExperimentConfig cfg;
  try {
    apply_kv(cfg, "lattice_size", "4");
    FAIL("expected a throw");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("lattice_size") != std::string::npos);
  }
  CHECK_THROWS(apply_kv(cfg, "d", "two"));
  CHECK_THROWS(apply_kv(cfg, "L", "4,,6"));
  CHECK_THROWS(apply_kv(cfg, "t", "0.5x"));
}

TEST_CASE("config: file text layers over defaults") {
  const std::string text =
      "# comment line\n"
      "kind = chaos\n"
      "L = 4, 6\n"
      "eps = 0.15\n"
      "\n"
      "seed = 9\n";
  const auto cfg = parse_config_text(text);
  CHECK(cfg.kind == "chaos");
  CHECK(cfg.sizes == std::vector<int>{4, 6});
  CHECK(cfg.eps == 0.15);
  CHECK(cfg.seed == 9);
  CHECK(cfg.d == 2);          // default untouched
  CHECK(cfg.n_real == 100);   // default untouched
  CHECK_THROWS(parse_config_text("kind chaos\n"));
}

TEST_CASE("config: validation names the offending field") {
  ExperimentConfig cfg;
  cfg.kind = "gs";
  CHECK_NOTHROW(validate(cfg));

  auto expect_reject = [](ExperimentConfig c, const char* what) {
    try {
      validate(c);
      FAIL("expected a throw for " << what);
    } catch (const std::invalid_argument& e) {
      CHECK(std::string(e.what()).find(what) != std::string::npos);
    }
  };

  ExperimentConfig bad = cfg;
  bad.kind = "warp";
  expect_reject(bad, "kind");
  bad = cfg;
  bad.d = 4;
  expect_reject(bad, "d");
  bad = cfg;
  bad.sizes = {6, 4};
  expect_reject(bad, "L");
  bad = cfg;
  bad.topology = "twisted";
  expect_reject(bad, "topology");
  bad = cfg;
  bad.eps = 2.5;
  expect_reject(bad, "eps");
  bad = cfg;
  bad.t = 0.0;
  expect_reject(bad, "t");
  bad = cfg;
  bad.workers = 0;
  expect_reject(bad, "workers");
  bad = cfg;
  bad.kind = "window";
  bad.edge = -1;
  expect_reject(bad, "edge");
}

TEST_CASE("config: canonical text ignores execution context") {
  ExperimentConfig a;
  a.kind = "variance";
  a.out = "run1";
  a.workers = 1;
  ExperimentConfig b = a;
  b.out = "other/dir";
  b.workers = 8;
  CHECK(canonical_text(a) == canonical_text(b));
  CHECK(config_hash(a) == config_hash(b));

  b.seed = 2;
  CHECK(config_hash(a) != config_hash(b));
  b = a;
  b.sizes = {4, 6};
  CHECK(config_hash(a) != config_hash(b));

  // canonical text is sorted key = value lines and starts with the size list
  const std::string text = canonical_text(a);
  CHECK(text.substr(0, 4) == "L = ");
  CHECK(text.find("out") == std::string::npos);
  CHECK(text.find("workers") == std::string::npos);
  CHECK(text.find("kind = variance\n") != std::string::npos);
}

TEST_CASE("config: hash is a stable function of the text") {
  CHECK(fnv1a64("") == 0xcbf29ce484222325ull);
  CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cull);
  ExperimentConfig cfg;
  cfg.kind = "gs";
  CHECK(config_hash(cfg) == fnv1a64(canonical_text(cfg)));
}
