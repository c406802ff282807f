#include <algorithm>
#include <filesystem>
#include <string>
#include <vector>

#include "doctest.h"
#include "ealab/io.hpp"
#include "ealab/runner.hpp"
#include "json.hpp"

using namespace ea;
namespace fs = std::filesystem;

namespace {

std::string scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "ealab_runner_tests" / name;
  fs::remove_all(dir);
  return dir.string();
}

// result bytes per file name, manifest timestamps blanked
std::vector<std::pair<std::string, std::string>> snapshot(const std::string& dir) {
  std::vector<std::pair<std::string, std::string>> files;
  for (const auto& entry : fs::recursive_directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    std::string body = io::read_file(entry.path().string());
    if (entry.path().filename() == "manifest.json") {
      auto doc = nlohmann::json::parse(body);
      doc["started"] = "";
      doc["finished"] = "";
      body = doc.dump(2);
    }
    files.emplace_back(fs::relative(entry.path(), dir).string(), std::move(body));
  }
  std::sort(files.begin(), files.end());
  return files;
}

}  // namespace

TEST_CASE("runner: ground-state runs persist solutions and inputs") {
  ExperimentConfig cfg;
  cfg.kind = "gs";
  cfg.d = 2;
  cfg.sizes = {4};
  cfg.topology = "periodic";
  cfg.bc = "periodic";
  cfg.n_real = 4;
  cfg.seed = 3;
  cfg.out = scratch("gs");
  const auto m = run(cfg);
  CHECK(m.exit_code == 0);
  CHECK(m.kind == "gs");
  CHECK(std::is_sorted(m.outputs.begin(), m.outputs.end()));
  for (const auto& f : m.outputs) CHECK(fs::exists(fs::path(cfg.out) / f));
  CHECK(fs::exists(fs::path(cfg.out) / "gs.csv"));
  CHECK(fs::exists(fs::path(cfg.out) / "gs.json"));
  CHECK(fs::exists(fs::path(cfg.out) / "manifest.json"));

  // the resolved config equals the canonical text, execution context excluded
  const std::string resolved = io::read_file((fs::path(cfg.out) / "config.resolved").string());
  CHECK(resolved == canonical_text(cfg));

  const auto loaded = load_manifest(cfg.out);
  CHECK(loaded.kind == "gs");
  CHECK(loaded.config_hash == config_hash(cfg));
  CHECK(loaded.outputs == m.outputs);
  fs::remove_all(cfg.out);
}

TEST_CASE("runner: reruns are byte identical across worker counts") {
  ExperimentConfig cfg;
  cfg.kind = "droplet";
  cfg.d = 2;
  cfg.sizes = {3};
  cfg.topology = "periodic";
  cfg.bc = "periodic";
  cfg.n_real = 6;
  cfg.seed = 8;
  cfg.plots = false;

  cfg.out = scratch("det1");
  cfg.workers = 1;
  run(cfg);
  const auto s1 = snapshot(cfg.out);

  ExperimentConfig cfg8 = cfg;
  cfg8.out = scratch("det8");
  cfg8.workers = 8;
  run(cfg8);
  const auto s8 = snapshot(cfg8.out);

  REQUIRE(s1.size() == s8.size());
  for (std::size_t i = 0; i < s1.size(); ++i) {
    CHECK(s1[i].first == s8[i].first);
    CHECK(s1[i].second == s8[i].second);
  }
  fs::remove_all(cfg.out);
  fs::remove_all(cfg8.out);
}

TEST_CASE("runner: self-test run passes and reports every section") {
  ExperimentConfig cfg;
  cfg.kind = "selftest";
  cfg.n_samples = 4000;
  cfg.seed = 7;
  cfg.out = scratch("selftest");
  const auto m = run(cfg);
  CHECK(m.exit_code == 0);
  const auto doc = nlohmann::json::parse(io::read_file((fs::path(cfg.out) / "selftest.json").string()));
  CHECK(doc["all_pass"].get<bool>());
  CHECK(doc["gaussian"].size() == 4);
  CHECK(doc["solver_crosscheck"]["mismatches"].get<int>() == 0);
  CHECK(doc["triangle"]["pass"].get<bool>());
  fs::remove_all(cfg.out);
}

TEST_CASE("runner: stiffness run emits scan table and fit") {
  ExperimentConfig cfg;
  cfg.kind = "stiffness";
  cfg.d = 1;
  cfg.sizes = {4, 6, 8};
  cfg.n_real = 30;
  cfg.seed = 12;
  cfg.out = scratch("stiff");
  const auto m = run(cfg);
  CHECK(m.exit_code == 0);
  const auto table = io::parse_csv(io::read_file((fs::path(cfg.out) / "stiffness.csv").string()));
  CHECK(table.rows.size() == 3);
  CHECK(table.col("var_x") >= 0);
  const auto doc = nlohmann::json::parse(io::read_file((fs::path(cfg.out) / "stiffness.json").string()));
  CHECK(doc.contains("two_theta"));
  CHECK(doc.contains("theta"));

  // plots were requested, so svg artifacts exist and regenerate on demand
  CHECK(fs::exists(fs::path(cfg.out) / "varx.svg"));
  const auto names = emit_plots(m);
  CHECK(!names.empty());
  for (const auto& n : names) CHECK(fs::exists(fs::path(cfg.out) / n));
  fs::remove_all(cfg.out);
}

TEST_CASE("runner: window run reports crossing times on one edge") {
  ExperimentConfig cfg;
  cfg.kind = "window";
  cfg.d = 2;
  cfg.sizes = {4};
  cfg.topology = "periodic";
  cfg.bc = "periodic";
  cfg.edge = 5;
  cfg.t_max = 10.0;
  cfg.seed = 4;
  cfg.out = scratch("window");
  const auto m = run(cfg);
  CHECK(m.exit_code == 0);
  const auto doc = nlohmann::json::parse(io::read_file((fs::path(cfg.out) / "window.json").string()));
  CHECK(doc["edge"].get<int>() == 5);
  CHECK(doc.contains("crossings"));
  REQUIRE(doc.contains("droplet"));
  CHECK(doc["droplet"].contains("f"));
  CHECK(doc["droplet"].contains("c"));
  CHECK(doc.contains("entries"));
  fs::remove_all(cfg.out);
}

TEST_CASE("runner: kinds without figures refuse to plot") {
  ExperimentConfig cfg;
  cfg.kind = "gs";
  cfg.d = 1;
  cfg.sizes = {6};
  cfg.topology = "open";
  cfg.n_real = 2;
  cfg.seed = 2;
  cfg.out = scratch("noplot");
  const auto m = run(cfg);
  CHECK_THROWS(emit_plots(m));
  fs::remove_all(cfg.out);
}

TEST_CASE("runner: invalid configs are rejected before any output") {
  ExperimentConfig cfg;
  cfg.kind = "chaos";
  cfg.d = 4;  // out of range
  cfg.out = scratch("invalid");
  CHECK_THROWS(run(cfg));
  CHECK_FALSE(fs::exists(cfg.out));
}
