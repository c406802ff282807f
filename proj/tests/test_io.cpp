#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "doctest.h"
#include "ealab/disorder.hpp"
#include "ealab/excitation.hpp"
#include "ealab/groundstate.hpp"
#include "ealab/io.hpp"
#include "ealab/svg.hpp"
#include "json.hpp"

using namespace ea;

TEST_CASE("io: doubles print with recoverable precision") {
  for (double x : {0.1, -1.0 / 3.0, 1e-300, 6.02214076e23, 0.0}) {
    const std::string s = io::fmt(x);
    CHECK(std::stod(s) == x);
  }
  CHECK(io::fmt(std::nan("")) == "nan");
  CHECK(io::fmt(INFINITY) == "inf");
  CHECK(io::fmt(-INFINITY) == "-inf");
  CHECK(io::fmt_hex(0xdeadbeefull) == "0x00000000deadbeef");
}

TEST_CASE("io: csv round trip keeps metadata, header, and cells") {
  io::CsvWriter w({"a", "b"});
  w.meta("seed", std::uint64_t(7));
  w.meta("note", "hello world");
  w.meta("x", 0.1);
  w.add_row(std::vector<std::string>{"1", "2"});
  w.add_row(std::vector<std::string>{io::fmt(1.0 / 3.0), "-4"});
  CHECK_THROWS(w.add_row(std::vector<std::string>{"too", "many", "cells"}));

  const auto t = io::parse_csv(w.str());
  CHECK(t.columns == std::vector<std::string>{"a", "b"});
  REQUIRE(t.rows.size() == 2);
  CHECK(t.rows[1][0] == io::fmt(1.0 / 3.0));
  CHECK(std::stod(t.rows[1][0]) == 1.0 / 3.0);
  REQUIRE(t.find_meta("note") != nullptr);
  CHECK(*t.find_meta("note") == "hello world");
  REQUIRE(t.find_meta("schema_version") != nullptr);
  CHECK(t.col("b") == 1);
  CHECK(t.col("missing") == -1);
}

TEST_CASE("io: identical inputs produce identical csv bytes") {
  auto make = [] {
    io::CsvWriter w({"x"});
    w.meta("k", 1.5);
    w.add_row(std::vector<std::string>{"9"});
    return w.str();
  };
  CHECK(make() == make());
}

TEST_CASE("io: ground-state record is well formed json") {
  const auto lat = BoxLattice::build(2, 3, Topology::periodic);
  const auto j = sample_couplings(lat, 5);
  const auto g = solve(lat, j, BoundaryCondition::periodic());
  const std::string s = io::groundstate_json(lat, BoundaryCondition::periodic(), 5, g);
  const auto doc = nlohmann::json::parse(s);
  CHECK(doc["d"] == 2);
  CHECK(doc["L"] == 3);
  CHECK(doc["topology"] == lat.topology_string());
  CHECK(doc["seed"] == 5);
  CHECK(doc["energy"].get<double>() == g.energy);
  CHECK(doc["config"].get<std::string>() == g.config.bits());
  CHECK(doc["degenerate"].get<bool>() == g.degenerate);
  CHECK(doc["gap"].get<double>() == g.gap);
  CHECK(doc.contains("schema_version"));
}

TEST_CASE("io: droplet table serializes one row per edge report") {
  const auto lat = BoxLattice::build(2, 3, Topology::periodic);
  const auto j = sample_couplings(lat, 6);
  std::vector<DropletReport> reps;
  for (int e = 0; e < 4; ++e)
    reps.push_back(critical_droplet(lat, j, BoundaryCondition::periodic(), e));
  io::CsvWriter w(io::droplet_columns());
  io::droplet_rows(w, 6, 2, 3, "periodic", reps);
  const auto t = io::parse_csv(w.str());
  REQUIRE(t.rows.size() == 4);
  const int fcol = t.col("f");
  const int ecol = t.col("edge");
  REQUIRE(fcol >= 0);
  REQUIRE(ecol >= 0);
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    CHECK(std::stoi(t.rows[r][std::size_t(ecol)]) == int(r));
    CHECK(std::stod(t.rows[r][std::size_t(fcol)]) >= 0.0);
  }
}

TEST_CASE("io: file round trip") {
  const std::string path = "io_rt.bin";
  const std::string payload = std::string("line\n\x01\x02\xff binary", 19);
  io::write_file(path, payload);
  CHECK(io::read_file(path) == payload);
  std::remove(path.c_str());
  CHECK_THROWS(io::read_file("definitely_missing_file.xyz"));
}

TEST_CASE("svg: line plot renders series and axes") {
  svg::LinePlot p;
  p.title = "decay";
  p.xlabel = "t";
  p.ylabel = "q";
  svg::Series s;
  s.label = "L=4";
  s.x = {0.0, 1.0, 2.0};
  s.y = {1.0, 0.5, 0.25};
  s.yerr = {0.0, 0.05, 0.05};
  p.series.push_back(s);
  const std::string svg = p.render(720, 480);
  CHECK(svg.find("<svg") != std::string::npos);
  CHECK(svg.find("decay") != std::string::npos);
  CHECK(svg.find("L=4") != std::string::npos);
  CHECK(svg.find("polyline") != std::string::npos);

  svg::LinePlot empty;
  CHECK_THROWS(empty.render(720, 480));

  // log axes silently drop nonpositive points instead of exploding
  p.logx = true;
  p.logy = true;
  svg::Series z;
  z.label = "zero";
  z.x = {0.0, 1.0};
  z.y = {1.0, 1.0};
  p.series.push_back(z);
  CHECK_NOTHROW(p.render(720, 480));
}

TEST_CASE("svg: histogram renders bars") {
  svg::Histogram h;
  h.title = "sizes";
  h.xlabel = "s";
  h.ylabel = "count";
  h.bars = {{1.0, 10.0}, {2.0, 4.0}, {3.0, 1.0}};
  const std::string svg = h.render(720, 480);
  CHECK(svg.find("<svg") != std::string::npos);
  CHECK(svg.find("rect") != std::string::npos);
  CHECK(svg.find("sizes") != std::string::npos);
}
