#include "ealab/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "ealab/version.hpp"

#include "json.hpp"

namespace ea::io {

std::string fmt(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string fmt_hex(std::uint64_t x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "0x%016llx",
                static_cast<unsigned long long>(x));
  return buf;
}

CsvWriter::CsvWriter(std::vector<std::string> columns)
    : cols_(std::move(columns)) {
  meta_.emplace_back("schema_version", std::to_string(schema_version));
  meta_.emplace_back("artifact_version", artifact_version);
}

void CsvWriter::meta(const std::string& key, const std::string& value) {
  meta_.emplace_back(key, value);
}

void CsvWriter::meta(const std::string& key, std::int64_t value) {
  meta_.emplace_back(key, std::to_string(value));
}

void CsvWriter::meta(const std::string& key, std::uint64_t value) {
  meta_.emplace_back(key, std::to_string(value));
}

void CsvWriter::add_row(std::span<const std::string> cells) {
  if (cells.size() != cols_.size())
    throw std::invalid_argument("row width does not match the header");
  rows_.emplace_back(cells.begin(), cells.end());
}

std::string CsvWriter::str() const {
  std::string out;
  for (const auto& [k, v] : meta_) out += "# " + k + ": " + v + "\n";
  for (std::size_t i = 0; i < cols_.size(); ++i) {
    if (i) out += ',';
    out += cols_[i];
  }
  out += '\n';
  for (const auto& row : rows_) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += row[i];
    }
    out += '\n';
  }
  return out;
}

void CsvWriter::save(const std::string& path) const { write_file(path, str()); }

int CsvTable::col(const std::string& name) const {
  for (std::size_t i = 0; i < columns.size(); ++i)
    if (columns[i] == name) return int(i);
  return -1;
}

const std::string* CsvTable::find_meta(const std::string& key) const {
  for (const auto& [k, v] : meta)
    if (k == key) return &v;
  return nullptr;
}

namespace {

std::vector<std::string> split_cells(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(',', start);
    if (pos == std::string::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

}  // namespace

CsvTable parse_csv(const std::string& text) {
  CsvTable t;
  std::istringstream in(text);
  std::string line;
  bool saw_header = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::string body = line.substr(1);
      const std::size_t colon = body.find(':');
      if (colon != std::string::npos) {
        std::string k = body.substr(0, colon);
        std::string v = body.substr(colon + 1);
        while (!k.empty() && k.front() == ' ') k.erase(k.begin());
        while (!k.empty() && k.back() == ' ') k.pop_back();
        while (!v.empty() && v.front() == ' ') v.erase(v.begin());
        t.meta.emplace_back(k, v);
      }
      continue;
    }
    if (!saw_header) {
      t.columns = split_cells(line);
      saw_header = true;
    } else {
      t.rows.push_back(split_cells(line));
    }
  }
  if (!saw_header) throw std::runtime_error("csv has no header row");
  return t;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out.write(content.data(), std::streamsize(content.size()));
  if (!out) throw std::runtime_error("write failed: " + path);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string groundstate_json(const BoxLattice& lat, const BoundaryCondition& bc,
                             std::uint64_t seed, const GroundStateResult& g) {
  nlohmann::json j;
  j["schema_version"] = schema_version;
  j["artifact_version"] = artifact_version;
  j["d"] = lat.dim();
  j["L"] = lat.extent(0);
  j["topology"] = lat.topology_string();
  j["bc"] = bc.label();
  j["seed"] = seed;
  j["energy"] = g.energy;
  j["config"] = g.config.bits();
  j["degenerate"] = g.degenerate;
  if (std::isfinite(g.gap))
    j["gap"] = g.gap;
  else
    j["gap"] = nullptr;
  j["solver"] = g.solver;
  return j.dump(2) + "\n";
}

std::vector<std::string> droplet_columns() {
  return {"seed", "d",           "L", "bc",
          "edge", "f",           "c", "boundary_size",
          "region_size"};
}

void droplet_rows(CsvWriter& w, std::uint64_t seed, int d, int L,
                  const std::string& bc, std::span<const DropletReport> reps) {
  for (const DropletReport& r : reps) {
    const std::string cells[] = {std::to_string(seed),
                                 std::to_string(d),
                                 std::to_string(L),
                                 bc,
                                 std::to_string(r.edge),
                                 fmt(r.flex.f),
                                 fmt(r.flex.c),
                                 std::to_string(r.boundary.size()),
                                 std::to_string(r.region.size())};
    w.add_row(cells);
  }
}

}  // namespace ea::io
