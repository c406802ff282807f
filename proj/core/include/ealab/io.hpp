#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ealab/excitation.hpp"
#include "ealab/groundstate.hpp"
#include "ealab/lattice.hpp"

// Result persistence. CSV files open with "# key: value" metadata lines
// (always including the schema version), then a header row, then data rows.
// Doubles are printed with 17 significant digits so a reread recovers the
// exact bits. JSON writers emit two-space indented objects with sorted keys;
// both formats are deterministic byte-for-byte.

namespace ea::io {

std::string fmt(double x);             // %.17g, "nan"/"inf" spelled out
std::string fmt_hex(std::uint64_t x);  // 0x%016x

class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> columns);

  void meta(const std::string& key, const std::string& value);
  void meta(const std::string& key, double value) { meta(key, fmt(value)); }
  void meta(const std::string& key, std::int64_t value);
  void meta(const std::string& key, std::uint64_t value);

  void add_row(std::span<const std::string> cells);

  std::string str() const;
  void save(const std::string& path) const;

 private:
  std::vector<std::pair<std::string, std::string>> meta_;
  std::vector<std::string> cols_;
  std::vector<std::vector<std::string>> rows_;
};

// parsed CSV: metadata, header, string cells
struct CsvTable {
  std::vector<std::pair<std::string, std::string>> meta;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  int col(const std::string& name) const;  // -1 when absent
  const std::string* find_meta(const std::string& key) const;
};
CsvTable parse_csv(const std::string& text);

void write_file(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

// {d, L, topology, bc, seed, energy, config, degenerate, gap, ...}; the
// config is the vertex bit string, gap is null when no second level was seen
std::string groundstate_json(const BoxLattice& lat, const BoundaryCondition& bc,
                             std::uint64_t seed, const GroundStateResult& g);

// canonical droplet CSV: one row per report
// seed,d,L,bc,edge,f,c,boundary_size,region_size
std::vector<std::string> droplet_columns();
void droplet_rows(CsvWriter& w, std::uint64_t seed, int d, int L,
                  const std::string& bc, std::span<const DropletReport> reps);

}  // namespace ea::io
