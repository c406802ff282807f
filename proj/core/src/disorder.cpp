#include "ealab/disorder.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <memory>
#include <stdexcept>

#include "ealab/rng.hpp"

namespace ea {

CouplingField sample_couplings(const BoxLattice& lat, std::uint64_t seed) {
  CouplingField f(lat);
  f.seed = seed;
  for (std::int64_t e = 0; e < lat.edge_count(); ++e)
    f.j[std::size_t(e)] = rng::normal(seed, rng::stream_couplings, std::uint64_t(e));
  return f;
}

CouplingField interpolate(const InterpolationPath& path, double t) {
  if (!path.base || !path.target) throw std::invalid_argument("path needs both fields");
  if (path.base->lat != path.target->lat)
    throw std::invalid_argument("path fields live on different lattices");
  if (!(t >= 0.0)) throw std::invalid_argument("interpolation time must be >= 0");

  CouplingField out = *path.base;
  const double decay = std::exp(-t);
  const double grow = std::sqrt(1.0 - decay * decay);
  auto mix_edge = [&](std::size_t e) {
    out.j[e] = decay * path.base->j[e] + grow * path.target->j[e];
  };
  if (path.moves_all()) {
    for (std::size_t e = 0; e < out.j.size(); ++e) mix_edge(e);
  } else {
    for (auto e : path.edges) mix_edge(std::size_t(e));
  }
  return out;
}

CouplingField perturb(const CouplingField& j, const CouplingField& eta, double dj) {
  if (j.lat != eta.lat) throw std::invalid_argument("fields live on different lattices");
  CouplingField out = j;
  const double norm = std::sqrt(1.0 + dj * dj);
  for (std::size_t e = 0; e < out.j.size(); ++e)
    out.j[e] = (j.j[e] + dj * eta.j[e]) / norm;
  return out;
}

double deltaj_to_t(double dj) { return 0.5 * std::log1p(dj * dj); }

double t_to_deltaj(double t) {
  if (!(t >= 0.0)) throw std::invalid_argument("time must be >= 0");
  return std::sqrt(std::expm1(2.0 * t));
}

// --- serialization -------------------------------------------------------

namespace {

constexpr char magic[8] = {'E', 'A', 'C', 'P', 'L', 'V', '0', '1'};

bool ends_with(const std::string& s, const std::string& suf) {
  return s.size() >= suf.size() && s.compare(s.size() - suf.size(), suf.size(), suf) == 0;
}

struct FileCloser {
  void operator()(std::FILE* f) const { if (f) std::fclose(f); }
};
using File = std::unique_ptr<std::FILE, FileCloser>;

void save_binary(const CouplingField& f, const std::string& path) {
  File fp(std::fopen(path.c_str(), "wb"));
  if (!fp) throw std::runtime_error("cannot open for write: " + path);
  const BoxLattice& lat = *f.lat;
  std::uint32_t d = std::uint32_t(lat.dim());
  std::uint64_t ne = std::uint64_t(lat.edge_count());
  std::fwrite(magic, 1, 8, fp.get());
  std::fwrite(&d, 4, 1, fp.get());
  for (int a = 0; a < 3; ++a) {
    std::uint32_t L = a < lat.dim() ? std::uint32_t(lat.extent(a)) : 0;
    std::uint32_t tp = a < lat.dim() ? std::uint32_t(lat.topology(a)) : 0;
    std::fwrite(&L, 4, 1, fp.get());
    std::fwrite(&tp, 4, 1, fp.get());
  }
  std::fwrite(&f.seed, 8, 1, fp.get());
  std::fwrite(&ne, 8, 1, fp.get());
  if (std::fwrite(f.j.data(), 8, f.j.size(), fp.get()) != f.j.size())
    throw std::runtime_error("short write: " + path);
}

void save_csv(const CouplingField& f, const std::string& path) {
  File fp(std::fopen(path.c_str(), "w"));
  if (!fp) throw std::runtime_error("cannot open for write: " + path);
  const BoxLattice& lat = *f.lat;
  std::fprintf(fp.get(), "# ealab-couplings v1\n");
  std::fprintf(fp.get(), "# d=%d\n", lat.dim());
  std::fprintf(fp.get(), "# extents=");
  for (int a = 0; a < lat.dim(); ++a)
    std::fprintf(fp.get(), "%s%d", a ? "," : "", lat.extent(a));
  std::fprintf(fp.get(), "\n# topology=%s\n", lat.topology_string().c_str());
  std::fprintf(fp.get(), "# seed=%llu\n", (unsigned long long)f.seed);
  std::fprintf(fp.get(), "edge,value\n");
  for (std::size_t e = 0; e < f.j.size(); ++e)
    std::fprintf(fp.get(), "%zu,%a\n", e, f.j[e]);
}

LoadedCouplings load_binary(const std::string& path) {
  File fp(std::fopen(path.c_str(), "rb"));
  if (!fp) throw std::runtime_error("cannot open: " + path);
  char m[8];
  if (std::fread(m, 1, 8, fp.get()) != 8 || std::memcmp(m, magic, 8) != 0)
    throw std::runtime_error("bad coupling file header: " + path);
  std::uint32_t d = 0;
  if (std::fread(&d, 4, 1, fp.get()) != 1 || d < 1 || d > 3)
    throw std::runtime_error("bad dimension in: " + path);
  LoadedCouplings out;
  for (int a = 0; a < 3; ++a) {
    std::uint32_t L = 0, tp = 0;
    if (std::fread(&L, 4, 1, fp.get()) != 1 || std::fread(&tp, 4, 1, fp.get()) != 1)
      throw std::runtime_error("truncated header: " + path);
    if (a < int(d)) {
      out.extents.push_back(int(L));
      out.topology.push_back(Topology(tp));
    }
  }
  std::uint64_t ne = 0;
  if (std::fread(&out.seed, 8, 1, fp.get()) != 1 || std::fread(&ne, 8, 1, fp.get()) != 1)
    throw std::runtime_error("truncated header: " + path);
  out.j.resize(std::size_t(ne));
  if (std::fread(out.j.data(), 8, out.j.size(), fp.get()) != out.j.size())
    throw std::runtime_error("truncated payload: " + path);
  return out;
}

LoadedCouplings load_csv(const std::string& path) {
  File fp(std::fopen(path.c_str(), "r"));
  if (!fp) throw std::runtime_error("cannot open: " + path);
  LoadedCouplings out;
  char line[512];
  bool saw_version = false;
  while (std::fgets(line, sizeof line, fp.get())) {
    std::string s(line);
    while (!s.empty() && (s.back() == '\n' || s.back() == '\r')) s.pop_back();
    if (s.rfind("# ealab-couplings", 0) == 0) { saw_version = true; continue; }
    if (s.rfind("# d=", 0) == 0) continue;
    if (s.rfind("# extents=", 0) == 0) {
      std::string rest = s.substr(10);
      std::size_t pos = 0;
      while (pos < rest.size()) {
        std::size_t comma = rest.find(',', pos);
        if (comma == std::string::npos) comma = rest.size();
        out.extents.push_back(std::stoi(rest.substr(pos, comma - pos)));
        pos = comma + 1;
      }
      continue;
    }
    if (s.rfind("# topology=", 0) == 0) {
      std::string rest = s.substr(11);
      std::size_t pos = 0;
      while (pos < rest.size()) {
        std::size_t comma = rest.find(',', pos);
        if (comma == std::string::npos) comma = rest.size();
        out.topology.push_back(topology_from_string(rest.substr(pos, comma - pos)));
        pos = comma + 1;
      }
      continue;
    }
    if (s.rfind("# seed=", 0) == 0) {
      out.seed = std::stoull(s.substr(7));
      continue;
    }
    if (s.empty() || s[0] == '#' || s.rfind("edge,", 0) == 0) continue;
    const char* p = s.c_str();
    char* endp = nullptr;
    long e = std::strtol(p, &endp, 10);
    if (!endp || *endp != ',') throw std::runtime_error("bad csv row: " + s);
    double v = std::strtod(endp + 1, nullptr);
    if (std::size_t(e) != out.j.size()) throw std::runtime_error("csv rows out of order");
    out.j.push_back(v);
  }
  if (!saw_version) throw std::runtime_error("missing version header: " + path);
  return out;
}

}  // namespace

void save_couplings(const CouplingField& f, const std::string& path) {
  if (!f.lat) throw std::invalid_argument("field has no lattice");
  if (ends_with(path, ".csv")) save_csv(f, path);
  else save_binary(f, path);
}

LoadedCouplings load_couplings_raw(const std::string& path) {
  return ends_with(path, ".csv") ? load_csv(path) : load_binary(path);
}

CouplingField load_couplings(const BoxLattice& lat, const std::string& path) {
  LoadedCouplings raw = load_couplings_raw(path);
  if (int(raw.extents.size()) != lat.dim())
    throw std::runtime_error("coupling file dimension mismatch: " + path);
  for (int a = 0; a < lat.dim(); ++a)
    if (raw.extents[std::size_t(a)] != lat.extent(a) ||
        raw.topology[std::size_t(a)] != lat.topology(a))
      throw std::runtime_error("coupling file geometry mismatch: " + path);
  if (std::int64_t(raw.j.size()) != lat.edge_count())
    throw std::runtime_error("coupling file edge count mismatch: " + path);
  CouplingField f(lat);
  f.seed = raw.seed;
  f.j = std::move(raw.j);
  return f;
}

}
