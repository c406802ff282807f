#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ealab/config.hpp"

// Experiment dispatch: runs one configured experiment, persists results and
// a manifest into the output directory, and emits static SVG plots.
//
// Determinism contract: every result file is a pure function of the
// canonical config and the artifact version; worker count and output path
// never change result bytes. The manifest's start/finish timestamps are the
// only fields that vary between reruns.
//
// Exit-code policy: exit_code is nonzero only for mathematical-invariant
// violations (a failed self-test identity, a variance bound violated beyond
// its confidence band, a triangle-inequality breach, a flexibility bound
// breach). Physics estimates never fail a run.

namespace ea {

struct RunManifest {
  std::string kind;
  std::string out_dir;
  std::uint64_t config_hash = 0;
  std::string artifact;
  std::string started, finished;  // ISO-8601 UTC
  std::int64_t degenerate_discarded = 0;
  std::vector<std::string> outputs;  // file names relative to out_dir
  int exit_code = 0;
};

RunManifest run(const ExperimentConfig& cfg);

// regenerate plots from the result files listed in the manifest; returns the
// SVG file names written. Throws when the manifest holds nothing plottable,
// naming the missing artifacts.
std::vector<std::string> emit_plots(const RunManifest& m);

RunManifest load_manifest(const std::string& out_dir);

}  // namespace ea
