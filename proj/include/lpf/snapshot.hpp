#pragma once

#include <string>

#include "lpf/analysis.hpp"

namespace lpf {

/// Versioned binary container for a full analysis state (config, pattern,
/// frames, target lists, fields, dictionary, sparse codes, energy log).
/// Little-endian, float64 exact: write-then-read is field-identical and two
/// identical states serialize to identical bytes.
void save_snapshot(const AnalysisState& state, const std::string& path);
AnalysisState load_snapshot(const std::string& path);

constexpr int kSnapshotVersion = 1;

} // namespace lpf
