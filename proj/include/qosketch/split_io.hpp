#pragma once

#include <string>

#include "qosketch/graph.hpp"

namespace qosketch {

/// Persists a split as three edge-list files (train/valid/test positives)
/// plus manifest.json {seed, ratios, counts}. Negatives are re-derived from
/// the manifest seed on load, so nothing else needs to be stored.
void save_split(const std::string& dir, const DatasetSplit& split);

/// Rebuilds the split against the full graph it was made from; validates the
/// stored counts and re-samples the negative sets deterministically.
DatasetSplit load_split(const std::string& dir, const Graph& g);

}  // namespace qosketch
