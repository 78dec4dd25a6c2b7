#pragma once

#include <string>

#include "qosketch/predictor.hpp"

namespace qosketch {

/// Versioned, binary-free JSON checkpoints: parameter arrays are plain
/// base-10 numbers. Schema field is checked on load; unknown keys rejected.
std::string checkpoint_to_json(const ModelParams& params,
                               const SketchConfig& sketch);

struct Checkpoint {
  ModelParams params;
  SketchConfig sketch;
};

Checkpoint checkpoint_from_json(const std::string& text);

void save_checkpoint(const std::string& path, const ModelParams& params,
                     const SketchConfig& sketch);
Checkpoint load_checkpoint(const std::string& path);

}  // namespace qosketch
