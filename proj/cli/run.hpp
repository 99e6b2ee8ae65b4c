#pragma once

// Pipeline dispatch: one CSV artifact per run plus a JSON metadata sidecar
// (config echo, tool version, wall time) at output_path + ".meta.json".

#include "config.hpp"

namespace cli {

inline constexpr const char* kToolVersion = "1.0.0";

// Returns 0 on success, 2 on validation errors, 3 on numerical failures.
// CSV bodies are deterministic for a given config; partial artifacts are
// removed when the pipeline fails. jobs > 0 caps the worker pool.
int run(const RunConfig& config, int jobs);

} // namespace cli
