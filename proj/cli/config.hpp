#pragma once

// JSON run configuration: one mode per run, a continuum model or a ladder
// (or both), optional sweep, optional tolerance overrides. Unknown keys are
// rejected and every violation is reported in one pass.

#include <stdexcept>
#include <string>
#include <vector>

#include "../src/fgh.hpp"

namespace cli {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SweepSpec {
    bool present = false;
    std::string parameter; // "kappa" (continuum) or "f" (ladder)
    double lo = 0.0;
    double hi = 0.0;
    int steps = 0;

    bool operator==(const SweepSpec&) const = default;
};

struct LadderSpec {
    int n = 5;
    double j = 1.0;
    double f = 0.0;

    bool operator==(const LadderSpec&) const = default;
};

struct EvolutionSpec {
    double t_max = 10.0;
    int samples = 401;
    std::string generator = "lossy"; // "lossy": H = -i h; "effective": H = h
    std::string initial = "center";  // or "uniform"

    bool operator==(const EvolutionSpec&) const = default;
};

struct PropagationSpec {
    double t_max = 2.9224; // two revival periods at F = 4.3
    int samples = 101;
    int radius = 10; // emitted destinations n in [-radius, radius]
    int source = 0;

    bool operator==(const PropagationSpec&) const = default;
};

struct ScanSpec {
    std::vector<int> n_list{5, 7, 15};
    double ratio_lo = 1.3;
    double ratio_hi = 2.2;

    bool operator==(const ScanSpec&) const = default;
};

struct ToleranceSpec {
    double coalescence_threshold = 0.99;
    double ep_threshold = 1e-6;

    bool operator==(const ToleranceSpec&) const = default;
};

struct RunConfig {
    std::string mode;
    std::string preset; // empty when none was named
    fgh::ContinuousModel model;
    bool model_present = false; // a continuum model was given (or preset)
    LadderSpec ladder;
    SweepSpec sweep;
    EvolutionSpec evolution;
    PropagationSpec propagation;
    ScanSpec scan;
    ToleranceSpec tolerances;
    std::string output_path; // CSV file; sidecar gets ".meta.json" appended

    bool operator==(const RunConfig& o) const;
};

// The continuum parameter sets behind the named presets.
fgh::ContinuousModel preset_model(const std::string& name);

// Parses and validates. Throws ConfigError with a line-tagged message on
// malformed JSON, or with one line per violation otherwise.
RunConfig parse_config(const std::string& text);

// Canonical JSON. parse_config(emit_config(c)) == c for every valid c.
std::string emit_config(const RunConfig& config);

} // namespace cli
