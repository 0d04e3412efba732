#pragma once

#include <cstdint>
#include <string>

#include "slv/coefficients.hpp"
#include "slv/simulator.hpp"

namespace slv {

struct RunConfig {
    std::uint64_t n = 1000;
    std::uint64_t seed = 0;
    int threads = 1;
    std::string out;    // empty = stdout
    std::string format; // "csv" | "json"; empty = inferred from out
};

/// Parsed experiment file: a [model] section with the exact power-model keys,
/// plus optional [sim] and [run] sections.  Parsing is strict: unknown
/// sections or keys are rejected so a misspelled key can never silently
/// default.
struct ExperimentConfig {
    PowerModel model;
    bool has_model = false;
    SimConfig sim;
    RunConfig run;
};

/// Loads .json files as JSON, anything else as INI-style sections.
ExperimentConfig load_config(const std::string& path);

/// Parses config text directly (format: "json" or "ini").
ExperimentConfig parse_config(const std::string& text, const std::string& format);

/// Applies "key=value" to a model or sim field (the sweep hook).  Valid keys
/// are the 17 model keys plus dt, tmax, eps, xcap, x0, y0.
void apply_override(ExperimentConfig& cfg, const std::string& key,
                    const std::string& value);

/// Serializes a model back to its flat [model] section (round-trips through
/// parse_config).
std::string model_section_ini(const PowerModel& m);

} // namespace slv
