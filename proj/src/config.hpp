#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "model.hpp"
#include "sim.hpp"

namespace wormlab {

struct IdsOptions {
    int portsweep_probes = 5;       // distinct destinations that trigger an alert
    double portsweep_window_s = 60.0;
};

struct FullConfig {
    NetworkTopology topology;
    SimConfig sim;
    IdsOptions ids;
};

struct ConfigError {
    size_t line = 0;  // 0 when not tied to a specific line
    std::string message;
};

struct ConfigResult {
    FullConfig config;
    std::vector<ConfigError> errors;  // parse errors + invariant violations

    bool ok() const { return errors.empty(); }
};

// Parses the run configuration: a line-oriented key/value format with
// [sim], [ids], [topology] and [host <name>] sections. The full grammar is
// documented in docs/FORMATS.md and printed by `wormlab formats`.
ConfigResult parse_config(std::istream& in);
ConfigResult parse_config_text(const std::string& text);

// Reads and parses a config file. Throws std::runtime_error when the file
// cannot be opened; syntax and invariant problems go into the result instead.
ConfigResult load_config(const std::string& path);

}  // namespace wormlab
