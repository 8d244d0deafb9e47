#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "config.hpp"
#include "model.hpp"
#include "sim.hpp"
#include "timeutil.hpp"

namespace wormlab {

struct LoggenOptions {
    int64_t wallclock_base_us = kDefaultWallclockBaseUs;
    IdsOptions ids;
};

// Deterministic ephemeral source ports, one per connection-opening event
// (scan, backdoor, payload transfer), drawn from a per-initiator counter
// starting at 1025. events must already be time-ordered; the result is
// indexed parallel to it (0 for events that open no connection).
std::vector<uint16_t> assign_ephemeral_ports(const std::vector<SimEvent>& events);

// Renderers for the five per-host/per-sensor log files. Grammars are pinned
// in docs/FORMATS.md; tests compare against them byte for byte.
std::string emit_firewall(const std::vector<SimEvent>& events,
                          const std::vector<uint16_t>& eph_ports,
                          const Host& host, const LoggenOptions& opts);
std::string emit_security(const std::vector<SimEvent>& events, const Host& host,
                          const LoggenOptions& opts);
std::string emit_system(const std::vector<SimEvent>& events, const Host& host,
                        const LoggenOptions& opts);
std::string emit_application(const Host& host, const LoggenOptions& opts);
std::string emit_ids(const std::vector<SimEvent>& events,
                     const std::vector<uint16_t>& eph_ports,
                     const std::string& sensor, const LoggenOptions& opts);

// Ground-truth event trace (CSV, simulation-relative seconds).
std::string emit_events_csv(const std::vector<SimEvent>& events);

}  // namespace wormlab
