#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "model.hpp"
#include "rng.hpp"

namespace wormlab {

struct SimConfig {
    uint64_t seed = 1;
    double duration_s = 3600.0;
    double scan_interval_s = 1.0;
    double local_subnet_bias = 0.4;
    std::map<OsKind, double> p_infect = {
        {OsKind::Windows2000, 0.20},
        {OsKind::WindowsXp, 0.80},
        {OsKind::Other, 0.0},
    };
    double p_transfer_success = 0.9;
    double exploit_delay_s = 2.0;
    double transfer_delay_s = 3.0;
    double impact_delay_s = 5.0;
    // (attacker name, victim name) -> outcome, overriding all randomness for
    // that pair in both directions: forces success up to the given status and
    // forbids anything beyond it.
    std::map<std::pair<std::string, std::string>, EdgeStatus> forced_outcomes;

    double p_infect_for(OsKind os) const;
    // Empty when every invariant holds.
    std::vector<std::string> validate() const;
};

enum class SimEventKind : uint8_t {
    ScanProbe = 0,
    BackdoorOpen = 1,
    TftpTransfer = 2,
    ImpactRpcTerminated = 3,
    ImpactReboot = 4,
    InfectionComplete = 5,
};

const char* sim_event_kind_name(SimEventKind kind);

// A ground-truth propagation event. dst.name is empty when the probed address
// has no host behind it; such probes still reach firewall and IDS logs but
// never contribute to the scenario graph.
struct SimEvent {
    int64_t t_us = 0;
    SimEventKind kind = SimEventKind::ScanProbe;
    HostId src;
    HostId dst;
    PortSpec port = kRpcPort;
};

struct SimResult {
    std::vector<SimEvent> events;  // ordered by (t, src ip, dst ip, kind)
    ScenarioGraph truth;
};

// Sequential /24 sweep state for one infected host.
struct ScanCursor {
    bool have_base = false;
    uint32_t base = 0;   // /24 base address
    int next_octet = 1;  // 1..254
};

// Picks the next probe target: a fresh base /24 (local with probability
// local_subnet_bias, otherwise uniform over the topology's subnets) swept
// sequentially from .1 to .254.
Ipv4 next_scan_target(ScanCursor& cursor, const Host& scanner,
                      const NetworkTopology& topo, const SimConfig& cfg, Rng& rng);

struct AttemptResult {
    std::vector<SimEvent> events;
    EdgeStatus outcome = EdgeStatus::ScanOnly;
};

// One infection attempt against a known host. Emits the scan probe always;
// the backdoor, payload transfer, impact and completion events follow the
// configured delays when the corresponding stage succeeds. A victim whose
// infection already completed (or is in flight) only gets re-scanned.
AttemptResult attempt_infection(const Host& attacker, const Host& victim, int64_t t_us,
                                const SimConfig& cfg, Rng& rng,
                                bool victim_already_infected = false);

// Rebuilds a scenario graph from an event stream alone: per host pair the
// earliest scan/backdoor/transfer times become the edge steps. This is also
// how simulate() derives its truth graph.
ScenarioGraph rebuild_truth(const std::vector<SimEvent>& events, const NetworkTopology& topo);

// Deterministic discrete-event propagation over a validated topology.
// Throws std::invalid_argument when cfg violates its invariants.
SimResult simulate(const NetworkTopology& topo, const SimConfig& cfg);

}  // namespace wormlab
