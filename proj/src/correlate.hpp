#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "ingest.hpp"
#include "model.hpp"

namespace wormlab {

struct PatternRules {
    // Maximum gap between consecutive steps on one edge.
    double step_window_s = 300.0;
    // Worm image basenames recognized in process-creation records.
    std::set<std::string> image_names = {"msblast.exe", "blaster.exe"};
    // When set, Scan additionally needs a portsweep alert from the attacker
    // and ImpactEffect needs a TFTP Get alert matching the pair.
    bool require_network_confirmation = false;

    int64_t window_us() const;
    // Case-insensitive basename match against image_names.
    bool matches_image(const std::string& path) const;
};

enum class PatternKind : uint8_t { AttackerPattern, VictimPattern, MultiStepPattern };

const char* pattern_kind_name(PatternKind kind);

struct PatternMatch {
    PatternKind pattern = PatternKind::AttackerPattern;
    std::string host;
    // For attacker: the victim. For victim: the attacker. For multi-step:
    // counterpart = upstream attacker, counterpart2 = downstream victim.
    std::string counterpart;
    std::string counterpart2;
    std::vector<size_t> evidence;  // indices into the analyzed stream, time-ordered
    // Chain step times (scan / exploit / impact) backing the match.
    int64_t scan_us = 0;
    int64_t exploit_us = 0;
    int64_t impact_us = 0;
};

// Attacker pattern: the host's own firewall log shows outbound 135/TCP, then
// outbound 4444/TCP, then inbound 69/UDP from the same counterpart, each gap
// within the step window. Process-creation and portsweep evidence is attached
// when present.
std::vector<PatternMatch> match_attacker(const std::vector<NormalizedEvent>& stream,
                                         const PatternRules& rules,
                                         const std::vector<KnownHost>& hosts);

// Victim pattern: the mirror chain in the victim's own firewall log, with
// impact evidence (RPC termination, reboot, worm process creation, TFTP Get)
// attached when present. Only full three-step chains match.
std::vector<PatternMatch> match_victim(const std::vector<NormalizedEvent>& stream,
                                       const PatternRules& rules,
                                       const std::vector<KnownHost>& hosts);

// Multi-step pattern: a full victim phase followed by attacker behavior, with
// the inbound payload transfer strictly preceding the outbound first scan.
std::vector<PatternMatch> match_multistep(const std::vector<PatternMatch>& attacker_matches,
                                          const std::vector<PatternMatch>& victim_matches,
                                          const PatternRules& rules);

// Reconstructs the scenario graph: every host pair with any step evidence
// (from either side's firewall log) becomes an edge carrying the maximal
// chained step prefix; roles follow the model rules. Pairs whose only
// evidence is IDS alerts are reported scan-only with a note.
ScenarioGraph build_scenario(const std::vector<NormalizedEvent>& stream,
                             const PatternRules& rules,
                             const std::vector<KnownHost>& hosts);

struct Findings {
    std::vector<PatternMatch> attacker;
    std::vector<PatternMatch> victim;
    std::vector<PatternMatch> multistep;
};

Findings collect_findings(const std::vector<NormalizedEvent>& stream,
                          const PatternRules& rules,
                          const std::vector<KnownHost>& hosts);

// Human-readable report: one block per pattern match with evidence lines and
// file:line provenance.
std::string render_findings(const Findings& findings,
                            const std::vector<NormalizedEvent>& stream,
                            const ScenarioGraph& graph, const PatternRules& rules);

}  // namespace wormlab
