#include "correlate.hpp"

#include <algorithm>
#include <cctype>

#include "timeutil.hpp"

namespace wormlab {

int64_t PatternRules::window_us() const {
    return seconds_to_us(step_window_s);
}

bool PatternRules::matches_image(const std::string& path) const {
    size_t pos = path.find_last_of("/\\");
    std::string base = pos == std::string::npos ? path : path.substr(pos + 1);
    for (char& c : base) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return image_names.count(base) > 0;
}

const char* pattern_kind_name(PatternKind kind) {
    switch (kind) {
        case PatternKind::AttackerPattern: return "attacker";
        case PatternKind::VictimPattern: return "victim";
        case PatternKind::MultiStepPattern: return "multi_step";
    }
    return "?";
}

namespace {

struct Rec {
    int64_t t;
    size_t idx;
};

// Evidence for one ordered (attacker, victim) pair. "_own" lists are
// restricted to records found in that role's own log, which is what the
// attacker/victim pattern definitions use; "_any" lists accept either side
// and back the scenario-graph reconstruction.
struct PairEvidence {
    std::vector<Rec> scan_any, exploit_any, impact_any;
    std::vector<Rec> scan_att_own, exploit_att_own, impact_att_own;
    std::vector<Rec> scan_vic_own, exploit_vic_own, impact_vic_own;
    std::vector<Rec> tftp_alerts;
    std::vector<Rec> sweep_triggers;
};

struct EvidenceIndex {
    std::map<std::pair<std::string, std::string>, PairEvidence> pairs;
    std::map<std::string, std::vector<Rec>> portsweeps;    // by attacker host
    std::map<std::string, std::vector<Rec>> proc_creates;  // worm images only
    std::map<std::string, std::vector<Rec>> impact_logs;   // RPC crash / reboot
    std::vector<std::string> host_names;                   // sorted
};

EvidenceIndex build_index(const std::vector<NormalizedEvent>& stream,
                          const PatternRules& rules,
                          const std::vector<KnownHost>& hosts) {
    EvidenceIndex index;
    std::map<Ipv4, std::string> by_ip;
    for (const KnownHost& h : hosts) {
        index.host_names.push_back(h.name);
        if (h.ip && !by_ip.count(*h.ip)) by_ip[*h.ip] = h.name;
    }
    std::sort(index.host_names.begin(), index.host_names.end());

    auto host_of = [&](const std::optional<Ipv4>& ip) -> const std::string* {
        if (!ip) return nullptr;
        auto it = by_ip.find(*ip);
        return it == by_ip.end() ? nullptr : &it->second;
    };

    for (size_t i = 0; i < stream.size(); ++i) {
        const NormalizedEvent& e = stream[i];
        const Rec rec{e.t_us, i};
        switch (e.kind) {
            case EventKind::FwOpen:
            case EventKind::FwOpenInbound: {
                if (!e.dst_port || !e.proto) break;
                const bool inbound = e.kind == EventKind::FwOpenInbound;
                if (*e.dst_port == kTftpPort.number && *e.proto == Proto::Udp) {
                    // The victim opens the transfer, so on this record the
                    // source is the victim and the destination the attacker.
                    const std::string* vic = host_of(e.src_ip);
                    const std::string* att = host_of(e.dst_ip);
                    if (!vic || !att || *vic == *att) break;
                    PairEvidence& pe = index.pairs[{*att, *vic}];
                    pe.impact_any.push_back(rec);
                    if (inbound && e.origin == *att) pe.impact_att_own.push_back(rec);
                    if (!inbound && e.origin == *vic) pe.impact_vic_own.push_back(rec);
                } else if ((*e.dst_port == kRpcPort.number || *e.dst_port == kBackdoorPort.number) &&
                           *e.proto == Proto::Tcp) {
                    const std::string* att = host_of(e.src_ip);
                    const std::string* vic = host_of(e.dst_ip);
                    if (!att || !vic || *att == *vic) break;
                    PairEvidence& pe = index.pairs[{*att, *vic}];
                    const bool is_scan = *e.dst_port == kRpcPort.number;
                    auto& any = is_scan ? pe.scan_any : pe.exploit_any;
                    any.push_back(rec);
                    if (!inbound && e.origin == *att) {
                        (is_scan ? pe.scan_att_own : pe.exploit_att_own).push_back(rec);
                    }
                    if (inbound && e.origin == *vic) {
                        (is_scan ? pe.scan_vic_own : pe.exploit_vic_own).push_back(rec);
                    }
                }
                break;
            }
            case EventKind::IdsPortsweep: {
                const std::string* att = host_of(e.src_ip);
                if (!att) break;
                index.portsweeps[*att].push_back(rec);
                const std::string* vic = host_of(e.dst_ip);
                if (vic && *vic != *att) index.pairs[{*att, *vic}].sweep_triggers.push_back(rec);
                break;
            }
            case EventKind::IdsTftpGet: {
                const std::string* vic = host_of(e.src_ip);
                const std::string* att = host_of(e.dst_ip);
                if (!vic || !att || *vic == *att) break;
                index.pairs[{*att, *vic}].tftp_alerts.push_back(rec);
                break;
            }
            case EventKind::ProcCreate:
                if (rules.matches_image(e.detail)) index.proc_creates[e.origin].push_back(rec);
                break;
            case EventKind::RpcTerminated:
            case EventKind::Reboot:
                index.impact_logs[e.origin].push_back(rec);
                break;
        }
    }
    return index;
}

struct Chain {
    int length = 0;  // achieved steps, 0..3
    Rec scan{}, exploit{}, impact{};
};

// Longest chained step prefix over the given evidence; among equal lengths
// the lexicographically earliest chain. Considering every scan candidate
// (not just the first) keeps the result monotone under evidence deletion.
Chain best_chain(const std::vector<Rec>& scans, const std::vector<Rec>& exploits,
                 const std::vector<Rec>& impacts, int64_t window_us) {
    auto first_after = [](const std::vector<Rec>& recs, int64_t after,
                          int64_t limit) -> const Rec* {
        auto it = std::upper_bound(recs.begin(), recs.end(), after,
                                   [](int64_t t, const Rec& r) { return t < r.t; });
        if (it == recs.end() || it->t > limit) return nullptr;
        return &*it;
    };

    for (const Rec& s : scans) {
        for (const Rec& e : exploits) {
            if (e.t <= s.t) continue;
            if (e.t > s.t + window_us) break;
            if (const Rec* i = first_after(impacts, e.t, e.t + window_us)) {
                return {3, s, e, *i};
            }
        }
    }
    for (const Rec& s : scans) {
        if (const Rec* e = first_after(exploits, s.t, s.t + window_us)) {
            return {2, s, *e, {}};
        }
    }
    if (!scans.empty()) return {1, scans.front(), {}, {}};
    return {};
}

std::vector<size_t> finish_evidence(std::vector<Rec> recs) {
    std::sort(recs.begin(), recs.end(), [](const Rec& a, const Rec& b) {
        if (a.t != b.t) return a.t < b.t;
        return a.idx < b.idx;
    });
    std::vector<size_t> out;
    out.reserve(recs.size());
    for (const Rec& r : recs) {
        if (out.empty() || out.back() != r.idx) out.push_back(r.idx);
    }
    return out;
}

}  // namespace

std::vector<PatternMatch> match_attacker(const std::vector<NormalizedEvent>& stream,
                                         const PatternRules& rules,
                                         const std::vector<KnownHost>& hosts) {
    EvidenceIndex index = build_index(stream, rules, hosts);
    std::vector<PatternMatch> matches;
    for (const auto& [key, pe] : index.pairs) {
        const auto& [attacker, victim] = key;
        Chain chain = best_chain(pe.scan_att_own, pe.exploit_att_own, pe.impact_att_own,
                                 rules.window_us());
        if (chain.length < 3) continue;

        const auto sweep_it = index.portsweeps.find(attacker);
        const bool has_sweep = sweep_it != index.portsweeps.end();
        if (rules.require_network_confirmation) {
            if (!has_sweep) continue;
            if (pe.tftp_alerts.empty()) continue;
        }

        PatternMatch m;
        m.pattern = PatternKind::AttackerPattern;
        m.host = attacker;
        m.counterpart = victim;
        m.scan_us = chain.scan.t;
        m.exploit_us = chain.exploit.t;
        m.impact_us = chain.impact.t;
        std::vector<Rec> ev = {chain.scan, chain.exploit, chain.impact};
        if (auto it = index.proc_creates.find(attacker); it != index.proc_creates.end()) {
            ev.insert(ev.end(), it->second.begin(), it->second.end());
        }
        if (has_sweep) ev.insert(ev.end(), sweep_it->second.begin(), sweep_it->second.end());
        ev.insert(ev.end(), pe.tftp_alerts.begin(), pe.tftp_alerts.end());
        m.evidence = finish_evidence(std::move(ev));
        matches.push_back(std::move(m));
    }
    return matches;
}

std::vector<PatternMatch> match_victim(const std::vector<NormalizedEvent>& stream,
                                       const PatternRules& rules,
                                       const std::vector<KnownHost>& hosts) {
    EvidenceIndex index = build_index(stream, rules, hosts);
    std::vector<PatternMatch> matches;
    for (const auto& [key, pe] : index.pairs) {
        const auto& [attacker, victim] = key;
        Chain chain = best_chain(pe.scan_vic_own, pe.exploit_vic_own, pe.impact_vic_own,
                                 rules.window_us());
        if (chain.length < 3) continue;
        if (rules.require_network_confirmation && pe.tftp_alerts.empty()) continue;

        PatternMatch m;
        m.pattern = PatternKind::VictimPattern;
        m.host = victim;
        m.counterpart = attacker;
        m.scan_us = chain.scan.t;
        m.exploit_us = chain.exploit.t;
        m.impact_us = chain.impact.t;
        std::vector<Rec> ev = {chain.scan, chain.exploit, chain.impact};
        if (auto it = index.impact_logs.find(victim); it != index.impact_logs.end()) {
            ev.insert(ev.end(), it->second.begin(), it->second.end());
        }
        if (auto it = index.proc_creates.find(victim); it != index.proc_creates.end()) {
            ev.insert(ev.end(), it->second.begin(), it->second.end());
        }
        ev.insert(ev.end(), pe.tftp_alerts.begin(), pe.tftp_alerts.end());
        m.evidence = finish_evidence(std::move(ev));
        matches.push_back(std::move(m));
    }
    return matches;
}

std::vector<PatternMatch> match_multistep(const std::vector<PatternMatch>& attacker_matches,
                                          const std::vector<PatternMatch>& victim_matches,
                                          const PatternRules&) {
    std::vector<PatternMatch> matches;
    for (const PatternMatch& vm : victim_matches) {
        for (const PatternMatch& am : attacker_matches) {
            if (am.host != vm.host) continue;
            // The victim phase must complete before the host starts scanning
            // its own target.
            if (!(vm.impact_us < am.scan_us)) continue;
            PatternMatch m;
            m.pattern = PatternKind::MultiStepPattern;
            m.host = vm.host;
            m.counterpart = vm.counterpart;    // upstream attacker
            m.counterpart2 = am.counterpart;   // downstream victim
            m.scan_us = am.scan_us;
            m.exploit_us = am.exploit_us;
            m.impact_us = vm.impact_us;
            std::vector<size_t> ev = vm.evidence;
            ev.insert(ev.end(), am.evidence.begin(), am.evidence.end());
            std::sort(ev.begin(), ev.end());
            ev.erase(std::unique(ev.begin(), ev.end()), ev.end());
            m.evidence = std::move(ev);
            matches.push_back(std::move(m));
        }
    }
    return matches;
}

ScenarioGraph build_scenario(const std::vector<NormalizedEvent>& stream,
                             const PatternRules& rules,
                             const std::vector<KnownHost>& hosts) {
    EvidenceIndex index = build_index(stream, rules, hosts);
    std::map<std::string, Ipv4> host_ips;
    for (const KnownHost& h : hosts) {
        if (h.ip) host_ips[h.name] = *h.ip;
    }
    auto host_id = [&](const std::string& name) {
        auto it = host_ips.find(name);
        return HostId{it == host_ips.end() ? Ipv4{} : it->second, name};
    };

    std::vector<AttackEdge> edges;
    for (const auto& [key, pe] : index.pairs) {
        const auto& [attacker, victim] = key;
        Chain chain = best_chain(pe.scan_any, pe.exploit_any, pe.impact_any, rules.window_us());
        if (rules.require_network_confirmation && chain.length > 0) {
            if (!index.portsweeps.count(attacker)) chain.length = 0;
            else if (chain.length == 3 && pe.tftp_alerts.empty()) chain.length = 2;
        }

        if (chain.length == 0) {
            // Alert-only pair: the firewall saw nothing, the sensor did.
            std::optional<int64_t> first_alert;
            for (const auto* list : {&pe.sweep_triggers, &pe.tftp_alerts}) {
                if (!list->empty() && (!first_alert || list->front().t < *first_alert)) {
                    first_alert = list->front().t;
                }
            }
            if (first_alert) {
                AttackEdge edge = make_edge(host_id(attacker), host_id(victim),
                                            *first_alert, std::nullopt, std::nullopt);
                edge.notes.push_back("network-only evidence");
                edges.push_back(std::move(edge));
            }
            continue;
        }

        edges.push_back(make_edge(
            host_id(attacker), host_id(victim), chain.scan.t,
            chain.length >= 2 ? std::optional<int64_t>(chain.exploit.t) : std::nullopt,
            chain.length >= 3 ? std::optional<int64_t>(chain.impact.t) : std::nullopt));
    }

    return make_scenario_graph(std::move(edges), index.host_names);
}

Findings collect_findings(const std::vector<NormalizedEvent>& stream,
                          const PatternRules& rules,
                          const std::vector<KnownHost>& hosts) {
    Findings f;
    f.attacker = match_attacker(stream, rules, hosts);
    f.victim = match_victim(stream, rules, hosts);
    f.multistep = match_multistep(f.attacker, f.victim, rules);
    return f;
}

std::string render_findings(const Findings& findings,
                            const std::vector<NormalizedEvent>& stream,
                            const ScenarioGraph& graph, const PatternRules& rules) {
    std::string out;
    char buf[256];
    std::snprintf(buf, sizeof(buf),
                  "wormlab findings\nrules: step_window_s=%g require_network_confirmation=%s\n",
                  rules.step_window_s, rules.require_network_confirmation ? "true" : "false");
    out += buf;
    std::snprintf(buf, sizeof(buf), "hosts: %zu  edges: %zu\n", graph.roles.size(),
                  graph.edges.size());
    out += buf;

    out += "\nroles:\n";
    for (const auto& [name, role] : graph.roles) {
        out += "  " + name + ": " + host_role_name(role) + "\n";
    }

    out += "\nedges:\n";
    for (const AttackEdge& e : graph.edges) {
        out += "  " + e.attacker.name + " -> " + e.victim.name + "  [" +
               edge_status_name(e.status) + "]";
        for (const std::string& note : e.notes) out += "  (" + note + ")";
        out += "\n";
    }

    auto render_match = [&](const PatternMatch& m) {
        out += "\n" + std::string(pattern_kind_name(m.pattern)) + " pattern: " + m.host;
        if (m.pattern == PatternKind::AttackerPattern) out += " -> " + m.counterpart;
        if (m.pattern == PatternKind::VictimPattern) out += " <- " + m.counterpart;
        if (m.pattern == PatternKind::MultiStepPattern) {
            out += " (victim of " + m.counterpart + ", attacker of " + m.counterpart2 + ")";
        }
        out += "\n";
        for (size_t idx : m.evidence) {
            const NormalizedEvent& e = stream[idx];
            out += "  " + e.file + ":" + std::to_string(e.line) + "  " + e.raw + "\n";
        }
    };
    for (const PatternMatch& m : findings.attacker) render_match(m);
    for (const PatternMatch& m : findings.victim) render_match(m);
    for (const PatternMatch& m : findings.multistep) render_match(m);
    return out;
}

}  // namespace wormlab
