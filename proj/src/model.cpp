#include "model.hpp"

#include <algorithm>
#include <cctype>

namespace wormlab {

namespace {

std::string lower(std::string_view text) {
    std::string out(text);
    for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

}  // namespace

const char* os_name(OsKind os) {
    switch (os) {
        case OsKind::Windows2000: return "windows2000";
        case OsKind::WindowsXp: return "windowsxp";
        case OsKind::Other: return "other";
    }
    return "other";
}

std::optional<OsKind> parse_os(std::string_view text) {
    std::string t = lower(text);
    if (t == "windows2000" || t == "win2000" || t == "w2k") return OsKind::Windows2000;
    if (t == "windowsxp" || t == "winxp" || t == "xp") return OsKind::WindowsXp;
    if (t == "other" || t == "centos" || t == "linux") return OsKind::Other;
    return std::nullopt;
}

bool Host::has_vulnerable_port(PortSpec p) const {
    return std::binary_search(vulnerable_ports.begin(), vulnerable_ports.end(), p);
}

const Host* NetworkTopology::find_by_ip(Ipv4 ip) const {
    for (const Host& h : hosts) {
        if (h.id.ip == ip) return &h;
    }
    return nullptr;
}

const Host* NetworkTopology::find_by_name(std::string_view name) const {
    for (const Host& h : hosts) {
        if (h.id.name == name) return &h;
    }
    return nullptr;
}

const char* validation_kind_name(ValidationIssue::Kind kind) {
    switch (kind) {
        case ValidationIssue::Kind::DuplicateIp: return "DuplicateIp";
        case ValidationIssue::Kind::DuplicateName: return "DuplicateName";
        case ValidationIssue::Kind::EmptyName: return "EmptyName";
        case ValidationIssue::Kind::IpOutsideSubnets: return "IpOutsideSubnets";
        case ValidationIssue::Kind::NoOrigin: return "NoOrigin";
        case ValidationIssue::Kind::DuplicateSubnet: return "DuplicateSubnet";
        case ValidationIssue::Kind::UnknownTrustHost: return "UnknownTrustHost";
    }
    return "?";
}

std::vector<ValidationIssue> topology_validate(const NetworkTopology& topo) {
    std::vector<ValidationIssue> issues;
    auto add = [&](ValidationIssue::Kind kind, std::string subject, std::string message) {
        issues.push_back({kind, std::move(subject), std::move(message)});
    };

    std::map<Ipv4, int> ip_count;
    std::map<std::string, int> name_count;
    for (const Host& h : topo.hosts) {
        ip_count[h.id.ip]++;
        name_count[h.id.name]++;
        if (h.id.name.empty()) {
            add(ValidationIssue::Kind::EmptyName, h.id.ip.str(),
                "host " + h.id.ip.str() + " has an empty name");
        }
    }
    for (const auto& [ip, n] : ip_count) {
        if (n > 1) {
            add(ValidationIssue::Kind::DuplicateIp, ip.str(),
                "ip " + ip.str() + " assigned to " + std::to_string(n) + " hosts");
        }
    }
    for (const auto& [name, n] : name_count) {
        if (!name.empty() && n > 1) {
            add(ValidationIssue::Kind::DuplicateName, name,
                "name " + name + " assigned to " + std::to_string(n) + " hosts");
        }
    }

    std::set<Ipv4> subnet_set;
    for (Ipv4 s : topo.subnets) {
        Ipv4 base = s.subnet24();
        if (!subnet_set.insert(base).second) {
            add(ValidationIssue::Kind::DuplicateSubnet, base.str(),
                "subnet " + base.str() + "/24 listed more than once");
        }
    }
    for (const Host& h : topo.hosts) {
        if (!subnet_set.count(h.id.ip.subnet24())) {
            add(ValidationIssue::Kind::IpOutsideSubnets, h.id.name,
                "host " + h.id.name + " (" + h.id.ip.str() + ") is outside every listed subnet");
        }
    }

    bool any_origin = false;
    for (const Host& h : topo.hosts) any_origin = any_origin || h.initially_infected;
    if (!any_origin) {
        add(ValidationIssue::Kind::NoOrigin, "",
            "no host is marked as the initially infected origin");
    }

    for (const TrustPair& t : topo.trust) {
        if (!topo.find_by_name(t.from)) {
            add(ValidationIssue::Kind::UnknownTrustHost, t.from,
                "trust pair references unknown host " + t.from);
        }
        if (!topo.find_by_name(t.to)) {
            add(ValidationIssue::Kind::UnknownTrustHost, t.to,
                "trust pair references unknown host " + t.to);
        }
    }
    return issues;
}

const char* attack_step_name(AttackStep step) {
    switch (step) {
        case AttackStep::Scan: return "scan";
        case AttackStep::Exploit: return "exploit";
        case AttackStep::ImpactEffect: return "impact_effect";
    }
    return "?";
}

std::optional<AttackStep> parse_attack_step(std::string_view text) {
    std::string t = lower(text);
    if (t == "scan") return AttackStep::Scan;
    if (t == "exploit") return AttackStep::Exploit;
    if (t == "impact_effect" || t == "impact") return AttackStep::ImpactEffect;
    return std::nullopt;
}

const char* edge_status_name(EdgeStatus status) {
    switch (status) {
        case EdgeStatus::ScanOnly: return "scan_only";
        case EdgeStatus::BackdoorOnly: return "backdoor_only";
        case EdgeStatus::FullyInfected: return "fully_infected";
    }
    return "?";
}

std::optional<EdgeStatus> parse_edge_status(std::string_view text) {
    std::string t = lower(text);
    if (t == "scan_only" || t == "scanonly") return EdgeStatus::ScanOnly;
    if (t == "backdoor_only" || t == "backdooronly") return EdgeStatus::BackdoorOnly;
    if (t == "fully_infected" || t == "fullyinfected") return EdgeStatus::FullyInfected;
    return std::nullopt;
}

std::optional<EdgeStatus> edge_status(const std::set<AttackStep>& steps) {
    const bool scan = steps.count(AttackStep::Scan) > 0;
    const bool exploit = steps.count(AttackStep::Exploit) > 0;
    const bool impact = steps.count(AttackStep::ImpactEffect) > 0;
    if (scan && exploit && impact) return EdgeStatus::FullyInfected;
    if (scan && exploit && !impact) return EdgeStatus::BackdoorOnly;
    if (scan && !exploit && !impact) return EdgeStatus::ScanOnly;
    return std::nullopt;  // not a prefix of the step order
}

bool AttackEdge::has_step(AttackStep step) const {
    for (const StepRecord& s : steps) {
        if (s.step == step) return true;
    }
    return false;
}

std::optional<int64_t> AttackEdge::step_time(AttackStep step) const {
    for (const StepRecord& s : steps) {
        if (s.step == step) return s.t_us;
    }
    return std::nullopt;
}

AttackEdge make_edge(HostId attacker, HostId victim,
                     std::optional<int64_t> scan_us,
                     std::optional<int64_t> exploit_us,
                     std::optional<int64_t> impact_us) {
    AttackEdge edge;
    edge.attacker = std::move(attacker);
    edge.victim = std::move(victim);
    if (scan_us) {
        edge.steps.push_back({AttackStep::Scan, *scan_us});
        if (exploit_us && *exploit_us > *scan_us) {
            edge.steps.push_back({AttackStep::Exploit, *exploit_us});
            if (impact_us && *impact_us > *exploit_us) {
                edge.steps.push_back({AttackStep::ImpactEffect, *impact_us});
            }
        }
    }
    switch (edge.steps.size()) {
        case 3: edge.status = EdgeStatus::FullyInfected; break;
        case 2: edge.status = EdgeStatus::BackdoorOnly; break;
        default: edge.status = EdgeStatus::ScanOnly; break;
    }
    return edge;
}

const char* host_role_name(HostRole role) {
    switch (role) {
        case HostRole::Attacker: return "attacker";
        case HostRole::Victim: return "victim";
        case HostRole::AttackerVictim: return "attacker_victim";
        case HostRole::Unaffected: return "unaffected";
    }
    return "?";
}

std::optional<HostRole> parse_host_role(std::string_view text) {
    std::string t = lower(text);
    if (t == "attacker") return HostRole::Attacker;
    if (t == "victim") return HostRole::Victim;
    if (t == "attacker_victim" || t == "attackervictim") return HostRole::AttackerVictim;
    if (t == "unaffected") return HostRole::Unaffected;
    return std::nullopt;
}

std::map<std::string, HostRole> assign_roles(const std::vector<AttackEdge>& edges,
                                             const std::vector<std::string>& host_names) {
    struct PerHost {
        bool outbound = false;
        bool victim_inbound = false;        // inbound >= BackdoorOnly
        std::optional<int64_t> max_inbound_impact_us;
        std::optional<int64_t> min_outbound_scan_us;
    };
    std::map<std::string, PerHost> acc;
    for (const std::string& name : host_names) acc[name];

    for (const AttackEdge& e : edges) {
        PerHost& att = acc[e.attacker.name];
        att.outbound = true;
        if (auto t = e.step_time(AttackStep::Scan)) {
            if (!att.min_outbound_scan_us || *t < *att.min_outbound_scan_us) {
                att.min_outbound_scan_us = *t;
            }
        }
        PerHost& vic = acc[e.victim.name];
        if (e.status != EdgeStatus::ScanOnly) vic.victim_inbound = true;
        if (e.status == EdgeStatus::FullyInfected) {
            if (auto t = e.step_time(AttackStep::ImpactEffect)) {
                if (!vic.max_inbound_impact_us || *t > *vic.max_inbound_impact_us) {
                    vic.max_inbound_impact_us = *t;
                }
            }
        }
    }

    std::map<std::string, HostRole> roles;
    for (const auto& [name, h] : acc) {
        HostRole role = HostRole::Unaffected;
        const bool fully_infected = h.max_inbound_impact_us.has_value();
        if (fully_infected && h.outbound && h.min_outbound_scan_us &&
            *h.max_inbound_impact_us < *h.min_outbound_scan_us) {
            role = HostRole::AttackerVictim;
        } else if (h.victim_inbound) {
            role = HostRole::Victim;
        } else if (h.outbound) {
            role = HostRole::Attacker;
        }
        roles[name] = role;
    }
    return roles;
}

const AttackEdge* ScenarioGraph::find_edge(std::string_view attacker,
                                           std::string_view victim) const {
    for (const AttackEdge& e : edges) {
        if (e.attacker.name == attacker && e.victim.name == victim) return &e;
    }
    return nullptr;
}

ScenarioGraph make_scenario_graph(std::vector<AttackEdge> edges,
                                  const std::vector<std::string>& host_names) {
    std::sort(edges.begin(), edges.end(), [](const AttackEdge& a, const AttackEdge& b) {
        if (a.attacker.name != b.attacker.name) return a.attacker.name < b.attacker.name;
        return a.victim.name < b.victim.name;
    });
    ScenarioGraph g;
    g.roles = assign_roles(edges, host_names);
    g.edges = std::move(edges);
    return g;
}

}  // namespace wormlab
