#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "net.hpp"

namespace wormlab {

struct HostId {
    Ipv4 ip;
    std::string name;

    auto operator<=>(const HostId&) const = default;
};

enum class OsKind : uint8_t { Windows2000, WindowsXp, Other };

const char* os_name(OsKind os);
std::optional<OsKind> parse_os(std::string_view text);

struct Host {
    HostId id;
    OsKind os = OsKind::Other;
    std::vector<PortSpec> vulnerable_ports;  // kept sorted, unique
    bool initially_infected = false;

    bool has_vulnerable_port(PortSpec p) const;
};

struct TrustPair {
    std::string from;
    std::string to;

    auto operator<=>(const TrustPair&) const = default;
};

struct NetworkTopology {
    std::vector<Host> hosts;
    std::vector<Ipv4> subnets;  // /24 base addresses
    std::vector<TrustPair> trust;
    std::vector<std::string> ids_sensors;

    const Host* find_by_ip(Ipv4 ip) const;
    const Host* find_by_name(std::string_view name) const;
};

struct ValidationIssue {
    enum class Kind {
        DuplicateIp,
        DuplicateName,
        EmptyName,
        IpOutsideSubnets,
        NoOrigin,
        DuplicateSubnet,
        UnknownTrustHost,
    };
    Kind kind;
    std::string subject;  // offending host/subnet name
    std::string message;
};

const char* validation_kind_name(ValidationIssue::Kind kind);

// Empty result means the topology satisfies every invariant. All violations
// are collected, not just the first.
std::vector<ValidationIssue> topology_validate(const NetworkTopology& topo);

// The attack steps in their only legal order.
enum class AttackStep : uint8_t { Scan = 0, Exploit = 1, ImpactEffect = 2 };

const char* attack_step_name(AttackStep step);
std::optional<AttackStep> parse_attack_step(std::string_view text);

enum class EdgeStatus : uint8_t { ScanOnly, BackdoorOnly, FullyInfected };

const char* edge_status_name(EdgeStatus status);
std::optional<EdgeStatus> parse_edge_status(std::string_view text);

// Maps an achieved step set to its status. Returns nullopt for the step sets
// that violate the dependency order (anything that is not a prefix of
// Scan < Exploit < ImpactEffect).
std::optional<EdgeStatus> edge_status(const std::set<AttackStep>& steps);

struct StepRecord {
    AttackStep step;
    int64_t t_us;
};

struct AttackEdge {
    HostId attacker;
    HostId victim;
    std::vector<StepRecord> steps;  // prefix of the step order, times strictly increasing
    EdgeStatus status = EdgeStatus::ScanOnly;
    std::vector<std::string> notes;

    bool has_step(AttackStep step) const;
    std::optional<int64_t> step_time(AttackStep step) const;
};

// Builds an edge from per-step achievement times; enforces the prefix rule
// and strict time ordering by truncating at the first violation.
AttackEdge make_edge(HostId attacker, HostId victim,
                     std::optional<int64_t> scan_us,
                     std::optional<int64_t> exploit_us,
                     std::optional<int64_t> impact_us);

enum class HostRole : uint8_t { Attacker, Victim, AttackerVictim, Unaffected };

const char* host_role_name(HostRole role);
std::optional<HostRole> parse_host_role(std::string_view text);

// Role classification over a set of edges:
//   AttackerVictim: fully infected inbound, some outbound edge, and every
//     inbound payload transfer strictly precedes the earliest outbound scan.
//   Victim: inbound edge of at least BackdoorOnly status.
//   Attacker: any outbound edge. A scan-only inbound edge does not demote it.
//   Unaffected: everything else.
// Checked in that order; host_names supplies hosts with no edges at all.
std::map<std::string, HostRole> assign_roles(const std::vector<AttackEdge>& edges,
                                             const std::vector<std::string>& host_names);

struct ScenarioGraph {
    std::vector<AttackEdge> edges;  // sorted by (attacker name, victim name)
    std::map<std::string, HostRole> roles;

    const AttackEdge* find_edge(std::string_view attacker, std::string_view victim) const;
};

// Assembles a graph from edges: sorts them, drops nothing, assigns roles.
ScenarioGraph make_scenario_graph(std::vector<AttackEdge> edges,
                                  const std::vector<std::string>& host_names);

}  // namespace wormlab
