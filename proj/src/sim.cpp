#include "sim.hpp"

#include <algorithm>
#include <queue>
#include <set>
#include <stdexcept>

#include "timeutil.hpp"

namespace wormlab {

double SimConfig::p_infect_for(OsKind os) const {
    auto it = p_infect.find(os);
    return it == p_infect.end() ? 0.0 : it->second;
}

std::vector<std::string> SimConfig::validate() const {
    std::vector<std::string> issues;
    auto check_prob = [&](double v, const char* what) {
        if (!(v >= 0.0 && v <= 1.0)) {
            issues.push_back(std::string(what) + " must be in [0, 1]");
        }
    };
    if (duration_s < 0.0) issues.push_back("duration_s must be >= 0");
    if (!(scan_interval_s > 0.0)) issues.push_back("scan_interval_s must be > 0");
    if (!(exploit_delay_s > 0.0)) issues.push_back("exploit_delay_s must be > 0");
    if (!(transfer_delay_s > 0.0)) issues.push_back("transfer_delay_s must be > 0");
    if (!(impact_delay_s > 0.0)) issues.push_back("impact_delay_s must be > 0");
    check_prob(local_subnet_bias, "local_subnet_bias");
    check_prob(p_transfer_success, "p_transfer_success");
    for (const auto& [os, p] : p_infect) {
        check_prob(p, (std::string("p_infect[") + os_name(os) + "]").c_str());
    }
    return issues;
}

const char* sim_event_kind_name(SimEventKind kind) {
    switch (kind) {
        case SimEventKind::ScanProbe: return "scan_probe";
        case SimEventKind::BackdoorOpen: return "backdoor_open";
        case SimEventKind::TftpTransfer: return "tftp_transfer";
        case SimEventKind::ImpactRpcTerminated: return "impact_rpc_terminated";
        case SimEventKind::ImpactReboot: return "impact_reboot";
        case SimEventKind::InfectionComplete: return "infection_complete";
    }
    return "?";
}

Ipv4 next_scan_target(ScanCursor& cursor, const Host& scanner,
                      const NetworkTopology& topo, const SimConfig& cfg, Rng& rng) {
    if (!cursor.have_base || cursor.next_octet > 254) {
        if (!topo.subnets.empty() && !rng.bernoulli(cfg.local_subnet_bias)) {
            size_t idx = static_cast<size_t>(rng.uniform_index(topo.subnets.size()));
            cursor.base = topo.subnets[idx].subnet24().value;
        } else {
            cursor.base = scanner.id.ip.subnet24().value;
        }
        cursor.next_octet = 1;
        cursor.have_base = true;
    }
    Ipv4 target{cursor.base | static_cast<uint32_t>(cursor.next_octet)};
    cursor.next_octet++;
    return target;
}

AttemptResult attempt_infection(const Host& attacker, const Host& victim, int64_t t_us,
                                const SimConfig& cfg, Rng& rng,
                                bool victim_already_infected) {
    AttemptResult result;
    auto emit = [&](int64_t t, SimEventKind kind, PortSpec port) {
        result.events.push_back({t, kind, attacker.id, victim.id, port});
    };

    emit(t_us, SimEventKind::ScanProbe, kRpcPort);
    result.outcome = EdgeStatus::ScanOnly;
    if (victim_already_infected) return result;

    const auto forced_it =
        cfg.forced_outcomes.find({attacker.id.name, victim.id.name});
    const bool forced = forced_it != cfg.forced_outcomes.end();

    bool backdoor;
    if (forced) {
        backdoor = forced_it->second >= EdgeStatus::BackdoorOnly;
    } else {
        backdoor = victim.has_vulnerable_port(kRpcPort) &&
                   rng.bernoulli(cfg.p_infect_for(victim.os));
    }
    if (!backdoor) return result;

    const int64_t exploit_t = t_us + seconds_to_us(cfg.exploit_delay_s);
    emit(exploit_t, SimEventKind::BackdoorOpen, kBackdoorPort);
    result.outcome = EdgeStatus::BackdoorOnly;

    bool transfer;
    if (forced) {
        transfer = forced_it->second >= EdgeStatus::FullyInfected;
    } else {
        transfer = rng.bernoulli(cfg.p_transfer_success);
    }
    if (!transfer) return result;

    const int64_t transfer_t = exploit_t + seconds_to_us(cfg.transfer_delay_s);
    const int64_t impact_t = transfer_t + seconds_to_us(cfg.impact_delay_s);
    emit(transfer_t, SimEventKind::TftpTransfer, kTftpPort);
    emit(impact_t, SimEventKind::ImpactRpcTerminated, kRpcPort);
    emit(impact_t, SimEventKind::ImpactReboot, kRpcPort);
    emit(impact_t, SimEventKind::InfectionComplete, kRpcPort);
    result.outcome = EdgeStatus::FullyInfected;
    return result;
}

ScenarioGraph rebuild_truth(const std::vector<SimEvent>& events, const NetworkTopology& topo) {
    struct PairTimes {
        std::optional<int64_t> scan, exploit, impact;
    };
    std::map<std::pair<Ipv4, Ipv4>, PairTimes> pairs;
    for (const SimEvent& e : events) {
        if (e.dst.name.empty() || !topo.find_by_ip(e.dst.ip) || !topo.find_by_ip(e.src.ip)) {
            continue;  // probe into empty address space
        }
        PairTimes& pt = pairs[{e.src.ip, e.dst.ip}];
        auto keep_earliest = [](std::optional<int64_t>& slot, int64_t t) {
            if (!slot || t < *slot) slot = t;
        };
        switch (e.kind) {
            case SimEventKind::ScanProbe: keep_earliest(pt.scan, e.t_us); break;
            case SimEventKind::BackdoorOpen: keep_earliest(pt.exploit, e.t_us); break;
            case SimEventKind::TftpTransfer: keep_earliest(pt.impact, e.t_us); break;
            default: break;  // impact/completion events carry no new step
        }
    }

    std::vector<AttackEdge> edges;
    for (const auto& [key, pt] : pairs) {
        const Host* src = topo.find_by_ip(key.first);
        const Host* dst = topo.find_by_ip(key.second);
        AttackEdge edge = make_edge(src->id, dst->id, pt.scan, pt.exploit, pt.impact);
        if (!edge.steps.empty()) edges.push_back(std::move(edge));
    }

    std::vector<std::string> names;
    names.reserve(topo.hosts.size());
    for (const Host& h : topo.hosts) names.push_back(h.id.name);
    return make_scenario_graph(std::move(edges), names);
}

SimResult simulate(const NetworkTopology& topo, const SimConfig& cfg) {
    {
        auto issues = cfg.validate();
        if (!issues.empty()) {
            std::string msg = "invalid simulation config:";
            for (const auto& s : issues) msg += " " + s + ";";
            throw std::invalid_argument(msg);
        }
    }

    const int64_t duration_us = seconds_to_us(cfg.duration_s);
    const int64_t interval_us = seconds_to_us(cfg.scan_interval_s);

    struct Tick {
        int64_t t_us;
        Ipv4 host_ip;
        bool operator>(const Tick& o) const {
            if (t_us != o.t_us) return t_us > o.t_us;
            return host_ip > o.host_ip;
        }
    };
    std::priority_queue<Tick, std::vector<Tick>, std::greater<Tick>> ticks;

    Rng rng(cfg.seed);
    std::map<Ipv4, ScanCursor> cursors;
    // Hosts whose infection has completed or is in flight; re-probing them
    // yields only another scan.
    std::set<Ipv4> claimed;

    for (const Host& h : topo.hosts) {
        if (h.initially_infected) {
            claimed.insert(h.id.ip);
            if (interval_us <= duration_us) ticks.push({interval_us, h.id.ip});
        }
    }

    SimResult result;
    while (!ticks.empty()) {
        Tick tick = ticks.top();
        ticks.pop();
        if (tick.t_us > duration_us) continue;

        const Host* scanner = topo.find_by_ip(tick.host_ip);
        Ipv4 target = next_scan_target(cursors[tick.host_ip], *scanner, topo, cfg, rng);
        if (target != scanner->id.ip) {
            const Host* victim = topo.find_by_ip(target);
            if (victim == nullptr) {
                // Nobody home; the probe itself is still observable.
                result.events.push_back({tick.t_us, SimEventKind::ScanProbe, scanner->id,
                                         HostId{target, ""}, kRpcPort});
            } else {
                AttemptResult attempt = attempt_infection(
                    *scanner, *victim, tick.t_us, cfg, rng, claimed.count(target) > 0);
                for (const SimEvent& e : attempt.events) {
                    if (e.t_us > duration_us) continue;
                    result.events.push_back(e);
                    if (e.kind == SimEventKind::InfectionComplete) {
                        int64_t first_scan = e.t_us + interval_us;
                        if (first_scan <= duration_us) ticks.push({first_scan, victim->id.ip});
                    }
                }
                if (attempt.outcome == EdgeStatus::FullyInfected) claimed.insert(target);
            }
        }
        int64_t next = tick.t_us + interval_us;
        if (next <= duration_us) ticks.push({next, tick.host_ip});
    }

    std::stable_sort(result.events.begin(), result.events.end(),
                     [](const SimEvent& a, const SimEvent& b) {
                         if (a.t_us != b.t_us) return a.t_us < b.t_us;
                         if (a.src.ip != b.src.ip) return a.src.ip < b.src.ip;
                         if (a.dst.ip != b.dst.ip) return a.dst.ip < b.dst.ip;
                         return a.kind < b.kind;
                     });
    result.truth = rebuild_truth(result.events, topo);
    return result;
}

}  // namespace wormlab
