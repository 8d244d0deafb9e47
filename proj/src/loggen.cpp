#include "loggen.hpp"

#include <cstdio>
#include <map>
#include <set>

namespace wormlab {

namespace {

constexpr uint16_t kFirstEphemeralPort = 1025;

// The host that opens the connection: the attacker for scan and backdoor
// traffic, the victim for the TFTP pull (it downloads from the attacker).
const HostId* initiator(const SimEvent& e) {
    switch (e.kind) {
        case SimEventKind::ScanProbe:
        case SimEventKind::BackdoorOpen:
            return &e.src;
        case SimEventKind::TftpTransfer:
            return &e.dst;
        default:
            return nullptr;
    }
}

std::string header(const char* type, const Host& host) {
    std::string out = "# wormlab ";
    out += type;
    out += " log v1\n# host ";
    out += host.id.name;
    out += " ";
    out += host.id.ip.str();
    out += "\n";
    return out;
}

void append_firewall_line(std::string& out, int64_t t_us, const char* action, Proto proto,
                          Ipv4 src, Ipv4 dst, uint16_t sport, uint16_t dport) {
    char buf[128];
    std::snprintf(buf, sizeof(buf), "%s %s %s %s %s %u %u\n",
                  format_host_time(t_us).c_str(), action, proto_name(proto),
                  src.str().c_str(), dst.str().c_str(), sport, dport);
    out += buf;
}

}  // namespace

std::vector<uint16_t> assign_ephemeral_ports(const std::vector<SimEvent>& events) {
    std::vector<uint16_t> ports(events.size(), 0);
    std::map<Ipv4, uint32_t> counters;
    for (size_t i = 0; i < events.size(); ++i) {
        const HostId* host = initiator(events[i]);
        if (!host) continue;
        uint32_t& next = counters.try_emplace(host->ip, kFirstEphemeralPort).first->second;
        ports[i] = static_cast<uint16_t>(next);
        next = next >= 65535 ? kFirstEphemeralPort : next + 1;
    }
    return ports;
}

std::string emit_firewall(const std::vector<SimEvent>& events,
                          const std::vector<uint16_t>& eph_ports,
                          const Host& host, const LoggenOptions& opts) {
    std::string out = header("firewall", host);
    for (size_t i = 0; i < events.size(); ++i) {
        const SimEvent& e = events[i];
        const int64_t wall = opts.wallclock_base_us + e.t_us;
        switch (e.kind) {
            case SimEventKind::ScanProbe:
            case SimEventKind::BackdoorOpen:
                if (e.src.ip == host.id.ip) {
                    append_firewall_line(out, wall, "OPEN", e.port.proto,
                                         e.src.ip, e.dst.ip, eph_ports[i], e.port.number);
                } else if (e.dst.ip == host.id.ip && !e.dst.name.empty()) {
                    append_firewall_line(out, wall, "OPEN-INBOUND", e.port.proto,
                                         e.src.ip, e.dst.ip, eph_ports[i], e.port.number);
                }
                break;
            case SimEventKind::TftpTransfer:
                // The victim pulls the payload from the attacker's TFTP server.
                if (e.dst.ip == host.id.ip) {
                    append_firewall_line(out, wall, "OPEN", e.port.proto,
                                         e.dst.ip, e.src.ip, eph_ports[i], e.port.number);
                } else if (e.src.ip == host.id.ip) {
                    append_firewall_line(out, wall, "OPEN-INBOUND", e.port.proto,
                                         e.dst.ip, e.src.ip, eph_ports[i], e.port.number);
                }
                break;
            default:
                break;  // impact events are not firewall-visible
        }
    }
    return out;
}

std::string emit_security(const std::vector<SimEvent>& events, const Host& host,
                          const LoggenOptions& opts) {
    std::string out = header("security", host);
    auto append_592 = [&](int64_t wall_us) {
        out += format_host_time(wall_us);
        out += ",592,Process Created,C:\\WINDOWS\\system32\\msblast.exe\n";
    };
    if (host.initially_infected) append_592(opts.wallclock_base_us);
    for (const SimEvent& e : events) {
        if (e.kind == SimEventKind::InfectionComplete && e.dst.ip == host.id.ip) {
            append_592(opts.wallclock_base_us + e.t_us);
        }
    }
    return out;
}

std::string emit_system(const std::vector<SimEvent>& events, const Host& host,
                        const LoggenOptions& opts) {
    std::string out = header("system", host);
    for (const SimEvent& e : events) {
        if (e.dst.ip != host.id.ip) continue;
        if (e.kind == SimEventKind::ImpactRpcTerminated) {
            out += format_host_time(opts.wallclock_base_us + e.t_us);
            out += ",RPC_TERMINATED,\"The Remote Procedure Call (RPC) service "
                   "terminated unexpectedly\"\n";
        } else if (e.kind == SimEventKind::ImpactReboot) {
            out += format_host_time(opts.wallclock_base_us + e.t_us);
            out += ",SYSTEM_REBOOT,\"Windows must now restart\"\n";
        }
    }
    return out;
}

std::string emit_application(const Host& host, const LoggenOptions&) {
    // No Blaster fingerprint is defined for the application log; the file
    // exists so collection and parsing cover all five formats.
    return header("application", host);
}

std::string emit_ids(const std::vector<SimEvent>& events,
                     const std::vector<uint16_t>& eph_ports,
                     const std::string& sensor, const LoggenOptions& opts) {
    int year, mo, d, h, mi, s;
    epoch_s_to_civil(opts.wallclock_base_us / kMicrosPerSecond, year, mo, d, h, mi, s);

    std::string out = "# wormlab ids alert log v1\n# sensor " + sensor + "\n# year " +
                      std::to_string(year) + "\n";
    auto append_alert = [&](int64_t wall_us, const char* signature, Proto proto,
                            Ipv4 src, uint16_t sport, Ipv4 dst, uint16_t dport) {
        char buf[160];
        std::snprintf(buf, sizeof(buf), "%s [**] %s [**] {%s} %s:%u -> %s:%u\n",
                      format_ids_time(wall_us).c_str(), signature, proto_name(proto),
                      src.str().c_str(), sport, dst.str().c_str(), dport);
        out += buf;
    };

    // One portsweep alert per (source, tumbling window): the window opens at
    // the first probe after the previous one closed and fires at the probe
    // that reaches the distinct-destination threshold.
    struct SweepWindow {
        int64_t start_us = 0;
        bool open = false;
        bool alerted = false;
        std::set<Ipv4> targets;
    };
    const int64_t window_us = seconds_to_us(opts.ids.portsweep_window_s);
    std::map<Ipv4, SweepWindow> sweeps;

    for (size_t i = 0; i < events.size(); ++i) {
        const SimEvent& e = events[i];
        if (e.kind == SimEventKind::ScanProbe && e.port == kRpcPort) {
            SweepWindow& w = sweeps[e.src.ip];
            if (!w.open || e.t_us >= w.start_us + window_us) {
                w = SweepWindow{e.t_us, true, false, {}};
            }
            w.targets.insert(e.dst.ip);
            if (!w.alerted && static_cast<int>(w.targets.size()) >= opts.ids.portsweep_probes) {
                w.alerted = true;
                append_alert(opts.wallclock_base_us + e.t_us, "(portscan) TCP Portsweep",
                             Proto::Tcp, e.src.ip, eph_ports[i], e.dst.ip, e.port.number);
            }
        } else if (e.kind == SimEventKind::TftpTransfer) {
            append_alert(opts.wallclock_base_us + e.t_us, "TFTP Get", Proto::Udp,
                         e.dst.ip, eph_ports[i], e.src.ip, e.port.number);
        }
    }
    return out;
}

std::string emit_events_csv(const std::vector<SimEvent>& events) {
    std::string out = "# wormlab ground truth trace v1\nt,kind,src,dst,port,proto\n";
    for (const SimEvent& e : events) {
        char buf[128];
        std::snprintf(buf, sizeof(buf), "%lld.%06lld,%s,%s,%s,%u,%s\n",
                      static_cast<long long>(e.t_us / kMicrosPerSecond),
                      static_cast<long long>(e.t_us % kMicrosPerSecond),
                      sim_event_kind_name(e.kind), e.src.ip.str().c_str(),
                      e.dst.ip.str().c_str(), e.port.number,
                      proto_name(e.port.proto));
        out += buf;
    }
    return out;
}

}  // namespace wormlab
