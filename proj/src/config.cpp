#include "config.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace wormlab {

namespace {

std::string trim(std::string_view s) {
    size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

std::vector<std::string> split(std::string_view s, char sep) {
    std::vector<std::string> parts;
    size_t start = 0;
    while (true) {
        size_t pos = s.find(sep, start);
        if (pos == std::string_view::npos) {
            parts.push_back(trim(s.substr(start)));
            break;
        }
        parts.push_back(trim(s.substr(start, pos - start)));
        start = pos + 1;
    }
    return parts;
}

bool parse_double(const std::string& text, double& out) {
    if (text.empty()) return false;
    char* end = nullptr;
    out = std::strtod(text.c_str(), &end);
    return end == text.c_str() + text.size();
}

bool parse_u64(const std::string& text, uint64_t& out) {
    if (text.empty()) return false;
    char* end = nullptr;
    out = std::strtoull(text.c_str(), &end, 10);
    return end == text.c_str() + text.size();
}

bool parse_bool(const std::string& text, bool& out) {
    if (text == "true" || text == "yes" || text == "1") { out = true; return true; }
    if (text == "false" || text == "no" || text == "0") { out = false; return true; }
    return false;
}

// "A -> B" used by trust and forced-outcome lines.
bool parse_arrow_pair(const std::string& text, std::string& from, std::string& to) {
    size_t pos = text.find("->");
    if (pos == std::string::npos) return false;
    from = trim(text.substr(0, pos));
    to = trim(text.substr(pos + 2));
    return !from.empty() && !to.empty();
}

struct Parser {
    ConfigResult result;
    std::string section;       // "sim", "ids", "topology", "host"
    Host* current_host = nullptr;

    void error(size_t line, std::string message) {
        result.errors.push_back({line, std::move(message)});
    }

    void begin_section(size_t line, const std::string& header) {
        current_host = nullptr;
        std::string inner = trim(header.substr(1, header.size() - 2));
        if (inner == "sim" || inner == "ids" || inner == "topology") {
            section = inner;
            return;
        }
        if (inner.rfind("host", 0) == 0) {
            std::string name = trim(inner.substr(4));
            if (name.empty()) {
                error(line, "host section needs a name: [host <name>]");
                section.clear();
                return;
            }
            section = "host";
            Host h;
            h.id.name = name;
            result.config.topology.hosts.push_back(std::move(h));
            current_host = &result.config.topology.hosts.back();
            return;
        }
        error(line, "unknown section [" + inner + "]");
        section.clear();
    }

    void sim_key(size_t line, const std::string& key, const std::string& value) {
        SimConfig& sim = result.config.sim;
        double d;
        auto want_double = [&](double& slot) {
            if (parse_double(value, d)) slot = d;
            else error(line, "expected a number for " + key);
        };
        if (key == "seed") {
            uint64_t v;
            if (parse_u64(value, v)) sim.seed = v;
            else error(line, "expected an unsigned integer for seed");
        } else if (key == "duration_s") want_double(sim.duration_s);
        else if (key == "scan_interval_s") want_double(sim.scan_interval_s);
        else if (key == "local_subnet_bias") want_double(sim.local_subnet_bias);
        else if (key == "p_transfer_success") want_double(sim.p_transfer_success);
        else if (key == "exploit_delay_s") want_double(sim.exploit_delay_s);
        else if (key == "transfer_delay_s") want_double(sim.transfer_delay_s);
        else if (key == "impact_delay_s") want_double(sim.impact_delay_s);
        else if (key.rfind("p_infect_", 0) == 0) {
            auto os = parse_os(key.substr(9));
            if (!os) {
                error(line, "unknown OS in " + key);
            } else if (parse_double(value, d)) {
                sim.p_infect[*os] = d;
            } else {
                error(line, "expected a number for " + key);
            }
        } else if (key == "force") {
            // force = Attacker -> Victim : status
            size_t colon = value.rfind(':');
            std::string pair_text = colon == std::string::npos ? value : value.substr(0, colon);
            std::string status_text = colon == std::string::npos ? "" : trim(value.substr(colon + 1));
            std::string from, to;
            auto status = parse_edge_status(status_text);
            if (!parse_arrow_pair(pair_text, from, to) || !status) {
                error(line, "force syntax: force = <attacker> -> <victim> : "
                            "scan_only|backdoor_only|fully_infected");
            } else {
                sim.forced_outcomes[{from, to}] = *status;
            }
        } else {
            error(line, "unknown key '" + key + "' in [sim]");
        }
    }

    void ids_key(size_t line, const std::string& key, const std::string& value) {
        IdsOptions& ids = result.config.ids;
        if (key == "portsweep_probes") {
            uint64_t v;
            if (parse_u64(value, v) && v >= 1) ids.portsweep_probes = static_cast<int>(v);
            else error(line, "portsweep_probes must be a positive integer");
        } else if (key == "portsweep_window_s") {
            double d;
            if (parse_double(value, d) && d > 0) ids.portsweep_window_s = d;
            else error(line, "portsweep_window_s must be a positive number");
        } else {
            error(line, "unknown key '" + key + "' in [ids]");
        }
    }

    void topology_key(size_t line, const std::string& key, const std::string& value) {
        NetworkTopology& topo = result.config.topology;
        if (key == "subnet") {
            std::string text = value;
            if (text.size() > 3 && text.substr(text.size() - 3) == "/24") {
                text = text.substr(0, text.size() - 3);
            }
            auto ip = Ipv4::parse(text);
            if (!ip) error(line, "bad subnet '" + value + "' (want A.B.C.0/24)");
            else topo.subnets.push_back(ip->subnet24());
        } else if (key == "sensor") {
            if (value.empty()) error(line, "sensor needs a name");
            else topo.ids_sensors.push_back(value);
        } else if (key == "trust") {
            std::string from, to;
            if (parse_arrow_pair(value, from, to)) topo.trust.push_back({from, to});
            else error(line, "trust syntax: trust = <host> -> <host>");
        } else {
            error(line, "unknown key '" + key + "' in [topology]");
        }
    }

    void host_key(size_t line, const std::string& key, const std::string& value) {
        if (!current_host) {
            error(line, "host key outside a [host <name>] section");
            return;
        }
        if (key == "ip") {
            auto ip = Ipv4::parse(value);
            if (ip) current_host->id.ip = *ip;
            else error(line, "bad ip '" + value + "'");
        } else if (key == "os") {
            auto os = parse_os(value);
            if (os) current_host->os = *os;
            else error(line, "unknown os '" + value + "' (windows2000|windowsxp|other)");
        } else if (key == "vulnerable_ports") {
            current_host->vulnerable_ports.clear();
            if (!value.empty()) {
                for (const std::string& part : split(value, ',')) {
                    auto port = PortSpec::parse(part);
                    if (port) current_host->vulnerable_ports.push_back(*port);
                    else error(line, "bad port spec '" + part + "' (want e.g. 135/tcp)");
                }
            }
            std::sort(current_host->vulnerable_ports.begin(), current_host->vulnerable_ports.end());
            current_host->vulnerable_ports.erase(
                std::unique(current_host->vulnerable_ports.begin(),
                            current_host->vulnerable_ports.end()),
                current_host->vulnerable_ports.end());
        } else if (key == "origin") {
            bool b;
            if (parse_bool(value, b)) current_host->initially_infected = b;
            else error(line, "origin must be true or false");
        } else {
            error(line, "unknown key '" + key + "' in [host]");
        }
    }

    void key_value(size_t line, const std::string& key, const std::string& value) {
        if (section == "sim") sim_key(line, key, value);
        else if (section == "ids") ids_key(line, key, value);
        else if (section == "topology") topology_key(line, key, value);
        else if (section == "host") host_key(line, key, value);
        else error(line, "key '" + key + "' before any section header");
    }
};

}  // namespace

ConfigResult parse_config(std::istream& in) {
    Parser parser;
    std::string raw;
    size_t lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        std::string line = trim(raw);
        if (line.empty() || line[0] == '#') continue;
        if (line.front() == '[') {
            if (line.back() != ']') {
                parser.error(lineno, "unterminated section header");
                continue;
            }
            parser.begin_section(lineno, line);
            continue;
        }
        size_t eq = line.find('=');
        if (eq == std::string::npos) {
            parser.error(lineno, "expected key = value");
            continue;
        }
        parser.key_value(lineno, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }

    // Invariant checks run even with syntax errors so callers see everything.
    for (const std::string& msg : parser.result.config.sim.validate()) {
        parser.error(0, msg);
    }
    for (const ValidationIssue& issue : topology_validate(parser.result.config.topology)) {
        parser.error(0, issue.message);
    }
    for (const auto& [pair, status] : parser.result.config.sim.forced_outcomes) {
        (void)status;
        if (!parser.result.config.topology.find_by_name(pair.first)) {
            parser.error(0, "forced outcome references unknown host " + pair.first);
        }
        if (!parser.result.config.topology.find_by_name(pair.second)) {
            parser.error(0, "forced outcome references unknown host " + pair.second);
        }
    }
    return std::move(parser.result);
}

ConfigResult parse_config_text(const std::string& text) {
    std::istringstream in(text);
    return parse_config(in);
}

ConfigResult load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    return parse_config(in);
}

}  // namespace wormlab
