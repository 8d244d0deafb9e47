#include "ingest.hpp"

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "timeutil.hpp"
#include "vendor_json.hpp"

namespace fs = std::filesystem;

namespace wormlab {

namespace {

constexpr int kDefaultIdsYear = 2009;

std::string trim(std::string_view s) {
    size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

std::vector<std::string> split_ws(std::string_view s) {
    std::vector<std::string> out;
    size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && s[i] == ' ') ++i;
        size_t start = i;
        while (i < s.size() && s[i] != ' ') ++i;
        if (i > start) out.emplace_back(s.substr(start, i - start));
    }
    return out;
}

std::optional<uint16_t> parse_port(std::string_view s) {
    if (s.empty() || s.size() > 5) return std::nullopt;
    uint32_t v = 0;
    for (char c : s) {
        if (c < '0' || c > '9') return std::nullopt;
        v = v * 10 + (c - '0');
    }
    if (v > 65535) return std::nullopt;
    return static_cast<uint16_t>(v);
}

// Splits "a,b,c,rest may contain , too" into at most n fields.
std::vector<std::string> split_csv(std::string_view s, size_t n) {
    std::vector<std::string> out;
    size_t start = 0;
    while (out.size() + 1 < n) {
        size_t pos = s.find(',', start);
        if (pos == std::string_view::npos) break;
        out.emplace_back(s.substr(start, pos - start));
        start = pos + 1;
    }
    out.emplace_back(s.substr(start));
    return out;
}

struct LineSink {
    ParsedFile& parsed;
    const std::string& file;

    void accept(NormalizedEvent event) {
        parsed.report.accepted++;
        parsed.events.push_back(std::move(event));
    }
    void reject(size_t line, std::string reason) {
        parsed.report.rejected.push_back({file, line, std::move(reason)});
    }
};

// Header comments carry file metadata: "# host <name> <ip>",
// "# sensor <name>", "# year <n>". Unknown comments are ignored.
struct HeaderInfo {
    int year = kDefaultIdsYear;
};

void scan_comment(const std::string& line, ParsedFile& parsed, HeaderInfo& info) {
    auto tokens = split_ws(line);
    if (tokens.size() >= 4 && tokens[1] == "host") {
        parsed.header_name = tokens[2];
        parsed.header_ip = Ipv4::parse(tokens[3]);
    } else if (tokens.size() >= 3 && tokens[1] == "year") {
        int y = 0;
        bool ok = !tokens[2].empty();
        for (char c : tokens[2]) {
            if (c < '0' || c > '9') { ok = false; break; }
            y = y * 10 + (c - '0');
        }
        if (ok && y >= 1970 && y <= 9999) info.year = y;
    }
}

template <typename LineParser>
ParsedFile parse_lines(std::istream& in, const std::string& file, LineParser&& parse_line) {
    ParsedFile parsed;
    LineSink sink{parsed, file};
    HeaderInfo info;
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::string t = trim(line);
        if (t.empty()) continue;
        if (t[0] == '#') {
            scan_comment(t, parsed, info);
            continue;
        }
        parse_line(t, lineno, sink, info);
    }
    std::stable_sort(parsed.events.begin(), parsed.events.end(),
                     [](const NormalizedEvent& a, const NormalizedEvent& b) {
                         return a.t_us < b.t_us;
                     });
    return parsed;
}

NormalizedEvent base_event(int64_t t_us, const std::string& origin, SensorType sensor,
                           EventKind kind, const std::string& file, size_t line,
                           std::string raw) {
    NormalizedEvent e;
    e.t_us = t_us;
    e.origin = origin;
    e.sensor = sensor;
    e.kind = kind;
    e.file = file;
    e.line = line;
    e.raw = std::move(raw);
    return e;
}

}  // namespace

const char* sensor_type_name(SensorType type) {
    switch (type) {
        case SensorType::Firewall: return "firewall";
        case SensorType::Security: return "security";
        case SensorType::System: return "system";
        case SensorType::Application: return "application";
        case SensorType::IdsAlert: return "ids_alert";
    }
    return "?";
}

const char* event_kind_name(EventKind kind) {
    switch (kind) {
        case EventKind::FwOpen: return "fw_open";
        case EventKind::FwOpenInbound: return "fw_open_inbound";
        case EventKind::ProcCreate: return "proc_create";
        case EventKind::RpcTerminated: return "rpc_terminated";
        case EventKind::Reboot: return "reboot";
        case EventKind::IdsPortsweep: return "ids_portsweep";
        case EventKind::IdsTftpGet: return "ids_tftp_get";
    }
    return "?";
}

void ParseReport::merge(const ParseReport& other) {
    accepted += other.accepted;
    rejected.insert(rejected.end(), other.rejected.begin(), other.rejected.end());
}

ParsedFile parse_firewall(std::istream& in, const std::string& file, const std::string& origin) {
    return parse_lines(in, file, [&](const std::string& line, size_t lineno, LineSink& sink,
                                     const HeaderInfo&) {
        auto tok = split_ws(line);
        if (tok.size() != 8) {
            sink.reject(lineno, "expected 8 fields, got " + std::to_string(tok.size()));
            return;
        }
        auto t = parse_host_time(tok[0], tok[1]);
        if (!t) { sink.reject(lineno, "bad timestamp"); return; }

        EventKind kind;
        if (tok[2] == "OPEN") kind = EventKind::FwOpen;
        else if (tok[2] == "OPEN-INBOUND") kind = EventKind::FwOpenInbound;
        else if (tok[2] == "CLOSE") { sink.reject(lineno, "unsupported action 'CLOSE'"); return; }
        else { sink.reject(lineno, "unknown action '" + tok[2] + "'"); return; }

        auto proto = parse_proto(tok[3]);
        if (!proto) { sink.reject(lineno, "unknown protocol '" + tok[3] + "'"); return; }
        auto src = Ipv4::parse(tok[4]);
        auto dst = Ipv4::parse(tok[5]);
        if (!src || !dst) { sink.reject(lineno, "bad ip address"); return; }
        auto sport = parse_port(tok[6]);
        auto dport = parse_port(tok[7]);
        if (!sport || !dport) { sink.reject(lineno, "bad port"); return; }

        NormalizedEvent e = base_event(*t, origin, SensorType::Firewall, kind, file, lineno, line);
        e.src_ip = src;
        e.dst_ip = dst;
        e.src_port = sport;
        e.dst_port = dport;
        e.proto = proto;
        sink.accept(std::move(e));
    });
}

ParsedFile parse_security(std::istream& in, const std::string& file, const std::string& origin) {
    return parse_lines(in, file, [&](const std::string& line, size_t lineno, LineSink& sink,
                                     const HeaderInfo&) {
        auto fields = split_csv(line, 4);
        if (fields.size() != 4) {
            sink.reject(lineno, "expected timestamp,event_id,category,detail");
            return;
        }
        auto tstr = split_ws(fields[0]);
        auto t = tstr.size() == 2 ? parse_host_time(tstr[0], tstr[1]) : std::nullopt;
        if (!t) { sink.reject(lineno, "bad timestamp"); return; }
        if (fields[1] != "592") {
            sink.reject(lineno, "unsupported event id '" + fields[1] + "'");
            return;
        }
        NormalizedEvent e = base_event(*t, origin, SensorType::Security, EventKind::ProcCreate,
                                       file, lineno, line);
        e.detail = fields[3];
        sink.accept(std::move(e));
    });
}

ParsedFile parse_system(std::istream& in, const std::string& file, const std::string& origin) {
    return parse_lines(in, file, [&](const std::string& line, size_t lineno, LineSink& sink,
                                     const HeaderInfo&) {
        auto fields = split_csv(line, 3);
        if (fields.size() != 3) {
            sink.reject(lineno, "expected timestamp,event_code,message");
            return;
        }
        auto tstr = split_ws(fields[0]);
        auto t = tstr.size() == 2 ? parse_host_time(tstr[0], tstr[1]) : std::nullopt;
        if (!t) { sink.reject(lineno, "bad timestamp"); return; }

        EventKind kind;
        if (fields[1] == "RPC_TERMINATED") kind = EventKind::RpcTerminated;
        else if (fields[1] == "SYSTEM_REBOOT") kind = EventKind::Reboot;
        else {
            sink.reject(lineno, "unsupported event code '" + fields[1] + "'");
            return;
        }
        NormalizedEvent e = base_event(*t, origin, SensorType::System, kind, file, lineno, line);
        std::string msg = fields[2];
        if (msg.size() >= 2 && msg.front() == '"' && msg.back() == '"') {
            msg = msg.substr(1, msg.size() - 2);
        }
        e.detail = msg;
        sink.accept(std::move(e));
    });
}

ParsedFile parse_application(std::istream& in, const std::string& file, const std::string&) {
    return parse_lines(in, file, [&](const std::string&, size_t lineno, LineSink& sink,
                                     const HeaderInfo&) {
        sink.reject(lineno, "application log defines no record types");
    });
}

ParsedFile parse_ids(std::istream& in, const std::string& file, const std::string& sensor) {
    return parse_lines(in, file, [&](const std::string& line, size_t lineno, LineSink& sink,
                                     const HeaderInfo& info) {
        // MM/DD-HH:MM:SS.ffffff [**] <signature> [**] {PROTO} A:P -> B:Q
        size_t sep1 = line.find(" [**] ");
        if (sep1 == std::string::npos) { sink.reject(lineno, "missing signature separator"); return; }
        size_t sep2 = line.find(" [**] ", sep1 + 6);
        if (sep2 == std::string::npos) { sink.reject(lineno, "missing second separator"); return; }

        auto t = parse_ids_time(line.substr(0, sep1), info.year);
        if (!t) { sink.reject(lineno, "bad timestamp"); return; }

        std::string signature = line.substr(sep1 + 6, sep2 - sep1 - 6);
        EventKind kind;
        if (signature == "(portscan) TCP Portsweep") kind = EventKind::IdsPortsweep;
        else if (signature == "TFTP Get") kind = EventKind::IdsTftpGet;
        else { sink.reject(lineno, "unknown signature '" + signature + "'"); return; }

        std::string rest = trim(line.substr(sep2 + 6));
        if (rest.size() < 3 || rest[0] != '{') { sink.reject(lineno, "missing protocol"); return; }
        size_t close = rest.find('}');
        if (close == std::string::npos) { sink.reject(lineno, "missing protocol"); return; }
        auto proto = parse_proto(rest.substr(1, close - 1));
        if (!proto) { sink.reject(lineno, "unknown protocol"); return; }

        std::string addrs = trim(rest.substr(close + 1));
        size_t arrow = addrs.find(" -> ");
        if (arrow == std::string::npos) { sink.reject(lineno, "missing '->'"); return; }
        auto parse_endpoint = [](std::string_view text)
            -> std::optional<std::pair<Ipv4, uint16_t>> {
            size_t colon = text.rfind(':');
            if (colon == std::string_view::npos) return std::nullopt;
            auto ip = Ipv4::parse(text.substr(0, colon));
            auto port = parse_port(text.substr(colon + 1));
            if (!ip || !port) return std::nullopt;
            return std::make_pair(*ip, *port);
        };
        auto src = parse_endpoint(trim(addrs.substr(0, arrow)));
        auto dst = parse_endpoint(trim(addrs.substr(arrow + 4)));
        if (!src || !dst) { sink.reject(lineno, "bad endpoint"); return; }

        NormalizedEvent e = base_event(*t, sensor, SensorType::IdsAlert, kind, file, lineno, line);
        e.src_ip = src->first;
        e.src_port = src->second;
        e.dst_ip = dst->first;
        e.dst_port = dst->second;
        e.proto = proto;
        e.detail = signature;
        sink.accept(std::move(e));
    });
}

ParsedFile parse_sensor_file(SensorType type, std::istream& in, const std::string& file,
                             const std::string& origin) {
    switch (type) {
        case SensorType::Firewall: return parse_firewall(in, file, origin);
        case SensorType::Security: return parse_security(in, file, origin);
        case SensorType::System: return parse_system(in, file, origin);
        case SensorType::Application: return parse_application(in, file, origin);
        case SensorType::IdsAlert: return parse_ids(in, file, origin);
    }
    return {};
}

std::vector<NormalizedEvent> merge_streams(std::vector<std::vector<NormalizedEvent>> inputs) {
    std::vector<NormalizedEvent> out;
    size_t total = 0;
    for (const auto& v : inputs) total += v.size();
    out.reserve(total);
    for (auto& v : inputs) {
        for (auto& e : v) out.push_back(std::move(e));
    }
    std::stable_sort(out.begin(), out.end(),
                     [](const NormalizedEvent& a, const NormalizedEvent& b) {
                         if (a.t_us != b.t_us) return a.t_us < b.t_us;
                         if (a.origin != b.origin) return a.origin < b.origin;
                         return a.kind < b.kind;
                     });
    return out;
}

namespace {

struct HostAccumulator {
    std::map<Ipv4, int> ip_votes;
    std::vector<std::vector<NormalizedEvent>> streams;
};

// A host's own firewall lines name it as the source of OPEN records and the
// destination of OPEN-INBOUND records; together with the header line that
// gives a majority vote for the host's address.
void vote_from_events(HostAccumulator& acc, const ParsedFile& parsed) {
    if (parsed.header_ip) acc.ip_votes[*parsed.header_ip] += 1;
    for (const NormalizedEvent& e : parsed.events) {
        if (e.sensor != SensorType::Firewall) continue;
        if (e.kind == EventKind::FwOpen && e.src_ip) acc.ip_votes[*e.src_ip] += 1;
        if (e.kind == EventKind::FwOpenInbound && e.dst_ip) acc.ip_votes[*e.dst_ip] += 1;
    }
}

std::optional<Ipv4> majority_ip(const std::map<Ipv4, int>& votes) {
    std::optional<Ipv4> best;
    int best_votes = 0;
    for (const auto& [ip, n] : votes) {
        if (n > best_votes) {
            best = ip;
            best_votes = n;
        }
    }
    return best;
}

RunInputs finish_inputs(std::map<std::string, HostAccumulator> hosts,
                        std::vector<std::string> sensors,
                        std::vector<std::vector<NormalizedEvent>> streams,
                        ParseReport report) {
    RunInputs inputs;
    for (auto& [name, acc] : hosts) {
        inputs.hosts.push_back({name, majority_ip(acc.ip_votes)});
        for (auto& s : acc.streams) streams.push_back(std::move(s));
    }
    inputs.sensors = std::move(sensors);
    inputs.stream = merge_streams(std::move(streams));
    inputs.report = std::move(report);
    return inputs;
}

}  // namespace

RunInputs load_run_dir(const std::string& dir) {
    const fs::path root(dir);
    if (!fs::exists(root)) throw std::runtime_error("no such run directory: " + dir);
    if (!fs::is_directory(root)) throw std::runtime_error("not a directory: " + dir);

    std::map<std::string, HostAccumulator> hosts;
    std::vector<std::string> sensors;
    std::vector<std::vector<NormalizedEvent>> sensor_streams;
    ParseReport report;

    static constexpr struct {
        const char* file;
        SensorType type;
    } kHostFiles[] = {
        {"firewall.log", SensorType::Firewall},
        {"security.csv", SensorType::Security},
        {"system.csv", SensorType::System},
        {"application.log", SensorType::Application},
    };

    const fs::path hosts_dir = root / "hosts";
    if (fs::is_directory(hosts_dir)) {
        std::vector<fs::path> host_paths;
        for (const auto& entry : fs::directory_iterator(hosts_dir)) {
            if (entry.is_directory()) host_paths.push_back(entry.path());
        }
        std::sort(host_paths.begin(), host_paths.end());
        for (const fs::path& host_path : host_paths) {
            const std::string name = host_path.filename().string();
            HostAccumulator& acc = hosts[name];
            for (const auto& spec : kHostFiles) {
                const fs::path file_path = host_path / spec.file;
                if (!fs::exists(file_path)) continue;
                std::ifstream in(file_path);
                if (!in) throw std::runtime_error("cannot open " + file_path.string());
                ParsedFile parsed = parse_sensor_file(spec.type, in, file_path.string(), name);
                vote_from_events(acc, parsed);
                report.merge(parsed.report);
                acc.streams.push_back(std::move(parsed.events));
            }
        }
    }

    const fs::path ids_dir = root / "ids";
    if (fs::is_directory(ids_dir)) {
        std::vector<fs::path> sensor_paths;
        for (const auto& entry : fs::directory_iterator(ids_dir)) {
            if (entry.is_directory()) sensor_paths.push_back(entry.path());
        }
        std::sort(sensor_paths.begin(), sensor_paths.end());
        for (const fs::path& sensor_path : sensor_paths) {
            const std::string name = sensor_path.filename().string();
            const fs::path file_path = sensor_path / "alert.log";
            if (!fs::exists(file_path)) continue;
            std::ifstream in(file_path);
            if (!in) throw std::runtime_error("cannot open " + file_path.string());
            ParsedFile parsed = parse_ids(in, file_path.string(), name);
            sensors.push_back(name);
            report.merge(parsed.report);
            sensor_streams.push_back(std::move(parsed.events));
        }
    }

    return finish_inputs(std::move(hosts), std::move(sensors), std::move(sensor_streams),
                         std::move(report));
}

RunInputs load_log_manifest(const std::string& manifest_path) {
    std::ifstream in(manifest_path);
    if (!in) throw std::runtime_error("cannot open manifest: " + manifest_path);
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& err) {
        throw std::runtime_error("bad manifest json: " + std::string(err.what()));
    }

    const fs::path base = fs::path(manifest_path).parent_path();
    std::map<std::string, HostAccumulator> hosts;
    std::vector<std::string> sensors;
    std::vector<std::vector<NormalizedEvent>> sensor_streams;
    ParseReport report;

    auto open_file = [&](const std::string& rel) -> std::ifstream {
        fs::path p = fs::path(rel).is_absolute() ? fs::path(rel) : base / rel;
        std::ifstream f(p);
        if (!f) throw std::runtime_error("cannot open log file: " + p.string());
        return f;
    };

    static constexpr struct {
        const char* key;
        SensorType type;
    } kHostKeys[] = {
        {"firewall", SensorType::Firewall},
        {"security", SensorType::Security},
        {"system", SensorType::System},
        {"application", SensorType::Application},
    };

    if (doc.contains("hosts")) {
        for (const auto& [name, spec] : doc.at("hosts").items()) {
            HostAccumulator& acc = hosts[name];
            int64_t offset_us = 0;
            if (spec.contains("clock_offset_s")) {
                offset_us = seconds_to_us(spec.at("clock_offset_s").get<double>());
            }
            if (spec.contains("ip")) {
                auto ip = Ipv4::parse(spec.at("ip").get<std::string>());
                if (ip) acc.ip_votes[*ip] += 1000000;  // explicit assignment wins
            }
            for (const auto& key : kHostKeys) {
                if (!spec.contains(key.key)) continue;
                const std::string rel = spec.at(key.key).get<std::string>();
                std::ifstream f = open_file(rel);
                ParsedFile parsed = parse_sensor_file(key.type, f, rel, name);
                for (NormalizedEvent& e : parsed.events) e.t_us += offset_us;
                vote_from_events(acc, parsed);
                report.merge(parsed.report);
                acc.streams.push_back(std::move(parsed.events));
            }
        }
    }
    if (doc.contains("sensors")) {
        for (const auto& [name, spec] : doc.at("sensors").items()) {
            if (!spec.contains("alert")) continue;
            const std::string rel = spec.at("alert").get<std::string>();
            std::ifstream f = open_file(rel);
            ParsedFile parsed = parse_ids(f, rel, name);
            sensors.push_back(name);
            report.merge(parsed.report);
            sensor_streams.push_back(std::move(parsed.events));
        }
    }

    return finish_inputs(std::move(hosts), std::move(sensors), std::move(sensor_streams),
                         std::move(report));
}

RunInputs load_inputs(const std::string& path) {
    if (fs::is_directory(path)) return load_run_dir(path);
    return load_log_manifest(path);
}

}  // namespace wormlab
