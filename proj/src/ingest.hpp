#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "net.hpp"

namespace wormlab {

enum class SensorType : uint8_t { Firewall, Security, System, Application, IdsAlert };

const char* sensor_type_name(SensorType type);

enum class EventKind : uint8_t {
    FwOpen,
    FwOpenInbound,
    ProcCreate,
    RpcTerminated,
    Reboot,
    IdsPortsweep,
    IdsTftpGet,
};

const char* event_kind_name(EventKind kind);

// One record from any of the five log formats, sensor-agnostic.
struct NormalizedEvent {
    int64_t t_us = 0;
    std::string origin;  // host name, or sensor name for IDS alerts
    SensorType sensor = SensorType::Firewall;
    EventKind kind = EventKind::FwOpen;
    std::optional<Ipv4> src_ip;
    std::optional<Ipv4> dst_ip;
    std::optional<uint16_t> src_port;
    std::optional<uint16_t> dst_port;
    std::optional<Proto> proto;
    std::string detail;  // e.g. created image path

    // Provenance for findings and parse reports.
    std::string file;
    size_t line = 0;
    std::string raw;
};

struct Rejection {
    std::string file;
    size_t line;
    std::string reason;
};

struct ParseReport {
    size_t accepted = 0;
    std::vector<Rejection> rejected;

    size_t scanned() const { return accepted + rejected.size(); }
    void merge(const ParseReport& other);
};

struct ParsedFile {
    std::vector<NormalizedEvent> events;  // time-ordered, original-line tie-break
    ParseReport report;
    // Host identity claimed by the file header, when present and well-formed.
    std::optional<Ipv4> header_ip;
    std::string header_name;
};

// Per-format parsers. Malformed lines land in the report; nothing throws on
// content. origin is the host (or sensor) the file belongs to.
ParsedFile parse_firewall(std::istream& in, const std::string& file, const std::string& origin);
ParsedFile parse_security(std::istream& in, const std::string& file, const std::string& origin);
ParsedFile parse_system(std::istream& in, const std::string& file, const std::string& origin);
ParsedFile parse_application(std::istream& in, const std::string& file, const std::string& origin);
ParsedFile parse_ids(std::istream& in, const std::string& file, const std::string& sensor);

ParsedFile parse_sensor_file(SensorType type, std::istream& in, const std::string& file,
                             const std::string& origin);

// Merges per-file streams into one ordered by (t, origin, kind); stable, and
// a permutation of its inputs.
std::vector<NormalizedEvent> merge_streams(std::vector<std::vector<NormalizedEvent>> inputs);

struct KnownHost {
    std::string name;
    std::optional<Ipv4> ip;
};

struct RunInputs {
    std::vector<NormalizedEvent> stream;  // merged
    std::vector<KnownHost> hosts;         // analysis catalog, sorted by name
    std::vector<std::string> sensors;
    ParseReport report;
};

// Loads a simulator-layout run directory: hosts/<name>/{firewall.log,
// security.csv,system.csv,application.log} and ids/<sensor>/alert.log.
// Host IPs are recovered from file headers and record contents by majority
// vote, so a corrupted header cannot reassign a host. Throws on I/O errors;
// an empty directory is a valid (empty) run.
RunInputs load_run_dir(const std::string& dir);

// Loads a JSON manifest mapping files to (host, sensor type) for logs that
// did not come from the simulator. Schema in docs/FORMATS.md; supports an
// optional per-host clock_offset_s correction.
RunInputs load_log_manifest(const std::string& manifest_path);

// Dispatches on the path: a directory is a run layout, a file is a manifest.
RunInputs load_inputs(const std::string& path);

}  // namespace wormlab
