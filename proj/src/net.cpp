#include "net.hpp"

#include <cstdio>

namespace wormlab {

std::optional<Ipv4> Ipv4::parse(std::string_view text) {
    uint32_t out = 0;
    int octets = 0;
    size_t i = 0;
    while (octets < 4) {
        if (i >= text.size()) return std::nullopt;
        uint32_t v = 0;
        size_t digits = 0;
        while (i < text.size() && text[i] >= '0' && text[i] <= '9') {
            v = v * 10 + (text[i] - '0');
            ++digits;
            ++i;
            if (digits > 3) return std::nullopt;
        }
        if (digits == 0 || v > 255) return std::nullopt;
        out = (out << 8) | v;
        ++octets;
        if (octets < 4) {
            if (i >= text.size() || text[i] != '.') return std::nullopt;
            ++i;
        }
    }
    if (i != text.size()) return std::nullopt;
    return Ipv4{out};
}

std::string Ipv4::str() const {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%u.%u.%u.%u",
                  (value >> 24) & 0xff, (value >> 16) & 0xff,
                  (value >> 8) & 0xff, value & 0xff);
    return buf;
}

const char* proto_name(Proto p) {
    return p == Proto::Tcp ? "TCP" : "UDP";
}

std::optional<Proto> parse_proto(std::string_view text) {
    if (text == "TCP" || text == "tcp") return Proto::Tcp;
    if (text == "UDP" || text == "udp") return Proto::Udp;
    return std::nullopt;
}

std::string PortSpec::str() const {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%u/%s", number, proto == Proto::Tcp ? "tcp" : "udp");
    return buf;
}

std::optional<PortSpec> PortSpec::parse(std::string_view text) {
    size_t slash = text.find('/');
    if (slash == std::string_view::npos || slash == 0) return std::nullopt;
    uint32_t num = 0;
    for (size_t i = 0; i < slash; ++i) {
        char c = text[i];
        if (c < '0' || c > '9') return std::nullopt;
        num = num * 10 + (c - '0');
        if (num > 65535) return std::nullopt;
    }
    if (num == 0) return std::nullopt;
    auto proto = parse_proto(text.substr(slash + 1));
    if (!proto) return std::nullopt;
    return PortSpec{static_cast<uint16_t>(num), *proto};
}

}  // namespace wormlab
