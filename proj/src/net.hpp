#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace wormlab {

// IPv4 address, host byte order.
struct Ipv4 {
    uint32_t value = 0;

    static std::optional<Ipv4> parse(std::string_view text);
    std::string str() const;

    // Base address of the containing /24.
    Ipv4 subnet24() const { return Ipv4{value & 0xffffff00u}; }
    uint8_t last_octet() const { return static_cast<uint8_t>(value & 0xff); }

    auto operator<=>(const Ipv4&) const = default;
};

enum class Proto : uint8_t { Tcp, Udp };

const char* proto_name(Proto p);
std::optional<Proto> parse_proto(std::string_view text);

struct PortSpec {
    uint16_t number = 0;
    Proto proto = Proto::Tcp;

    std::string str() const;  // "135/tcp"
    static std::optional<PortSpec> parse(std::string_view text);

    auto operator<=>(const PortSpec&) const = default;
};

// The three ports a Blaster-style infection touches, in step order.
inline constexpr PortSpec kRpcPort{135, Proto::Tcp};
inline constexpr PortSpec kBackdoorPort{4444, Proto::Tcp};
inline constexpr PortSpec kTftpPort{69, Proto::Udp};

}  // namespace wormlab
