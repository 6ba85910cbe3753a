#include "flowids/packet.hpp"

#include <cstdio>
#include <cstdlib>

namespace flowids {

std::optional<MacAddr> MacAddr::parse(std::string_view text) {
    MacAddr mac;
    if (text.size() != 17) return std::nullopt;
    for (int i = 0; i < 6; ++i) {
        const std::size_t off = static_cast<std::size_t>(i) * 3;
        auto hex = [](char c) -> int {
            if (c >= '0' && c <= '9') return c - '0';
            if (c >= 'a' && c <= 'f') return c - 'a' + 10;
            if (c >= 'A' && c <= 'F') return c - 'A' + 10;
            return -1;
        };
        const int hi = hex(text[off]);
        const int lo = hex(text[off + 1]);
        if (hi < 0 || lo < 0) return std::nullopt;
        if (i < 5 && text[off + 2] != ':') return std::nullopt;
        mac.bytes[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(hi * 16 + lo);
    }
    return mac;
}

std::string MacAddr::to_string() const {
    char buf[18];
    std::snprintf(buf, sizeof(buf), "%02x:%02x:%02x:%02x:%02x:%02x", bytes[0], bytes[1], bytes[2],
                  bytes[3], bytes[4], bytes[5]);
    return std::string(buf);
}

std::optional<Ipv4Addr> Ipv4Addr::parse(std::string_view text) {
    std::uint32_t value = 0;
    int octets = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t dot = text.find('.', pos);
        if (dot == std::string_view::npos) dot = text.size();
        if (dot == pos || dot - pos > 3) return std::nullopt;
        unsigned octet = 0;
        for (std::size_t i = pos; i < dot; ++i) {
            if (text[i] < '0' || text[i] > '9') return std::nullopt;
            octet = octet * 10 + static_cast<unsigned>(text[i] - '0');
        }
        if (octet > 255) return std::nullopt;
        value = (value << 8) | octet;
        ++octets;
        if (dot == text.size()) break;
        pos = dot + 1;
    }
    if (octets != 4) return std::nullopt;
    return Ipv4Addr{value};
}

std::string Ipv4Addr::to_string() const {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%u.%u.%u.%u", (value >> 24) & 0xff, (value >> 16) & 0xff,
                  (value >> 8) & 0xff, value & 0xff);
    return std::string(buf);
}

const char* to_string(EtherKind kind) {
    switch (kind) {
        case EtherKind::Arp: return "ARP";
        case EtherKind::Ipv4: return "IPv4";
        case EtherKind::NonProtocol: return "NonProtocol";
    }
    return "?";
}

const char* to_string(Transport transport) {
    switch (transport) {
        case Transport::Tcp: return "TCP";
        case Transport::Udp: return "UDP";
        case Transport::Other: return "Other";
        case Transport::None: return "None";
    }
    return "?";
}

}  // namespace flowids
