#pragma once

// Decoded network frame representation shared by the pcap reader, the flow
// aggregator and the synthetic trace generator.

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace flowids {

struct MacAddr {
    std::array<std::uint8_t, 6> bytes{};

    static MacAddr broadcast() { return MacAddr{{0xff, 0xff, 0xff, 0xff, 0xff, 0xff}}; }
    static std::optional<MacAddr> parse(std::string_view text);
    std::string to_string() const;

    auto operator<=>(const MacAddr&) const = default;
};

struct Ipv4Addr {
    std::uint32_t value = 0;  // host byte order

    static std::optional<Ipv4Addr> parse(std::string_view text);
    std::string to_string() const;

    auto operator<=>(const Ipv4Addr&) const = default;
};

enum class EtherKind { Arp, Ipv4, NonProtocol };
enum class Transport { Tcp, Udp, Other, None };

// Flag masks as laid out in the TCP header's flags octet.
namespace tcp_flag {
inline constexpr std::uint8_t Fin = 0x01;
inline constexpr std::uint8_t Syn = 0x02;
inline constexpr std::uint8_t Rst = 0x04;
inline constexpr std::uint8_t Psh = 0x08;
inline constexpr std::uint8_t Ack = 0x10;
inline constexpr std::uint8_t Urg = 0x20;
}  // namespace tcp_flag

struct TcpInfo {
    std::uint8_t flags = 0;
    std::uint32_t seq = 0;
    std::uint32_t ack = 0;
    std::uint32_t window = 0;

    bool has(std::uint8_t mask) const { return (flags & mask) != 0; }
};

struct DecodedPacket {
    double timestamp = 0.0;  // seconds since the Unix epoch
    MacAddr link_src;
    MacAddr link_dst;
    EtherKind ether_kind = EtherKind::NonProtocol;
    std::optional<Ipv4Addr> net_src;
    std::optional<Ipv4Addr> net_dst;
    Transport transport = Transport::None;
    std::optional<std::uint16_t> src_port;
    std::optional<std::uint16_t> dst_port;
    std::uint32_t frame_bytes = 0;    // captured frame length
    std::uint32_t payload_bytes = 0;  // transport payload length
    std::optional<std::uint8_t> ttl;
    std::optional<TcpInfo> tcp;  // present iff transport == Tcp
    bool ip_fragmented = false;
    std::optional<MacAddr> arp_sender_mac;
    std::optional<MacAddr> arp_target_mac;
    std::optional<Ipv4Addr> arp_sender_ip;
    std::optional<Ipv4Addr> arp_target_ip;
};

const char* to_string(EtherKind kind);
const char* to_string(Transport transport);

}  // namespace flowids
