#pragma once

// Ethernet frame builders for the synthetic trace generator and test
// fixtures. Frames are padded to the 60-byte Ethernet minimum; checksums are
// left zero (nothing in the pipeline validates them).

#include <cstdint>
#include <vector>

#include "flowids/packet.hpp"

namespace flowids {

struct TcpFrameSpec {
    MacAddr src_mac;
    MacAddr dst_mac;
    Ipv4Addr src_ip;
    Ipv4Addr dst_ip;
    std::uint16_t src_port = 0;
    std::uint16_t dst_port = 0;
    std::uint32_t seq = 0;
    std::uint32_t ack = 0;
    std::uint8_t flags = 0;
    std::uint16_t window = 0;
    std::uint16_t payload_len = 0;
    std::uint8_t payload_fill = 0;
    std::uint8_t ttl = 64;
    bool more_fragments = false;
    std::uint16_t fragment_offset = 0;  // in 8-byte units
};

struct UdpFrameSpec {
    MacAddr src_mac;
    MacAddr dst_mac;
    Ipv4Addr src_ip;
    Ipv4Addr dst_ip;
    std::uint16_t src_port = 0;
    std::uint16_t dst_port = 0;
    std::uint16_t payload_len = 0;
    std::uint8_t payload_fill = 0;
    std::uint8_t ttl = 64;
};

struct ArpFrameSpec {
    MacAddr src_mac;            // link layer source
    MacAddr dst_mac;            // link layer destination (broadcast for requests)
    std::uint16_t op = 1;       // 1 request, 2 reply
    MacAddr sender_mac;
    Ipv4Addr sender_ip;
    MacAddr target_mac;
    Ipv4Addr target_ip;
};

struct OtherIpFrameSpec {
    MacAddr src_mac;
    MacAddr dst_mac;
    Ipv4Addr src_ip;
    Ipv4Addr dst_ip;
    std::uint8_t protocol = 1;  // anything that is not 6/17
    std::uint16_t payload_len = 0;
    std::uint8_t ttl = 64;
};

std::vector<std::uint8_t> build_tcp_frame(const TcpFrameSpec& spec);
std::vector<std::uint8_t> build_udp_frame(const UdpFrameSpec& spec);
std::vector<std::uint8_t> build_arp_frame(const ArpFrameSpec& spec);
std::vector<std::uint8_t> build_other_ip_frame(const OtherIpFrameSpec& spec);

// 802.3 frame whose EtherType slot holds a length (<= 1500): decodes as
// NonProtocol per the flow definition.
std::vector<std::uint8_t> build_llc_frame(MacAddr src_mac, MacAddr dst_mac,
                                          std::uint16_t length_field, std::size_t body_len);

}  // namespace flowids
