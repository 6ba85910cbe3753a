#include "flowids/frames.hpp"

namespace flowids {

namespace {

void put_u16(std::vector<std::uint8_t>& out, std::uint16_t value) {
    out.push_back(static_cast<std::uint8_t>(value >> 8));
    out.push_back(static_cast<std::uint8_t>(value & 0xff));
}

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t value) {
    out.push_back(static_cast<std::uint8_t>((value >> 24) & 0xff));
    out.push_back(static_cast<std::uint8_t>((value >> 16) & 0xff));
    out.push_back(static_cast<std::uint8_t>((value >> 8) & 0xff));
    out.push_back(static_cast<std::uint8_t>(value & 0xff));
}

void put_mac(std::vector<std::uint8_t>& out, const MacAddr& mac) {
    out.insert(out.end(), mac.bytes.begin(), mac.bytes.end());
}

void put_ethernet(std::vector<std::uint8_t>& out, const MacAddr& src, const MacAddr& dst,
                  std::uint16_t ether_type) {
    put_mac(out, dst);
    put_mac(out, src);
    put_u16(out, ether_type);
}

void put_ipv4(std::vector<std::uint8_t>& out, const Ipv4Addr& src, const Ipv4Addr& dst,
              std::uint8_t protocol, std::uint16_t payload_and_l4_len, std::uint8_t ttl,
              bool more_fragments, std::uint16_t fragment_offset) {
    out.push_back(0x45);  // version 4, ihl 5
    out.push_back(0);     // dscp/ecn
    put_u16(out, static_cast<std::uint16_t>(20 + payload_and_l4_len));
    put_u16(out, 0);  // identification
    std::uint16_t frag = fragment_offset & 0x1fff;
    if (more_fragments) frag |= 0x2000;
    put_u16(out, frag);
    out.push_back(ttl);
    out.push_back(protocol);
    put_u16(out, 0);  // checksum unused
    put_u32(out, src.value);
    put_u32(out, dst.value);
}

void pad_to_minimum(std::vector<std::uint8_t>& out) {
    if (out.size() < 60) out.resize(60, 0);
}

}  // namespace

std::vector<std::uint8_t> build_tcp_frame(const TcpFrameSpec& spec) {
    std::vector<std::uint8_t> out;
    out.reserve(64 + spec.payload_len);
    put_ethernet(out, spec.src_mac, spec.dst_mac, 0x0800);
    put_ipv4(out, spec.src_ip, spec.dst_ip, 6, static_cast<std::uint16_t>(20 + spec.payload_len),
             spec.ttl, spec.more_fragments, spec.fragment_offset);
    put_u16(out, spec.src_port);
    put_u16(out, spec.dst_port);
    put_u32(out, spec.seq);
    put_u32(out, spec.ack);
    out.push_back(0x50);  // data offset 5
    out.push_back(spec.flags & 0x3f);
    put_u16(out, spec.window);
    put_u16(out, 0);  // checksum
    put_u16(out, 0);  // urgent pointer
    out.insert(out.end(), spec.payload_len, spec.payload_fill);
    pad_to_minimum(out);
    return out;
}

std::vector<std::uint8_t> build_udp_frame(const UdpFrameSpec& spec) {
    std::vector<std::uint8_t> out;
    out.reserve(48 + spec.payload_len);
    put_ethernet(out, spec.src_mac, spec.dst_mac, 0x0800);
    put_ipv4(out, spec.src_ip, spec.dst_ip, 17, static_cast<std::uint16_t>(8 + spec.payload_len),
             spec.ttl, false, 0);
    put_u16(out, spec.src_port);
    put_u16(out, spec.dst_port);
    put_u16(out, static_cast<std::uint16_t>(8 + spec.payload_len));
    put_u16(out, 0);  // checksum
    out.insert(out.end(), spec.payload_len, spec.payload_fill);
    pad_to_minimum(out);
    return out;
}

std::vector<std::uint8_t> build_arp_frame(const ArpFrameSpec& spec) {
    std::vector<std::uint8_t> out;
    out.reserve(60);
    put_ethernet(out, spec.src_mac, spec.dst_mac, 0x0806);
    put_u16(out, 1);       // hardware type: Ethernet
    put_u16(out, 0x0800);  // protocol type: IPv4
    out.push_back(6);
    out.push_back(4);
    put_u16(out, spec.op);
    put_mac(out, spec.sender_mac);
    put_u32(out, spec.sender_ip.value);
    put_mac(out, spec.target_mac);
    put_u32(out, spec.target_ip.value);
    pad_to_minimum(out);
    return out;
}

std::vector<std::uint8_t> build_other_ip_frame(const OtherIpFrameSpec& spec) {
    std::vector<std::uint8_t> out;
    out.reserve(40 + spec.payload_len);
    put_ethernet(out, spec.src_mac, spec.dst_mac, 0x0800);
    put_ipv4(out, spec.src_ip, spec.dst_ip, spec.protocol, spec.payload_len, spec.ttl, false, 0);
    out.insert(out.end(), spec.payload_len, 0);
    pad_to_minimum(out);
    return out;
}

std::vector<std::uint8_t> build_llc_frame(MacAddr src_mac, MacAddr dst_mac,
                                          std::uint16_t length_field, std::size_t body_len) {
    std::vector<std::uint8_t> out;
    put_ethernet(out, src_mac, dst_mac, length_field);
    out.insert(out.end(), body_len, 0xaa);
    pad_to_minimum(out);
    return out;
}

}  // namespace flowids
