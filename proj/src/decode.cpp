#include "flowids/decode.hpp"

#include <algorithm>

namespace flowids {

namespace {

std::uint16_t read_u16(std::span<const std::uint8_t> raw, std::size_t off) {
    return static_cast<std::uint16_t>((raw[off] << 8) | raw[off + 1]);
}

std::uint32_t read_u32(std::span<const std::uint8_t> raw, std::size_t off) {
    return (static_cast<std::uint32_t>(raw[off]) << 24) |
           (static_cast<std::uint32_t>(raw[off + 1]) << 16) |
           (static_cast<std::uint32_t>(raw[off + 2]) << 8) |
           static_cast<std::uint32_t>(raw[off + 3]);
}

MacAddr read_mac(std::span<const std::uint8_t> raw, std::size_t off) {
    MacAddr mac;
    std::copy_n(raw.begin() + static_cast<std::ptrdiff_t>(off), 6, mac.bytes.begin());
    return mac;
}

DecodedPacket non_protocol(std::span<const std::uint8_t> raw, double timestamp) {
    DecodedPacket pkt;
    pkt.timestamp = timestamp;
    pkt.ether_kind = EtherKind::NonProtocol;
    pkt.frame_bytes = static_cast<std::uint32_t>(raw.size());
    if (raw.size() >= 12) {
        pkt.link_dst = read_mac(raw, 0);
        pkt.link_src = read_mac(raw, 6);
    }
    return pkt;
}

}  // namespace

DecodedPacket decode_packet(std::span<const std::uint8_t> raw, double timestamp,
                            DecodeStats& stats) {
    if (raw.size() < 14) {
        ++stats.malformed;
        return non_protocol(raw, timestamp);
    }

    DecodedPacket pkt;
    pkt.timestamp = timestamp;
    pkt.frame_bytes = static_cast<std::uint32_t>(raw.size());
    pkt.link_dst = read_mac(raw, 0);
    pkt.link_src = read_mac(raw, 6);

    std::uint16_t ether_type = read_u16(raw, 12);
    std::size_t off = 14;
    if (ether_type == 0x8100) {  // 802.1Q, unwrap one tag
        if (raw.size() < 18) {
            ++stats.malformed;
            return non_protocol(raw, timestamp);
        }
        ether_type = read_u16(raw, 16);
        off = 18;
    }

    if (ether_type <= 1500) {
        // 802.3 length field: LLC frame without an EtherType
        pkt.ether_kind = EtherKind::NonProtocol;
        return pkt;
    }

    if (ether_type == 0x0806) {
        // ARP: hw(2) proto(2) hlen(1) plen(1) op(2) sha(6) spa(4) tha(6) tpa(4)
        if (raw.size() < off + 28) {
            ++stats.malformed;
            return non_protocol(raw, timestamp);
        }
        pkt.ether_kind = EtherKind::Arp;
        pkt.arp_sender_mac = read_mac(raw, off + 8);
        pkt.arp_sender_ip = Ipv4Addr{read_u32(raw, off + 14)};
        pkt.arp_target_mac = read_mac(raw, off + 18);
        pkt.arp_target_ip = Ipv4Addr{read_u32(raw, off + 24)};
        return pkt;
    }

    if (ether_type != 0x0800) {
        // IPv6 and anything else the flow definition does not cover
        pkt.ether_kind = EtherKind::NonProtocol;
        return pkt;
    }

    if (raw.size() < off + 20) {
        ++stats.malformed;
        return non_protocol(raw, timestamp);
    }
    const std::size_t ihl = static_cast<std::size_t>(raw[off] & 0x0f) * 4;
    if ((raw[off] >> 4) != 4 || ihl < 20 || raw.size() < off + ihl) {
        ++stats.malformed;
        return non_protocol(raw, timestamp);
    }

    pkt.ether_kind = EtherKind::Ipv4;
    const std::uint16_t total_len = read_u16(raw, off + 2);
    const std::uint16_t frag = read_u16(raw, off + 6);
    const bool more_fragments = (frag & 0x2000) != 0;
    const std::uint16_t frag_offset = frag & 0x1fff;
    pkt.ip_fragmented = more_fragments || frag_offset > 0;
    pkt.ttl = raw[off + 8];
    const std::uint8_t proto = raw[off + 9];
    pkt.net_src = Ipv4Addr{read_u32(raw, off + 12)};
    pkt.net_dst = Ipv4Addr{read_u32(raw, off + 16)};

    const std::size_t l4_off = off + ihl;
    const long ip_payload = static_cast<long>(total_len) - static_cast<long>(ihl);

    auto clamp_payload = [&](long value) {
        value = std::max(value, 0L);
        return std::min(static_cast<std::uint32_t>(value), pkt.frame_bytes);
    };

    if (proto == 6 && frag_offset == 0) {
        if (raw.size() < l4_off + 20) {
            ++stats.malformed;
            return non_protocol(raw, timestamp);
        }
        const std::size_t tcp_hdr = static_cast<std::size_t>(raw[l4_off + 12] >> 4) * 4;
        if (tcp_hdr < 20 || raw.size() < l4_off + tcp_hdr) {
            ++stats.malformed;
            return non_protocol(raw, timestamp);
        }
        pkt.transport = Transport::Tcp;
        pkt.src_port = read_u16(raw, l4_off);
        pkt.dst_port = read_u16(raw, l4_off + 2);
        TcpInfo tcp;
        tcp.seq = read_u32(raw, l4_off + 4);
        tcp.ack = read_u32(raw, l4_off + 8);
        tcp.flags = raw[l4_off + 13] & 0x3f;
        tcp.window = read_u16(raw, l4_off + 14);
        pkt.tcp = tcp;
        pkt.payload_bytes = clamp_payload(ip_payload - static_cast<long>(tcp_hdr));
    } else if (proto == 17 && frag_offset == 0) {
        if (raw.size() < l4_off + 8) {
            ++stats.malformed;
            return non_protocol(raw, timestamp);
        }
        pkt.transport = Transport::Udp;
        pkt.src_port = read_u16(raw, l4_off);
        pkt.dst_port = read_u16(raw, l4_off + 2);
        pkt.payload_bytes = clamp_payload(ip_payload - 8);
    } else {
        // non-first fragments carry no transport header, so they land here too
        pkt.transport = Transport::Other;
        pkt.payload_bytes = clamp_payload(ip_payload);
    }
    return pkt;
}

}  // namespace flowids
