#include <doctest.h>

#include <filesystem>

#include "flowids/decode.hpp"
#include "flowids/frames.hpp"
#include "flowids/io_util.hpp"
#include "flowids/pcap_io.hpp"
#include "flowids/rng.hpp"
#include "temp_dir.hpp"

using namespace flowids;
using flowids::testing::TempDir;

namespace {

const MacAddr kMacA = *MacAddr::parse("02:42:c0:a8:00:15");
const MacAddr kMacB = *MacAddr::parse("02:42:c0:a8:00:0b");
const Ipv4Addr kIpA = *Ipv4Addr::parse("192.168.0.21");
const Ipv4Addr kIpB = *Ipv4Addr::parse("192.168.0.11");

DecodedPacket decode_ok(const std::vector<std::uint8_t>& frame, double ts = 1.0) {
    DecodeStats stats;
    DecodedPacket pkt = decode_packet(frame, ts, stats);
    CHECK(stats.malformed == 0);
    return pkt;
}

}  // namespace

TEST_CASE("global-header-only file yields an empty stream with no warnings") {
    TempDir dir("pcap");
    PcapWriter writer;
    writer.save(dir.file("empty.pcap"));
    CHECK(writer.bytes().size() == 24);

    PcapReadStats stats;
    const auto packets = read_pcap_file(dir.file("empty.pcap"), &stats);
    CHECK(packets.empty());
    CHECK(stats.skipped_records == 0);
    CHECK(stats.truncated_tail == 0);
}

TEST_CASE("microsecond record timestamps combine seconds and sub-seconds") {
    TempDir dir("pcap");
    PcapWriter writer;
    std::vector<std::uint8_t> frame(60, 0);
    writer.add(1000.5, frame);
    writer.save(dir.file("one.pcap"));

    const auto packets = read_pcap_file(dir.file("one.pcap"));
    REQUIRE(packets.size() == 1);
    CHECK(packets[0].timestamp == doctest::Approx(1000.5).epsilon(1e-12));
    CHECK(packets[0].frame_bytes == 60);
}

TEST_CASE("nanosecond captures decode at nanosecond resolution") {
    TempDir dir("pcap");
    PcapWriterOptions options;
    options.nanosecond = true;
    PcapWriter writer(options);
    std::vector<std::uint8_t> frame(60, 0);
    writer.add(7.000000123, frame);
    writer.save(dir.file("nano.pcap"));

    PcapReader reader(dir.file("nano.pcap"));
    CHECK(reader.nanosecond());
    DecodedPacket pkt;
    REQUIRE(reader.next_packet(pkt));
    CHECK(pkt.timestamp == doctest::Approx(7.000000123).epsilon(1e-15));
}

TEST_CASE("byte-swapped captures decode identically to native ones") {
    TempDir dir("pcap");
    TcpFrameSpec spec;
    spec.src_mac = kMacA;
    spec.dst_mac = kMacB;
    spec.src_ip = kIpA;
    spec.dst_ip = kIpB;
    spec.src_port = 50000;
    spec.dst_port = 502;
    spec.seq = 1234;
    spec.flags = tcp_flag::Syn;
    spec.window = 64240;
    const auto frame = build_tcp_frame(spec);

    PcapWriter native;
    PcapWriterOptions swapped_options;
    swapped_options.byte_swapped = true;
    PcapWriter swapped(swapped_options);
    for (double ts : {10.0, 10.25, 11.5}) {
        native.add(ts, frame);
        swapped.add(ts, frame);
    }
    native.save(dir.file("native.pcap"));
    swapped.save(dir.file("swapped.pcap"));

    const auto a = read_pcap_file(dir.file("native.pcap"));
    const auto b = read_pcap_file(dir.file("swapped.pcap"));
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].timestamp == b[i].timestamp);
        CHECK(a[i].frame_bytes == b[i].frame_bytes);
        CHECK(a[i].tcp->window == b[i].tcp->window);
        CHECK(a[i].net_src == b[i].net_src);
    }
}

TEST_CASE("truncated trailing record is skipped and counted") {
    TempDir dir("pcap");
    PcapWriter writer;
    std::vector<std::uint8_t> frame(60, 0);
    writer.add(1.0, frame);
    writer.add(2.0, frame);
    auto bytes = writer.bytes();
    bytes.resize(bytes.size() - 30);  // cut into the second record's data
    write_file_atomic(dir.file("cut.pcap"), bytes);

    PcapReadStats stats;
    const auto packets = read_pcap_file(dir.file("cut.pcap"), &stats);
    CHECK(packets.size() == 1);
    CHECK(stats.truncated_tail == 1);
}

TEST_CASE("record with caplen above snaplen is skipped and counted") {
    TempDir dir("pcap");
    PcapWriterOptions options;
    options.snaplen = 100;
    PcapWriter writer(options);
    std::vector<std::uint8_t> big(200, 0xab);
    std::vector<std::uint8_t> small(60, 1);
    writer.add(1.0, big);
    writer.add(2.0, small);
    writer.save(dir.file("snap.pcap"));

    PcapReadStats stats;
    const auto packets = read_pcap_file(dir.file("snap.pcap"), &stats);
    CHECK(packets.size() == 1);
    CHECK(stats.skipped_records == 1);
}

TEST_CASE("unknown magic is a format error, missing file an io error") {
    TempDir dir("pcap");
    write_file_atomic(dir.file("junk.pcap"), std::string(24, 'x'));
    CHECK_THROWS_AS(PcapReader(dir.file("junk.pcap")), PcapFormatError);
    CHECK_THROWS_AS(PcapReader(dir.file("missing.pcap")), PcapIoError);
}

TEST_CASE("arp request decodes with both MACs and IPs populated") {
    ArpFrameSpec spec;
    spec.src_mac = kMacA;
    spec.dst_mac = MacAddr::broadcast();
    spec.op = 1;
    spec.sender_mac = kMacA;
    spec.sender_ip = kIpA;
    spec.target_mac = MacAddr{};
    spec.target_ip = kIpB;

    const DecodedPacket pkt = decode_ok(build_arp_frame(spec));
    CHECK(pkt.ether_kind == EtherKind::Arp);
    CHECK(pkt.transport == Transport::None);
    CHECK(pkt.arp_sender_mac == kMacA);
    CHECK(pkt.arp_target_mac == MacAddr{});
    CHECK(pkt.arp_sender_ip == kIpA);
    CHECK(pkt.arp_target_ip == kIpB);
    CHECK_FALSE(pkt.net_src.has_value());
    CHECK_FALSE(pkt.tcp.has_value());
}

TEST_CASE("tcp syn decodes flags, window, ports and ttl") {
    TcpFrameSpec spec;
    spec.src_mac = kMacA;
    spec.dst_mac = kMacB;
    spec.src_ip = kIpA;
    spec.dst_ip = kIpB;
    spec.src_port = 49152;
    spec.dst_port = 502;
    spec.seq = 0xdeadbeef;
    spec.flags = tcp_flag::Syn;
    spec.window = 64240;
    spec.ttl = 64;

    const DecodedPacket pkt = decode_ok(build_tcp_frame(spec));
    CHECK(pkt.ether_kind == EtherKind::Ipv4);
    CHECK(pkt.transport == Transport::Tcp);
    REQUIRE(pkt.tcp.has_value());
    CHECK(pkt.tcp->flags == tcp_flag::Syn);
    CHECK(pkt.tcp->seq == 0xdeadbeef);
    CHECK(pkt.tcp->window == 64240);
    CHECK(pkt.src_port == 49152);
    CHECK(pkt.dst_port == 502);
    CHECK(pkt.ttl == 64);
    CHECK(pkt.payload_bytes == 0);
}

TEST_CASE("llc frame with a length-field EtherType slot is NonProtocol") {
    const auto frame = build_llc_frame(kMacA, kMacB, 0x0026, 0x26);
    DecodeStats stats;
    const DecodedPacket pkt = decode_packet(frame, 1.0, stats);
    CHECK(pkt.ether_kind == EtherKind::NonProtocol);
    CHECK(stats.malformed == 0);  // well-formed, just not a protocol the flows cover
}

TEST_CASE("single vlan tag is unwrapped") {
    TcpFrameSpec spec;
    spec.src_mac = kMacA;
    spec.dst_mac = kMacB;
    spec.src_ip = kIpA;
    spec.dst_ip = kIpB;
    spec.src_port = 1;
    spec.dst_port = 2;
    spec.window = 100;
    spec.flags = tcp_flag::Ack;
    auto frame = build_tcp_frame(spec);
    // splice an 802.1Q tag after the MAC addresses
    std::vector<std::uint8_t> tagged(frame.begin(), frame.begin() + 12);
    tagged.push_back(0x81);
    tagged.push_back(0x00);
    tagged.push_back(0x00);
    tagged.push_back(0x64);
    tagged.insert(tagged.end(), frame.begin() + 12, frame.end());

    const DecodedPacket pkt = decode_ok(tagged);
    CHECK(pkt.transport == Transport::Tcp);
    CHECK(pkt.net_src == kIpA);
}

TEST_CASE("ipv6 decodes as NonProtocol") {
    std::vector<std::uint8_t> frame(60, 0);
    frame[12] = 0x86;
    frame[13] = 0xdd;
    DecodeStats stats;
    CHECK(decode_packet(frame, 0.0, stats).ether_kind == EtherKind::NonProtocol);
    CHECK(stats.malformed == 0);
}

TEST_CASE("frames shorter than their declared headers degrade and are counted") {
    TcpFrameSpec spec;
    spec.src_mac = kMacA;
    spec.dst_mac = kMacB;
    spec.src_ip = kIpA;
    spec.dst_ip = kIpB;
    auto frame = build_tcp_frame(spec);
    frame.resize(40);  // cut inside the TCP header

    DecodeStats stats;
    const DecodedPacket pkt = decode_packet(frame, 0.0, stats);
    CHECK(pkt.ether_kind == EtherKind::NonProtocol);
    CHECK(stats.malformed == 1);
}

TEST_CASE("tcp options (data offset > 5) shift the payload correctly") {
    TcpFrameSpec spec;
    spec.src_mac = kMacA;
    spec.dst_mac = kMacB;
    spec.src_ip = kIpA;
    spec.dst_ip = kIpB;
    spec.src_port = 1000;
    spec.dst_port = 2000;
    spec.flags = tcp_flag::Ack | tcp_flag::Psh;
    spec.payload_len = 10;
    auto frame = build_tcp_frame(spec);

    // splice 4 bytes of options after the 20-byte TCP header and patch the
    // data offset and IP total length
    const std::size_t tcp_off = 14 + 20;
    frame.insert(frame.begin() + static_cast<std::ptrdiff_t>(tcp_off + 20),
                 {0x01, 0x01, 0x01, 0x00});
    frame[tcp_off + 12] = 0x60;  // data offset 6
    const std::uint16_t total_len = 20 + 24 + 10;
    frame[14 + 2] = static_cast<std::uint8_t>(total_len >> 8);
    frame[14 + 3] = static_cast<std::uint8_t>(total_len & 0xff);

    const DecodedPacket pkt = decode_ok(frame);
    CHECK(pkt.transport == Transport::Tcp);
    CHECK(pkt.payload_bytes == 10);
    CHECK(pkt.tcp->flags == (tcp_flag::Ack | tcp_flag::Psh));
}

TEST_CASE("snapped records keep caplen as the frame byte count") {
    TempDir dir("pcap");
    PcapWriter writer;
    std::vector<std::uint8_t> frame(120, 0x5c);
    // record captured at 80 bytes of a 120-byte frame
    writer.add(3.0, std::span<const std::uint8_t>(frame.data(), 80), 120);
    writer.save(dir.file("snapped.pcap"));
    const auto packets = read_pcap_file(dir.file("snapped.pcap"));
    REQUIRE(packets.size() == 1);
    CHECK(packets[0].frame_bytes == 80);
}

TEST_CASE("truncated arp payload degrades to NonProtocol and is counted") {
    ArpFrameSpec spec;
    spec.src_mac = kMacA;
    spec.dst_mac = MacAddr::broadcast();
    spec.sender_mac = kMacA;
    spec.sender_ip = kIpA;
    spec.target_mac = kMacB;
    spec.target_ip = kIpB;
    auto frame = build_arp_frame(spec);
    frame.resize(14 + 20);  // cut inside the ARP body

    DecodeStats stats;
    const DecodedPacket pkt = decode_packet(frame, 0.0, stats);
    CHECK(pkt.ether_kind == EtherKind::NonProtocol);
    CHECK(stats.malformed == 1);
}

TEST_CASE("vlan-wrapped llc frame is NonProtocol") {
    std::vector<std::uint8_t> frame(60, 0);
    frame[12] = 0x81;  // 802.1Q tag
    frame[13] = 0x00;
    frame[16] = 0x00;  // inner slot holds a length (LLC)
    frame[17] = 0x26;
    DecodeStats stats;
    CHECK(decode_packet(frame, 0.0, stats).ether_kind == EtherKind::NonProtocol);
    CHECK(stats.malformed == 0);
}

TEST_CASE("decoding is total on fuzzed frames and payload never exceeds the frame") {
    Rng rng(20240917);
    DecodeStats stats;
    for (int i = 0; i < 2000; ++i) {
        std::vector<std::uint8_t> frame(14 + rng.bounded(200));
        for (auto& b : frame) b = static_cast<std::uint8_t>(rng.bounded(256));
        if (rng.bounded(3) == 0) {  // bias toward plausible EtherTypes
            frame[12] = 0x08;
            frame[13] = rng.bounded(2) == 0 ? 0x00 : 0x06;
        }
        const DecodedPacket pkt = decode_packet(frame, 1.0, stats);
        CHECK(pkt.payload_bytes <= pkt.frame_bytes);
        CHECK((pkt.transport == Transport::Tcp) == pkt.tcp.has_value());
        if (pkt.ether_kind == EtherKind::NonProtocol) {
            CHECK_FALSE(pkt.net_src.has_value());
            CHECK_FALSE(pkt.src_port.has_value());
        }
    }
}

TEST_CASE("encode-then-decode preserves every field on well-formed frames") {
    Rng rng(7);
    for (int i = 0; i < 200; ++i) {
        const auto kind = rng.bounded(3);
        if (kind == 0) {
            TcpFrameSpec spec;
            spec.src_mac = kMacA;
            spec.dst_mac = kMacB;
            spec.src_ip = kIpA;
            spec.dst_ip = kIpB;
            spec.src_port = static_cast<std::uint16_t>(rng.bounded(65536));
            spec.dst_port = static_cast<std::uint16_t>(rng.bounded(65536));
            spec.seq = static_cast<std::uint32_t>(rng.next_u64());
            spec.ack = static_cast<std::uint32_t>(rng.next_u64());
            spec.flags = static_cast<std::uint8_t>(rng.bounded(64));
            spec.window = static_cast<std::uint16_t>(rng.bounded(65536));
            spec.payload_len = static_cast<std::uint16_t>(rng.bounded(400));
            spec.ttl = static_cast<std::uint8_t>(1 + rng.bounded(255));
            spec.more_fragments = rng.bounded(8) == 0;

            const DecodedPacket pkt = decode_ok(build_tcp_frame(spec));
            CHECK(pkt.transport == Transport::Tcp);
            CHECK(pkt.link_src == spec.src_mac);
            CHECK(pkt.link_dst == spec.dst_mac);
            CHECK(pkt.net_src == spec.src_ip);
            CHECK(pkt.net_dst == spec.dst_ip);
            CHECK(pkt.src_port == spec.src_port);
            CHECK(pkt.dst_port == spec.dst_port);
            CHECK(pkt.tcp->seq == spec.seq);
            CHECK(pkt.tcp->ack == spec.ack);
            CHECK(pkt.tcp->flags == spec.flags);
            CHECK(pkt.tcp->window == spec.window);
            CHECK(pkt.payload_bytes == spec.payload_len);
            CHECK(pkt.ttl == spec.ttl);
            CHECK(pkt.ip_fragmented == spec.more_fragments);
        } else if (kind == 1) {
            UdpFrameSpec spec;
            spec.src_mac = kMacB;
            spec.dst_mac = kMacA;
            spec.src_ip = kIpB;
            spec.dst_ip = kIpA;
            spec.src_port = static_cast<std::uint16_t>(rng.bounded(65536));
            spec.dst_port = static_cast<std::uint16_t>(rng.bounded(65536));
            spec.payload_len = static_cast<std::uint16_t>(rng.bounded(300));

            const DecodedPacket pkt = decode_ok(build_udp_frame(spec));
            CHECK(pkt.transport == Transport::Udp);
            CHECK(pkt.payload_bytes == spec.payload_len);
            CHECK(pkt.src_port == spec.src_port);
            CHECK_FALSE(pkt.tcp.has_value());
        } else {
            ArpFrameSpec spec;
            spec.src_mac = kMacA;
            spec.dst_mac = rng.bounded(2) == 0 ? MacAddr::broadcast() : kMacB;
            spec.op = rng.bounded(2) == 0 ? 1 : 2;
            spec.sender_mac = kMacA;
            spec.sender_ip = kIpA;
            spec.target_mac = kMacB;
            spec.target_ip = kIpB;

            const DecodedPacket pkt = decode_ok(build_arp_frame(spec));
            CHECK(pkt.ether_kind == EtherKind::Arp);
            CHECK(pkt.arp_sender_mac == spec.sender_mac);
            CHECK(pkt.arp_target_mac == spec.target_mac);
            CHECK(pkt.arp_sender_ip == spec.sender_ip);
            CHECK(pkt.arp_target_ip == spec.target_ip);
        }
    }
}
