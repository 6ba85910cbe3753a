#include "flowids/pcap_io.hpp"

#include <cmath>
#include <cstring>

#include "flowids/io_util.hpp"
#include "flowids/log.hpp"

namespace flowids {

namespace {

constexpr std::uint32_t kMagicMicro = 0xa1b2c3d4;
constexpr std::uint32_t kMagicMicroSwapped = 0xd4c3b2a1;
constexpr std::uint32_t kMagicNano = 0xa1b23c4d;
constexpr std::uint32_t kMagicNanoSwapped = 0x4d3cb2a1;

std::uint32_t load_u32(const std::uint8_t* p, bool swapped) {
    std::uint32_t le = static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
                       (static_cast<std::uint32_t>(p[2]) << 16) |
                       (static_cast<std::uint32_t>(p[3]) << 24);
    if (!swapped) return le;
    return ((le & 0x000000ffu) << 24) | ((le & 0x0000ff00u) << 8) | ((le & 0x00ff0000u) >> 8) |
           ((le & 0xff000000u) >> 24);
}

}  // namespace

PcapReader::PcapReader(const std::string& path) : in_(path, std::ios::binary), path_(path) {
    if (!in_) throw PcapIoError("cannot open pcap file: " + path);
    std::uint8_t header[24];
    in_.read(reinterpret_cast<char*>(header), sizeof(header));
    if (in_.gcount() != sizeof(header))
        throw PcapFormatError("pcap file shorter than its global header: " + path);

    const std::uint32_t magic_le = load_u32(header, false);
    switch (magic_le) {
        case kMagicMicro: swapped_ = false; nanosecond_ = false; break;
        case kMagicMicroSwapped: swapped_ = true; nanosecond_ = false; break;
        case kMagicNano: swapped_ = false; nanosecond_ = true; break;
        case kMagicNanoSwapped: swapped_ = true; nanosecond_ = true; break;
        default: throw PcapFormatError("unknown pcap magic in " + path);
    }
    snaplen_ = load_u32(header + 16, swapped_);
    const std::uint32_t linktype = load_u32(header + 20, swapped_);
    if (linktype != 1)
        throw PcapFormatError("unsupported link type " + std::to_string(linktype) + " in " + path +
                              " (only Ethernet is handled)");
}

bool PcapReader::next_record(PcapRecord& out) {
    while (!done_) {
        std::uint8_t header[16];
        in_.read(reinterpret_cast<char*>(header), sizeof(header));
        const auto got = in_.gcount();
        if (got == 0) {
            done_ = true;
            return false;
        }
        if (got != sizeof(header)) {
            ++stats_.truncated_tail;
            log_warn("pcap %s: truncated record header at end of file, skipped", path_.c_str());
            done_ = true;
            return false;
        }
        const std::uint32_t ts_sec = load_u32(header, swapped_);
        const std::uint32_t ts_sub = load_u32(header + 4, swapped_);
        const std::uint32_t caplen = load_u32(header + 8, swapped_);
        const std::uint32_t orig_len = load_u32(header + 12, swapped_);

        if (caplen > snaplen_) {
            // implausible record; skip its bytes and count it
            ++stats_.skipped_records;
            log_warn("pcap %s: record caplen %u exceeds snaplen %u, skipped", path_.c_str(), caplen,
                     snaplen_);
            in_.seekg(static_cast<std::streamoff>(caplen), std::ios::cur);
            if (!in_) {
                ++stats_.truncated_tail;
                done_ = true;
                return false;
            }
            continue;
        }

        out.data.resize(caplen);
        in_.read(reinterpret_cast<char*>(out.data.data()), static_cast<std::streamsize>(caplen));
        if (in_.gcount() != static_cast<std::streamsize>(caplen)) {
            ++stats_.truncated_tail;
            log_warn("pcap %s: truncated trailing record, skipped", path_.c_str());
            done_ = true;
            return false;
        }
        const double scale = nanosecond_ ? 1e-9 : 1e-6;
        out.timestamp = static_cast<double>(ts_sec) + static_cast<double>(ts_sub) * scale;
        out.orig_len = orig_len;
        return true;
    }
    return false;
}

bool PcapReader::next_packet(DecodedPacket& out) {
    PcapRecord record;
    if (!next_record(record)) return false;
    out = decode_packet(record.data, record.timestamp, decode_stats_);
    ++stats_.packets;
    stats_.malformed_frames = decode_stats_.malformed;
    return true;
}

PcapWriter::PcapWriter(PcapWriterOptions options) : options_(options) {
    put_u32(options_.nanosecond ? kMagicNano : kMagicMicro);
    put_u16(2);  // version 2.4
    put_u16(4);
    put_u32(0);  // thiszone
    put_u32(0);  // sigfigs
    put_u32(options_.snaplen);
    put_u32(1);  // linktype: Ethernet
}

void PcapWriter::put_u16(std::uint16_t value) {
    if (options_.byte_swapped) {
        buffer_.push_back(static_cast<std::uint8_t>(value >> 8));
        buffer_.push_back(static_cast<std::uint8_t>(value & 0xff));
    } else {
        buffer_.push_back(static_cast<std::uint8_t>(value & 0xff));
        buffer_.push_back(static_cast<std::uint8_t>(value >> 8));
    }
}

void PcapWriter::put_u32(std::uint32_t value) {
    if (options_.byte_swapped) {
        buffer_.push_back(static_cast<std::uint8_t>((value >> 24) & 0xff));
        buffer_.push_back(static_cast<std::uint8_t>((value >> 16) & 0xff));
        buffer_.push_back(static_cast<std::uint8_t>((value >> 8) & 0xff));
        buffer_.push_back(static_cast<std::uint8_t>(value & 0xff));
    } else {
        buffer_.push_back(static_cast<std::uint8_t>(value & 0xff));
        buffer_.push_back(static_cast<std::uint8_t>((value >> 8) & 0xff));
        buffer_.push_back(static_cast<std::uint8_t>((value >> 16) & 0xff));
        buffer_.push_back(static_cast<std::uint8_t>((value >> 24) & 0xff));
    }
}

void PcapWriter::add(double timestamp, std::span<const std::uint8_t> frame) {
    add(timestamp, frame, static_cast<std::uint32_t>(frame.size()));
}

void PcapWriter::add(double timestamp, std::span<const std::uint8_t> frame,
                     std::uint32_t orig_len) {
    const double unit = options_.nanosecond ? 1e9 : 1e6;
    const auto unit_max = static_cast<std::uint64_t>(unit);
    auto sec = static_cast<std::uint64_t>(timestamp);
    auto sub = static_cast<std::uint64_t>(std::llround((timestamp - static_cast<double>(sec)) * unit));
    if (sub >= unit_max) {
        sec += sub / unit_max;
        sub %= unit_max;
    }
    put_u32(static_cast<std::uint32_t>(sec));
    put_u32(static_cast<std::uint32_t>(sub));
    put_u32(static_cast<std::uint32_t>(frame.size()));
    put_u32(orig_len);
    buffer_.insert(buffer_.end(), frame.begin(), frame.end());
    ++records_;
}

void PcapWriter::save(const std::string& path) const { write_file_atomic(path, buffer_); }

std::vector<DecodedPacket> read_pcap_file(const std::string& path, PcapReadStats* stats_out) {
    PcapReader reader(path);
    std::vector<DecodedPacket> packets;
    DecodedPacket pkt;
    while (reader.next_packet(pkt)) packets.push_back(pkt);
    if (stats_out != nullptr) *stats_out = reader.stats();
    return packets;
}

}  // namespace flowids
