#pragma once

// Classic pcap container (no pcapng), linktype 1 / Ethernet only. Both byte
// orders and both the micro- and nanosecond magics are accepted on read;
// timestamps are normalized to float seconds.

#include <cstdint>
#include <fstream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "flowids/decode.hpp"
#include "flowids/packet.hpp"

namespace flowids {

struct PcapError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct PcapIoError : PcapError {
    using PcapError::PcapError;
};
struct PcapFormatError : PcapError {
    using PcapError::PcapError;
};

struct PcapRecord {
    double timestamp = 0.0;
    std::uint32_t orig_len = 0;
    std::vector<std::uint8_t> data;
};

struct PcapReadStats {
    std::uint64_t packets = 0;          // records decoded
    std::uint64_t skipped_records = 0;  // caplen > snaplen
    std::uint64_t truncated_tail = 0;   // incomplete trailing record
    std::uint64_t malformed_frames = 0; // decoder fallbacks to NonProtocol
};

// Streaming single-reader over one capture file.
class PcapReader {
public:
    explicit PcapReader(const std::string& path);

    bool next_record(PcapRecord& out);
    // Decodes the next record; false at end of stream.
    bool next_packet(DecodedPacket& out);

    const PcapReadStats& stats() const { return stats_; }
    bool byte_swapped() const { return swapped_; }
    bool nanosecond() const { return nanosecond_; }
    std::uint32_t snaplen() const { return snaplen_; }

private:
    std::ifstream in_;
    std::string path_;
    PcapReadStats stats_;
    DecodeStats decode_stats_;
    bool swapped_ = false;
    bool nanosecond_ = false;
    std::uint32_t snaplen_ = 0;
    bool done_ = false;
};

struct PcapWriterOptions {
    bool nanosecond = false;
    bool byte_swapped = false;  // emit the opposite byte order (test fixtures)
    std::uint32_t snaplen = 65535;
};

// Builds a capture in memory; save with write_file_atomic.
class PcapWriter {
public:
    explicit PcapWriter(PcapWriterOptions options = {});

    void add(double timestamp, std::span<const std::uint8_t> frame);
    void add(double timestamp, std::span<const std::uint8_t> frame, std::uint32_t orig_len);

    const std::vector<std::uint8_t>& bytes() const { return buffer_; }
    std::size_t record_count() const { return records_; }
    void save(const std::string& path) const;

private:
    void put_u16(std::uint16_t value);
    void put_u32(std::uint32_t value);

    PcapWriterOptions options_;
    std::vector<std::uint8_t> buffer_;
    std::size_t records_ = 0;
};

// Convenience: decode a whole file.
std::vector<DecodedPacket> read_pcap_file(const std::string& path,
                                          PcapReadStats* stats_out = nullptr);

}  // namespace flowids
