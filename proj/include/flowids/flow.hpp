#pragma once

// Interval-bounded bidirectional flow aggregation. Packets are grouped by a
// direction-free key (canonical-min address first) and flushed lazily: a
// packet arriving for a key whose flow started more than `interval` seconds
// earlier emits that flow and starts a fresh one.
//
// "Sender" is the canonical-min endpoint of the key, not the connection
// initiator: s-prefixed features aggregate the packets whose source address
// equals sAddress.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "flowids/packet.hpp"

namespace flowids {

struct FlowKey {
    std::string s_addr;    // canonical-min address (IP, or MAC for ARP)
    std::string r_addr;
    std::string protocol;  // ARP | IPV4-TCP | IPV4-UDP | IPV4-OTHER

    bool operator==(const FlowKey&) const = default;
};

struct FlowKeyHash {
    std::size_t operator()(const FlowKey& key) const;
};

enum class FlowDirection { SenderToReceiver = 0, ReceiverToSender = 1 };

// Direction-free key for a decoded packet. IPv4 packets key on the two IPs
// (numeric min first), ARP packets on the two link-layer MACs. Throws
// std::invalid_argument for NonProtocol frames: the caller discards those.
FlowKey canonical_flow_key(const DecodedPacket& pkt);

FlowDirection flow_direction(const DecodedPacket& pkt, const FlowKey& key);

struct FlowRecord {
    std::string s_address;
    std::string r_address;
    std::string protocol;
    double start = 0.0;
    double end = 0.0;
    double start_offset = 0.0;
    double end_offset = 0.0;
    double duration = 0.0;
    std::int64_t s_packets = 0, r_packets = 0;
    std::int64_t s_bytes_max = 0, r_bytes_max = 0;
    std::int64_t s_bytes_min = 0, r_bytes_min = 0;
    double s_bytes_avg = 0.0, r_bytes_avg = 0.0;
    double s_load = 0.0, r_load = 0.0;
    std::int64_t s_payload_max = 0, r_payload_max = 0;
    std::int64_t s_payload_min = 0, r_payload_min = 0;
    double s_payload_avg = 0.0, r_payload_avg = 0.0;
    double s_inter_packet = 0.0, r_inter_packet = 0.0;

    bool has_tcp = false;  // TCP feature cells are written only when true
    double s_ttl = 0.0, r_ttl = 0.0;
    double s_ack_delay_max = 0.0, r_ack_delay_max = 0.0;
    double s_ack_delay_min = 0.0, r_ack_delay_min = 0.0;
    double s_ack_delay_avg = 0.0, r_ack_delay_avg = 0.0;
    double s_ack_rate = 0.0, r_ack_rate = 0.0;
    double s_fin_rate = 0.0, r_fin_rate = 0.0;
    double s_psh_rate = 0.0, r_psh_rate = 0.0;
    double s_rst_rate = 0.0, r_rst_rate = 0.0;
    double s_urg_rate = 0.0, r_urg_rate = 0.0;
    double s_syn_rate = 0.0, r_syn_rate = 0.0;
    double s_win_tcp = 0.0, r_win_tcp = 0.0;
    double s_fragment_rate = 0.0, r_fragment_rate = 0.0;

    bool labeled = false;
    int it_b = 0;
    std::string it_m = "normal";
    int nst_b = 0;
    std::string nst_m = "normal";

    // Value of a numeric feature cell by schema column index (3..49).
    double numeric_cell(std::size_t column) const;
};

class FlowAccumulator {
public:
    FlowAccumulator(FlowKey key, double first_ts);

    void add(const DecodedPacket& pkt, FlowDirection dir);
    FlowRecord finalize(double capture_t0) const;

    double first_ts() const { return first_ts_; }
    std::int64_t packet_count() const { return dirs_[0].packets + dirs_[1].packets; }
    const FlowKey& key() const { return key_; }

private:
    struct DirectionStats {
        std::int64_t packets = 0;
        std::int64_t bytes_sum = 0, bytes_min = 0, bytes_max = 0;
        std::int64_t payload_sum = 0, payload_min = 0, payload_max = 0;
        double last_ts = 0.0;
        double gap_sum = 0.0;
        double ttl_sum = 0.0;
        std::int64_t flag_counts[6] = {};  // ack fin psh rst urg syn
        double window_sum = 0.0;
        std::int64_t fragment_count = 0;
        // data segments awaiting acknowledgment: (sequence end, send time)
        std::vector<std::pair<std::uint32_t, double>> unmatched_data;
        std::vector<double> ack_delays;
    };

    void fill_direction(FlowRecord& record, const DirectionStats& ds, bool sender) const;

    FlowKey key_;
    bool tcp_ = false;
    double first_ts_ = 0.0;
    double end_ts_ = 0.0;
    DirectionStats dirs_[2];
};

struct FlowEngineStats {
    std::uint64_t packets_in = 0;          // everything offered, NonProtocol included
    std::uint64_t discarded_non_protocol = 0;
    std::uint64_t aggregated_packets = 0;
    std::uint64_t flows_emitted = 0;
    std::uint64_t time_regressions = 0;    // timestamp went back by more than 1 ms
};

class FlowAggregator {
public:
    explicit FlowAggregator(double interval);

    // Feeds one packet; returns the flow this packet flushed, if any.
    std::optional<FlowRecord> add(const DecodedPacket& pkt);

    // Emits all residual flows in key-first-seen order and resets the engine.
    std::vector<FlowRecord> finish();

    const FlowEngineStats& stats() const { return stats_; }
    double interval() const { return interval_; }

private:
    double interval_;
    std::optional<double> capture_t0_;
    double last_ts_ = 0.0;
    bool saw_packet_ = false;
    std::unordered_map<FlowKey, std::size_t, FlowKeyHash> index_;
    std::vector<FlowAccumulator> slots_;   // insertion order == first-seen order
    FlowEngineStats stats_;
};

std::vector<FlowRecord> generate_flows(std::span<const DecodedPacket> packets, double interval,
                                       FlowEngineStats* stats_out = nullptr);

}  // namespace flowids
