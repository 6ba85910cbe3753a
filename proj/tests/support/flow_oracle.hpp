#pragma once

// Brute-force reference aggregator for checking the flow engine. Groups
// packets by (direction-free key, lazily-reset epoch) and recomputes every
// feature naively from the packet list. Deliberately shares no code with the
// engine beyond the DecodedPacket value types.

#include <cstdint>
#include <string>
#include <vector>

#include "flowids/packet.hpp"

namespace flowids::testing {

struct OracleFlow {
    std::string s_addr;
    std::string r_addr;
    std::string protocol;
    double start = 0.0, end = 0.0, start_offset = 0.0, end_offset = 0.0, duration = 0.0;
    std::int64_t s_packets = 0, r_packets = 0;
    std::int64_t s_bytes_max = 0, r_bytes_max = 0, s_bytes_min = 0, r_bytes_min = 0;
    double s_bytes_avg = 0.0, r_bytes_avg = 0.0, s_load = 0.0, r_load = 0.0;
    std::int64_t s_payload_max = 0, r_payload_max = 0, s_payload_min = 0, r_payload_min = 0;
    double s_payload_avg = 0.0, r_payload_avg = 0.0;
    double s_inter_packet = 0.0, r_inter_packet = 0.0;
    bool has_tcp = false;
    double s_ttl = 0.0, r_ttl = 0.0;
    double s_ack_delay_max = 0.0, r_ack_delay_max = 0.0;
    double s_ack_delay_min = 0.0, r_ack_delay_min = 0.0;
    double s_ack_delay_avg = 0.0, r_ack_delay_avg = 0.0;
    double s_ack_rate = 0.0, r_ack_rate = 0.0, s_fin_rate = 0.0, r_fin_rate = 0.0;
    double s_psh_rate = 0.0, r_psh_rate = 0.0, s_rst_rate = 0.0, r_rst_rate = 0.0;
    double s_urg_rate = 0.0, r_urg_rate = 0.0, s_syn_rate = 0.0, r_syn_rate = 0.0;
    double s_win_tcp = 0.0, r_win_tcp = 0.0, s_fragment_rate = 0.0, r_fragment_rate = 0.0;
};

std::vector<OracleFlow> oracle_flows(const std::vector<DecodedPacket>& packets, double interval);

}  // namespace flowids::testing
