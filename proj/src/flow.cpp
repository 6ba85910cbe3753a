#include "flowids/flow.hpp"

#include <algorithm>
#include <stdexcept>

#include "flowids/flow_schema.hpp"
#include "flowids/log.hpp"

namespace flowids {

namespace {

// arrival-order jitter tolerated before a warning is counted
constexpr double kJitterTolerance = 1e-3;

// 32-bit sequence-space comparison: true when `ack` is at or past `seq_end`
bool ack_covers(std::uint32_t ack, std::uint32_t seq_end) {
    return static_cast<std::int32_t>(ack - seq_end) >= 0;
}

enum FlagIndex { kAck = 0, kFin = 1, kPsh = 2, kRst = 3, kUrg = 4, kSyn = 5 };

}  // namespace

std::size_t FlowKeyHash::operator()(const FlowKey& key) const {
    const std::hash<std::string> h;
    std::size_t seed = h(key.s_addr);
    seed ^= h(key.r_addr) + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2);
    seed ^= h(key.protocol) + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2);
    return seed;
}

FlowKey canonical_flow_key(const DecodedPacket& pkt) {
    FlowKey key;
    switch (pkt.ether_kind) {
        case EtherKind::Ipv4: {
            const Ipv4Addr a = *pkt.net_src;
            const Ipv4Addr b = *pkt.net_dst;
            const Ipv4Addr lo = std::min(a, b);
            const Ipv4Addr hi = std::max(a, b);
            key.s_addr = lo.to_string();
            key.r_addr = hi.to_string();
            switch (pkt.transport) {
                case Transport::Tcp: key.protocol = "IPV4-TCP"; break;
                case Transport::Udp: key.protocol = "IPV4-UDP"; break;
                default: key.protocol = "IPV4-OTHER"; break;
            }
            return key;
        }
        case EtherKind::Arp: {
            const MacAddr lo = std::min(pkt.link_src, pkt.link_dst);
            const MacAddr hi = std::max(pkt.link_src, pkt.link_dst);
            key.s_addr = lo.to_string();
            key.r_addr = hi.to_string();
            key.protocol = "ARP";
            return key;
        }
        case EtherKind::NonProtocol:
            break;
    }
    throw std::invalid_argument("canonical_flow_key: NonProtocol frames carry no flow key");
}

FlowDirection flow_direction(const DecodedPacket& pkt, const FlowKey& key) {
    const std::string source = pkt.ether_kind == EtherKind::Arp ? pkt.link_src.to_string()
                                                                : pkt.net_src->to_string();
    return source == key.s_addr ? FlowDirection::SenderToReceiver
                                : FlowDirection::ReceiverToSender;
}

double FlowRecord::numeric_cell(std::size_t column) const {
    switch (column) {
        case 3: return start;
        case 4: return end;
        case 5: return start_offset;
        case 6: return end_offset;
        case 7: return duration;
        case 8: return static_cast<double>(s_packets);
        case 9: return static_cast<double>(r_packets);
        case 10: return static_cast<double>(s_bytes_max);
        case 11: return static_cast<double>(r_bytes_max);
        case 12: return static_cast<double>(s_bytes_min);
        case 13: return static_cast<double>(r_bytes_min);
        case 14: return s_bytes_avg;
        case 15: return r_bytes_avg;
        case 16: return s_load;
        case 17: return r_load;
        case 18: return static_cast<double>(s_payload_max);
        case 19: return static_cast<double>(r_payload_max);
        case 20: return static_cast<double>(s_payload_min);
        case 21: return static_cast<double>(r_payload_min);
        case 22: return s_payload_avg;
        case 23: return r_payload_avg;
        case 24: return s_inter_packet;
        case 25: return r_inter_packet;
        case 26: return s_ttl;
        case 27: return r_ttl;
        case 28: return s_ack_delay_max;
        case 29: return r_ack_delay_max;
        case 30: return s_ack_delay_min;
        case 31: return r_ack_delay_min;
        case 32: return s_ack_delay_avg;
        case 33: return r_ack_delay_avg;
        case 34: return s_ack_rate;
        case 35: return r_ack_rate;
        case 36: return s_fin_rate;
        case 37: return r_fin_rate;
        case 38: return s_psh_rate;
        case 39: return r_psh_rate;
        case 40: return s_rst_rate;
        case 41: return r_rst_rate;
        case 42: return s_urg_rate;
        case 43: return r_urg_rate;
        case 44: return s_syn_rate;
        case 45: return r_syn_rate;
        case 46: return s_win_tcp;
        case 47: return r_win_tcp;
        case 48: return s_fragment_rate;
        case 49: return r_fragment_rate;
        default: throw std::out_of_range("numeric_cell: column " + std::to_string(column));
    }
}

FlowAccumulator::FlowAccumulator(FlowKey key, double first_ts)
    : key_(std::move(key)), first_ts_(first_ts), end_ts_(first_ts) {
    tcp_ = key_.protocol == "IPV4-TCP";
}

void FlowAccumulator::add(const DecodedPacket& pkt, FlowDirection dir) {
    DirectionStats& ds = dirs_[static_cast<int>(dir)];
    const auto bytes = static_cast<std::int64_t>(pkt.frame_bytes);
    const auto payload = static_cast<std::int64_t>(pkt.payload_bytes);

    if (ds.packets == 0) {
        ds.bytes_min = ds.bytes_max = bytes;
        ds.payload_min = ds.payload_max = payload;
    } else {
        ds.bytes_min = std::min(ds.bytes_min, bytes);
        ds.bytes_max = std::max(ds.bytes_max, bytes);
        ds.payload_min = std::min(ds.payload_min, payload);
        ds.payload_max = std::max(ds.payload_max, payload);
        ds.gap_sum += pkt.timestamp - ds.last_ts;
    }
    ds.bytes_sum += bytes;
    ds.payload_sum += payload;
    ds.last_ts = pkt.timestamp;
    ++ds.packets;
    end_ts_ = std::max(end_ts_, pkt.timestamp);

    if (!tcp_ || !pkt.tcp.has_value()) return;

    const TcpInfo& tcp = *pkt.tcp;
    if (pkt.ttl) ds.ttl_sum += static_cast<double>(*pkt.ttl);
    ds.window_sum += static_cast<double>(tcp.window);
    if (pkt.ip_fragmented) ++ds.fragment_count;
    if (tcp.has(tcp_flag::Ack)) ++ds.flag_counts[kAck];
    if (tcp.has(tcp_flag::Fin)) ++ds.flag_counts[kFin];
    if (tcp.has(tcp_flag::Psh)) ++ds.flag_counts[kPsh];
    if (tcp.has(tcp_flag::Rst)) ++ds.flag_counts[kRst];
    if (tcp.has(tcp_flag::Urg)) ++ds.flag_counts[kUrg];
    if (tcp.has(tcp_flag::Syn)) ++ds.flag_counts[kSyn];

    // This packet acknowledges data pending in the opposite direction; each
    // pending segment (retransmissions included) matches the first covering ACK.
    if (tcp.has(tcp_flag::Ack)) {
        DirectionStats& opposite = dirs_[1 - static_cast<int>(dir)];
        auto& pending = opposite.unmatched_data;
        auto matched = std::stable_partition(
            pending.begin(), pending.end(),
            [&](const auto& entry) { return !ack_covers(tcp.ack, entry.first); });
        for (auto it = matched; it != pending.end(); ++it)
            opposite.ack_delays.push_back(pkt.timestamp - it->second);
        pending.erase(matched, pending.end());
    }
    if (pkt.payload_bytes > 0) {
        const std::uint32_t seq_end = tcp.seq + pkt.payload_bytes;  // mod 2^32
        ds.unmatched_data.emplace_back(seq_end, pkt.timestamp);
    }
}

void FlowAccumulator::fill_direction(FlowRecord& record, const DirectionStats& ds,
                                     bool sender) const {
    const double n = static_cast<double>(ds.packets);
    auto set = [&](std::int64_t FlowRecord::*s_field, std::int64_t FlowRecord::*r_field,
                   std::int64_t value) { record.*(sender ? s_field : r_field) = value; };
    auto setf = [&](double FlowRecord::*s_field, double FlowRecord::*r_field, double value) {
        record.*(sender ? s_field : r_field) = value;
    };

    set(&FlowRecord::s_packets, &FlowRecord::r_packets, ds.packets);
    set(&FlowRecord::s_bytes_max, &FlowRecord::r_bytes_max, ds.bytes_max);
    set(&FlowRecord::s_bytes_min, &FlowRecord::r_bytes_min, ds.bytes_min);
    set(&FlowRecord::s_payload_max, &FlowRecord::r_payload_max, ds.payload_max);
    set(&FlowRecord::s_payload_min, &FlowRecord::r_payload_min, ds.payload_min);
    setf(&FlowRecord::s_bytes_avg, &FlowRecord::r_bytes_avg,
         ds.packets > 0 ? static_cast<double>(ds.bytes_sum) / n : 0.0);
    setf(&FlowRecord::s_payload_avg, &FlowRecord::r_payload_avg,
         ds.packets > 0 ? static_cast<double>(ds.payload_sum) / n : 0.0);
    setf(&FlowRecord::s_load, &FlowRecord::r_load,
         record.duration > 0.0 ? static_cast<double>(ds.bytes_sum) * 8.0 / record.duration : 0.0);
    setf(&FlowRecord::s_inter_packet, &FlowRecord::r_inter_packet,
         ds.packets >= 2 ? ds.gap_sum / static_cast<double>(ds.packets - 1) : 0.0);

    if (!record.has_tcp) return;

    setf(&FlowRecord::s_ttl, &FlowRecord::r_ttl, ds.packets > 0 ? ds.ttl_sum / n : 0.0);
    setf(&FlowRecord::s_win_tcp, &FlowRecord::r_win_tcp,
         ds.packets > 0 ? ds.window_sum / n : 0.0);
    setf(&FlowRecord::s_fragment_rate, &FlowRecord::r_fragment_rate,
         ds.packets > 0 ? static_cast<double>(ds.fragment_count) / n : 0.0);
    auto rate = [&](int flag) {
        return ds.packets > 0 ? static_cast<double>(ds.flag_counts[flag]) / n : 0.0;
    };
    setf(&FlowRecord::s_ack_rate, &FlowRecord::r_ack_rate, rate(kAck));
    setf(&FlowRecord::s_fin_rate, &FlowRecord::r_fin_rate, rate(kFin));
    setf(&FlowRecord::s_psh_rate, &FlowRecord::r_psh_rate, rate(kPsh));
    setf(&FlowRecord::s_rst_rate, &FlowRecord::r_rst_rate, rate(kRst));
    setf(&FlowRecord::s_urg_rate, &FlowRecord::r_urg_rate, rate(kUrg));
    setf(&FlowRecord::s_syn_rate, &FlowRecord::r_syn_rate, rate(kSyn));

    if (!ds.ack_delays.empty()) {
        double lo = ds.ack_delays.front();
        double hi = lo;
        double sum = 0.0;
        for (double d : ds.ack_delays) {
            lo = std::min(lo, d);
            hi = std::max(hi, d);
            sum += d;
        }
        setf(&FlowRecord::s_ack_delay_max, &FlowRecord::r_ack_delay_max, hi);
        setf(&FlowRecord::s_ack_delay_min, &FlowRecord::r_ack_delay_min, lo);
        setf(&FlowRecord::s_ack_delay_avg, &FlowRecord::r_ack_delay_avg,
             sum / static_cast<double>(ds.ack_delays.size()));
    }
}

FlowRecord FlowAccumulator::finalize(double capture_t0) const {
    FlowRecord record;
    record.s_address = key_.s_addr;
    record.r_address = key_.r_addr;
    record.protocol = key_.protocol;
    record.has_tcp = tcp_;
    record.start = first_ts_;
    record.end = end_ts_;
    record.start_offset = first_ts_ - capture_t0;
    record.end_offset = end_ts_ - capture_t0;
    record.duration = end_ts_ - first_ts_;
    fill_direction(record, dirs_[0], true);
    fill_direction(record, dirs_[1], false);
    return record;
}

FlowAggregator::FlowAggregator(double interval) : interval_(interval) {
    if (!(interval > 0.0)) throw std::invalid_argument("flow interval must be positive");
}

std::optional<FlowRecord> FlowAggregator::add(const DecodedPacket& pkt) {
    ++stats_.packets_in;
    if (!capture_t0_) capture_t0_ = pkt.timestamp;

    if (!saw_packet_) {
        last_ts_ = pkt.timestamp;
        saw_packet_ = true;
    } else if (pkt.timestamp < last_ts_ - kJitterTolerance) {
        ++stats_.time_regressions;
        log_warn("flow engine: timestamp regressed by %.6f s, packet processed as-is",
                 last_ts_ - pkt.timestamp);
    }
    last_ts_ = std::max(last_ts_, pkt.timestamp);

    if (pkt.ether_kind == EtherKind::NonProtocol) {
        ++stats_.discarded_non_protocol;
        return std::nullopt;
    }
    ++stats_.aggregated_packets;

    FlowKey key = canonical_flow_key(pkt);
    const FlowDirection dir = flow_direction(pkt, key);

    std::optional<FlowRecord> flushed;
    auto it = index_.find(key);
    if (it == index_.end()) {
        index_.emplace(key, slots_.size());
        slots_.emplace_back(std::move(key), pkt.timestamp);
        slots_.back().add(pkt, dir);
        return flushed;
    }

    FlowAccumulator& acc = slots_[it->second];
    if (pkt.timestamp - acc.first_ts() > interval_) {
        flushed = acc.finalize(*capture_t0_);
        ++stats_.flows_emitted;
        acc = FlowAccumulator(std::move(key), pkt.timestamp);
    }
    acc.add(pkt, dir);
    return flushed;
}

std::vector<FlowRecord> FlowAggregator::finish() {
    std::vector<FlowRecord> out;
    out.reserve(slots_.size());
    const double t0 = capture_t0_.value_or(0.0);
    for (const FlowAccumulator& acc : slots_) {
        out.push_back(acc.finalize(t0));
        ++stats_.flows_emitted;
    }
    slots_.clear();
    index_.clear();
    return out;
}

std::vector<FlowRecord> generate_flows(std::span<const DecodedPacket> packets, double interval,
                                       FlowEngineStats* stats_out) {
    FlowAggregator aggregator(interval);
    std::vector<FlowRecord> flows;
    for (const DecodedPacket& pkt : packets) {
        if (auto flushed = aggregator.add(pkt)) flows.push_back(std::move(*flushed));
    }
    auto rest = aggregator.finish();
    flows.insert(flows.end(), std::make_move_iterator(rest.begin()),
                 std::make_move_iterator(rest.end()));
    if (stats_out != nullptr) *stats_out = aggregator.stats();
    return flows;
}

}  // namespace flowids
