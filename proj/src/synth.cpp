#include "flowids/synth.hpp"

#include <algorithm>
#include <cmath>

#include <nlohmann/json.hpp>

#include "flowids/attack_log.hpp"
#include "flowids/csv.hpp"
#include "flowids/frames.hpp"
#include "flowids/pcap_io.hpp"
#include "flowids/rng.hpp"

namespace flowids {

using nlohmann::json;

const std::vector<Endpoint>& default_topology() {
    static const std::vector<Endpoint> topology = {
        {"plc1", *Ipv4Addr::parse("192.168.0.11"), *MacAddr::parse("02:42:c0:a8:00:0b")},
        {"plc2", *Ipv4Addr::parse("192.168.0.12"), *MacAddr::parse("02:42:c0:a8:00:0c")},
        {"hmi1", *Ipv4Addr::parse("192.168.0.21"), *MacAddr::parse("02:42:c0:a8:00:15")},
        {"hmi2", *Ipv4Addr::parse("192.168.0.22"), *MacAddr::parse("02:42:c0:a8:00:16")},
        {"hmi3", *Ipv4Addr::parse("192.168.0.23"), *MacAddr::parse("02:42:c0:a8:00:17")},
        {"attacker", *Ipv4Addr::parse("192.168.0.41"), *MacAddr::parse("02:42:c0:a8:00:29")},
    };
    return topology;
}

const std::vector<PollerSpec>& default_pollers() {
    static const std::vector<PollerSpec> pollers = {
        {"hmi1", "plc1", 5.0}, {"hmi1", "plc2", 5.0}, {"hmi2", "plc1", 2.0},
        {"hmi3", "plc2", 2.0}, {"plc2", "plc1", 4.0},
    };
    return pollers;
}

TraceScript TraceScript::with_defaults() {
    TraceScript script;
    script.endpoints = default_topology();
    script.pollers = default_pollers();
    return script;
}

const Endpoint& TraceScript::endpoint(const std::string& name) const {
    for (const Endpoint& ep : endpoints) {
        if (ep.name == name) return ep;
    }
    throw SynthError("script references unknown endpoint '" + name + "'");
}

namespace {

constexpr std::uint16_t kModbusPort = 502;

// microsecond grid keeps generated, written and re-read timestamps identical
std::uint64_t to_us(double seconds) {
    return static_cast<std::uint64_t>(std::llround(seconds * 1e6));
}

double us_to_seconds(std::uint64_t us) {
    return static_cast<double>(us / 1000000ULL) + static_cast<double>(us % 1000000ULL) * 1e-6;
}

struct Emission {
    std::uint64_t ts_us = 0;
    std::uint32_t stream = 0;
    std::uint32_t seq_in_stream = 0;
    std::size_t phase = 0;  // manifest phase index (0 = benign)
    // flow identity, kept separate from the bytes so the manifest does not
    // depend on the decode path
    bool is_arp = false;
    Ipv4Addr src_ip, dst_ip;
    MacAddr src_mac, dst_mac;
    std::vector<std::uint8_t> frame;
};

class TraceBuilder {
public:
    explicit TraceBuilder(const TraceScript& script) : script_(script) {}

    SynthResult build();

private:
    struct TcpSession {
        const Endpoint* client;
        const Endpoint* server;
        std::uint16_t client_port = 0;
        std::uint32_t client_seq = 0;
        std::uint32_t server_seq = 0;
        bool established = false;
    };

    class Stream {
    public:
        Stream(TraceBuilder& builder, std::uint32_t id, std::size_t phase)
            : builder_(builder), id_(id), phase_(phase),
              rng_(stream_seed(builder.script_.seed, id)) {}

        Rng& rng() { return rng_; }

        void emit_tcp(double ts, const Endpoint& src, const Endpoint& dst,
                      std::uint16_t src_port, std::uint16_t dst_port, std::uint32_t seq,
                      std::uint32_t ack, std::uint8_t flags, std::uint16_t payload_len,
                      std::uint16_t window) {
            TcpFrameSpec spec;
            spec.src_mac = src.mac;
            spec.dst_mac = dst.mac;
            spec.src_ip = src.ip;
            spec.dst_ip = dst.ip;
            spec.src_port = src_port;
            spec.dst_port = dst_port;
            spec.seq = seq;
            spec.ack = ack;
            spec.flags = flags;
            spec.window = window;
            spec.payload_len = payload_len;
            spec.payload_fill = static_cast<std::uint8_t>(rng_.bounded(256));
            push(ts, false, src.ip, dst.ip, src.mac, dst.mac, build_tcp_frame(spec));
        }

        // mitm shadow frames: same IPs, link layer through the attacker
        void emit_tcp_via(double ts, const Endpoint& src, const Endpoint& dst, MacAddr link_src,
                          MacAddr link_dst, std::uint16_t src_port, std::uint16_t dst_port,
                          std::uint32_t seq, std::uint32_t ack, std::uint8_t flags,
                          std::uint16_t payload_len, std::uint16_t window) {
            TcpFrameSpec spec;
            spec.src_mac = link_src;
            spec.dst_mac = link_dst;
            spec.src_ip = src.ip;
            spec.dst_ip = dst.ip;
            spec.src_port = src_port;
            spec.dst_port = dst_port;
            spec.seq = seq;
            spec.ack = ack;
            spec.flags = flags;
            spec.window = window;
            spec.payload_len = payload_len;
            push(ts, false, src.ip, dst.ip, link_src, link_dst, build_tcp_frame(spec));
        }

        void emit_arp(double ts, std::uint16_t op, MacAddr link_src, MacAddr link_dst,
                      MacAddr sender_mac, Ipv4Addr sender_ip, MacAddr target_mac,
                      Ipv4Addr target_ip) {
            ArpFrameSpec spec;
            spec.src_mac = link_src;
            spec.dst_mac = link_dst;
            spec.op = op;
            spec.sender_mac = sender_mac;
            spec.sender_ip = sender_ip;
            spec.target_mac = target_mac;
            spec.target_ip = target_ip;
            push(ts, true, sender_ip, target_ip, link_src, link_dst, build_arp_frame(spec));
        }

    private:
        void push(double ts, bool is_arp, Ipv4Addr src_ip, Ipv4Addr dst_ip, MacAddr src_mac,
                  MacAddr dst_mac, std::vector<std::uint8_t> frame) {
            Emission e;
            e.ts_us = to_us(ts);
            e.stream = id_;
            e.seq_in_stream = next_seq_++;
            e.phase = phase_;
            e.is_arp = is_arp;
            e.src_ip = src_ip;
            e.dst_ip = dst_ip;
            e.src_mac = src_mac;
            e.dst_mac = dst_mac;
            e.frame = std::move(frame);
            builder_.emissions_.push_back(std::move(e));
        }

        TraceBuilder& builder_;
        std::uint32_t id_;
        std::size_t phase_;
        Rng rng_;
        std::uint32_t next_seq_ = 0;
    };

    void validate();
    void generate_benign();
    void generate_phase(std::size_t phase_index, const AttackPhase& phase, std::uint32_t stream_id);
    void handshake(Stream& stream, TcpSession& session, double ts, double rtt);
    void request_response(Stream& stream, TcpSession& session, double ts, std::uint16_t req_len,
                          std::uint16_t resp_len, double server_delay, bool client_acks);
    TraceManifest finalize_manifest();

    void ip_scan(Stream& stream, const AttackPhase& phase);
    void port_scan(Stream& stream, const AttackPhase& phase);
    void ddos(Stream& stream, const AttackPhase& phase);
    void replay(Stream& stream, const AttackPhase& phase);
    void mitm(Stream& stream, const AttackPhase& phase);

    const TraceScript& script_;
    std::vector<Emission> emissions_;
    double t0_ = 0.0;  // absolute trace start
};

void TraceBuilder::validate() {
    if (script_.duration < 0.0) throw SynthError("script duration must be >= 0");
    if (!(script_.interval > 0.0)) throw SynthError("script interval must be > 0");
    std::vector<const AttackPhase*> ordered;
    for (const AttackPhase& phase : script_.phases) {
        if (phase.start < 0.0 || phase.end > script_.duration || phase.end < phase.start)
            throw SynthError("attack phase '" + phase.type + "' window [" +
                             format_float6(phase.start) + ", " + format_float6(phase.end) +
                             "] is outside the trace duration");
        static const char* known[] = {"ip-scan", "port-scan", "replay", "ddos", "mitm"};
        if (std::find(std::begin(known), std::end(known), phase.type) == std::end(known))
            throw SynthError("unknown attack phase type '" + phase.type + "'");
        ordered.push_back(&phase);
    }
    std::sort(ordered.begin(), ordered.end(),
              [](const AttackPhase* a, const AttackPhase* b) { return a->start < b->start; });
    for (std::size_t i = 1; i < ordered.size(); ++i) {
        if (ordered[i]->start < ordered[i - 1]->end && !script_.allow_overlap)
            throw SynthError("attack phases '" + ordered[i - 1]->type + "' and '" +
                             ordered[i]->type +
                             "' overlap; pass allow_overlap to permit that");
    }
    if (!script_.phases.empty()) script_.endpoint("attacker");
    for (const PollerSpec& poller : script_.pollers) {
        script_.endpoint(poller.client);
        script_.endpoint(poller.server);
        if (!(poller.rate_hz > 0.0)) throw SynthError("poller rate must be > 0");
    }
}

void TraceBuilder::handshake(Stream& stream, TcpSession& session, double ts, double rtt) {
    const std::uint32_t isn_c = static_cast<std::uint32_t>(stream.rng().next_u64());
    const std::uint32_t isn_s = static_cast<std::uint32_t>(stream.rng().next_u64());
    session.client_seq = isn_c + 1;
    session.server_seq = isn_s + 1;
    stream.emit_tcp(ts, *session.client, *session.server, session.client_port, kModbusPort, isn_c,
                    0, tcp_flag::Syn, 0, 64240);
    stream.emit_tcp(ts + rtt / 2.0, *session.server, *session.client, kModbusPort,
                    session.client_port, isn_s, isn_c + 1, tcp_flag::Syn | tcp_flag::Ack, 0,
                    65160);
    stream.emit_tcp(ts + rtt, *session.client, *session.server, session.client_port, kModbusPort,
                    session.client_seq, session.server_seq, tcp_flag::Ack, 0, 64240);
    session.established = true;
}

void TraceBuilder::request_response(Stream& stream, TcpSession& session, double ts,
                                    std::uint16_t req_len, std::uint16_t resp_len,
                                    double server_delay, bool client_acks) {
    stream.emit_tcp(ts, *session.client, *session.server, session.client_port, kModbusPort,
                    session.client_seq, session.server_seq,
                    tcp_flag::Psh | tcp_flag::Ack, req_len, 64240);
    session.client_seq += req_len;
    stream.emit_tcp(ts + server_delay, *session.server, *session.client, kModbusPort,
                    session.client_port, session.server_seq, session.client_seq,
                    tcp_flag::Psh | tcp_flag::Ack, resp_len, 65160);
    session.server_seq += resp_len;
    if (client_acks) {
        stream.emit_tcp(ts + server_delay + 0.0005 + stream.rng().uniform01() * 0.0015,
                        *session.client, *session.server, session.client_port, kModbusPort,
                        session.client_seq, session.server_seq, tcp_flag::Ack, 0, 64240);
    }
}

void TraceBuilder::generate_benign() {
    std::uint32_t stream_id = 100;
    for (const PollerSpec& poller : script_.pollers) {
        Stream stream(*this, stream_id++, 0);
        TcpSession session;
        session.client = &script_.endpoint(poller.client);
        session.server = &script_.endpoint(poller.server);
        session.client_port =
            static_cast<std::uint16_t>(49152 + stream.rng().bounded(16000));

        const double session_start = 0.02 + stream.rng().uniform01() * 0.2;
        if (session_start >= script_.duration) continue;
        handshake(stream, session, t0_ + session_start,
                  0.0008 + stream.rng().uniform01() * 0.0012);

        const double period = 1.0 / poller.rate_hz;
        double tick = session_start + period * (0.5 + stream.rng().uniform01() * 0.5);
        while (tick < script_.duration) {
            // Modbus-shaped sizes: 12-byte read request, variable response
            const auto resp_len = static_cast<std::uint16_t>(11 + stream.rng().bounded(15));
            const double server_delay = 0.001 + stream.rng().uniform01() * 0.005;
            if (tick + server_delay < script_.duration) {
                request_response(stream, session, t0_ + tick, 12, resp_len, server_delay, true);
            }
            tick += period * (0.9 + stream.rng().uniform01() * 0.2);
        }
    }
}

void TraceBuilder::ip_scan(Stream& stream, const AttackPhase& phase) {
    const Endpoint& attacker = script_.endpoint("attacker");
    const double rate = 40.0 * std::max(phase.intensity, 0.1);
    const double step = 1.0 / rate;
    const MacAddr zero_mac{};
    double ts = phase.start;
    std::uint32_t sweep_ip = 1;
    while (ts < phase.end) {
        Ipv4Addr target{(attacker.ip.value & 0xffffff00u) | (sweep_ip & 0xff)};
        stream.emit_arp(t0_ + ts, 1, attacker.mac, MacAddr::broadcast(), attacker.mac, attacker.ip,
                        zero_mac, target);
        for (const Endpoint& ep : script_.endpoints) {
            if (ep.ip == target && ep.name != "attacker") {
                stream.emit_arp(t0_ + ts + 0.0003 + stream.rng().uniform01() * 0.0009, 2, ep.mac,
                                attacker.mac, ep.mac, ep.ip, attacker.mac, attacker.ip);
            }
        }
        sweep_ip = sweep_ip % 62 + 1;  // sweep .1 .. .62 repeatedly
        ts += step * (0.9 + stream.rng().uniform01() * 0.2);
    }
}

void TraceBuilder::port_scan(Stream& stream, const AttackPhase& phase) {
    const Endpoint& attacker = script_.endpoint("attacker");
    std::vector<const Endpoint*> victims;
    for (const Endpoint& ep : script_.endpoints) {
        if (ep.name != "attacker") victims.push_back(&ep);
    }
    if (victims.empty()) return;

    const double rate = 60.0 * std::max(phase.intensity, 0.1);
    const double step = 1.0 / rate;
    double ts = phase.start;
    std::size_t victim_index = 0;
    std::uint16_t port = 1;
    std::uint16_t src_port = 40000;
    while (ts < phase.end) {
        const Endpoint& victim = *victims[victim_index % victims.size()];
        const std::uint32_t isn = static_cast<std::uint32_t>(stream.rng().next_u64());
        const double rtt = 0.0004 + stream.rng().uniform01() * 0.0012;
        stream.emit_tcp(t0_ + ts, attacker, victim, src_port, port, isn, 0, tcp_flag::Syn, 0,
                        1024);
        if (port == kModbusPort) {
            const std::uint32_t isn_v = static_cast<std::uint32_t>(stream.rng().next_u64());
            stream.emit_tcp(t0_ + ts + rtt, victim, attacker, port, src_port, isn_v, isn + 1,
                            tcp_flag::Syn | tcp_flag::Ack, 0, 65160);
            stream.emit_tcp(t0_ + ts + rtt * 1.5, attacker, victim, src_port, port, isn + 1, 0,
                            tcp_flag::Rst, 0, 0);
        } else {
            stream.emit_tcp(t0_ + ts + rtt, victim, attacker, port, src_port, 0, isn + 1,
                            tcp_flag::Rst | tcp_flag::Ack, 0, 0);
        }
        port = static_cast<std::uint16_t>(port + 37);
        if (port > 1024 && port != kModbusPort) {
            port = static_cast<std::uint16_t>(port % 1024 + 1);
            ++victim_index;
        }
        if (stream.rng().bounded(24) == 0) port = kModbusPort;  // hit the open port sometimes
        src_port = static_cast<std::uint16_t>(40000 + (src_port - 40000 + 1) % 8000);
        ts += step * (0.9 + stream.rng().uniform01() * 0.2);
    }
}

void TraceBuilder::ddos(Stream& stream, const AttackPhase& phase) {
    const Endpoint& attacker = script_.endpoint("attacker");
    std::vector<const Endpoint*> targets;
    for (const Endpoint& ep : script_.endpoints) {
        if (ep.name.rfind("plc", 0) == 0) targets.push_back(&ep);
    }
    if (targets.empty()) {
        for (const Endpoint& ep : script_.endpoints)
            if (ep.name != "attacker") targets.push_back(&ep);
    }
    if (targets.empty()) return;

    const double rate = 50.0 * std::max(phase.intensity, 0.1);  // connections per second
    const double step = 1.0 / rate;
    double ts = phase.start;
    std::uint16_t src_port = 30000;
    std::size_t target_index = 0;
    while (ts < phase.end) {
        const Endpoint& target = *targets[target_index % targets.size()];
        TcpSession session;
        session.client = &attacker;
        session.server = &target;
        session.client_port = src_port;
        const double rtt = 0.0006 + stream.rng().uniform01() * 0.001;
        handshake(stream, session, t0_ + ts, rtt);
        request_response(stream, session, t0_ + ts + rtt * 1.5, 12, 11,
                         0.0008 + stream.rng().uniform01() * 0.002, false);
        stream.emit_tcp(t0_ + ts + rtt * 1.5 + 0.004, attacker, target, src_port, kModbusPort,
                        session.client_seq, session.server_seq, tcp_flag::Rst, 0, 0);
        src_port = static_cast<std::uint16_t>(30000 + (src_port - 30000 + 1) % 20000);
        ++target_index;
        ts += step;
    }
}

void TraceBuilder::replay(Stream& stream, const AttackPhase& phase) {
    const Endpoint& attacker = script_.endpoint("attacker");
    const Endpoint* target = nullptr;
    for (const Endpoint& ep : script_.endpoints) {
        if (ep.name.rfind("plc", 0) == 0) {
            target = &ep;
            break;
        }
    }
    if (target == nullptr) return;

    const double request_rate = 30.0 * std::max(phase.intensity, 0.1);
    double session_start = phase.start;
    while (session_start < phase.end) {
        TcpSession session;
        session.client = &attacker;
        session.server = target;
        session.client_port = static_cast<std::uint16_t>(45000 + stream.rng().bounded(8000));
        handshake(stream, session, t0_ + session_start,
                  0.0008 + stream.rng().uniform01() * 0.0012);
        double tick = session_start + 0.005;
        const double session_end = std::min(session_start + 5.0, phase.end);
        while (tick < session_end) {
            // replayed captured payloads ride fresh connections at a fixed pace
            request_response(stream, session, t0_ + tick, 12,
                             static_cast<std::uint16_t>(11 + stream.rng().bounded(15)),
                             0.001 + stream.rng().uniform01() * 0.004, true);
            tick += 1.0 / request_rate;
        }
        session_start = session_end + 0.01;
    }
}

void TraceBuilder::mitm(Stream& stream, const AttackPhase& phase) {
    const Endpoint& attacker = script_.endpoint("attacker");
    if (script_.pollers.empty()) return;
    const Endpoint& victim_a = script_.endpoint(script_.pollers.front().client);
    const Endpoint& victim_b = script_.endpoint(script_.pollers.front().server);

    // periodic ARP poisoning, both victims
    double poison_ts = phase.start;
    while (poison_ts < phase.end) {
        stream.emit_arp(t0_ + poison_ts, 2, attacker.mac, victim_a.mac, attacker.mac, victim_b.ip,
                        victim_a.mac, victim_a.ip);
        stream.emit_arp(t0_ + poison_ts + 0.0005, 2, attacker.mac, victim_b.mac, attacker.mac,
                        victim_a.ip, victim_b.mac, victim_b.ip);
        poison_ts += 1.0;
    }

    // the victim pair's exchange rides through the attacker: each leg shows up
    // twice at the capture point (victim -> attacker MAC, attacker -> victim)
    const double rate = std::max(script_.pollers.front().rate_hz, 1.0);
    TcpSession session;
    session.client = &victim_a;
    session.server = &victim_b;
    session.client_port = static_cast<std::uint16_t>(52000 + stream.rng().bounded(4000));
    std::uint32_t client_seq = static_cast<std::uint32_t>(stream.rng().next_u64());
    std::uint32_t server_seq = static_cast<std::uint32_t>(stream.rng().next_u64());
    double tick = phase.start + 0.05;
    while (tick < phase.end) {
        const auto req_len = static_cast<std::uint16_t>(12);
        const auto resp_len = static_cast<std::uint16_t>(11 + stream.rng().bounded(15));
        const double hop = 0.0004 + stream.rng().uniform01() * 0.0008;
        const double server_delay = 0.001 + stream.rng().uniform01() * 0.004;
        // request: victim_a -> attacker -> victim_b
        stream.emit_tcp_via(t0_ + tick, victim_a, victim_b, victim_a.mac, attacker.mac,
                            session.client_port, kModbusPort, client_seq, server_seq,
                            tcp_flag::Psh | tcp_flag::Ack, req_len, 64240);
        stream.emit_tcp_via(t0_ + tick + hop, victim_a, victim_b, attacker.mac, victim_b.mac,
                            session.client_port, kModbusPort, client_seq, server_seq,
                            tcp_flag::Psh | tcp_flag::Ack, req_len, 64240);
        client_seq += req_len;
        // modified response: victim_b -> attacker -> victim_a
        stream.emit_tcp_via(t0_ + tick + server_delay, victim_b, victim_a, victim_b.mac,
                            attacker.mac, kModbusPort, session.client_port, server_seq, client_seq,
                            tcp_flag::Psh | tcp_flag::Ack, resp_len, 65160);
        stream.emit_tcp_via(t0_ + tick + server_delay + hop, victim_b, victim_a, attacker.mac,
                            victim_a.mac, kModbusPort, session.client_port, server_seq, client_seq,
                            tcp_flag::Psh | tcp_flag::Ack, resp_len, 65160);
        server_seq += resp_len;
        tick += 1.0 / rate;
    }
}

void TraceBuilder::generate_phase(std::size_t phase_index, const AttackPhase& phase,
                                  std::uint32_t stream_id) {
    Stream stream(*this, stream_id, phase_index);
    if (phase.type == "ip-scan") {
        ip_scan(stream, phase);
    } else if (phase.type == "port-scan") {
        port_scan(stream, phase);
    } else if (phase.type == "ddos") {
        ddos(stream, phase);
    } else if (phase.type == "replay") {
        replay(stream, phase);
    } else if (phase.type == "mitm") {
        mitm(stream, phase);
    }
}

TraceManifest TraceBuilder::finalize_manifest() {
    TraceManifest manifest;
    manifest.start_time = t0_;
    manifest.duration = script_.duration;
    manifest.interval = script_.interval;
    manifest.total_packets = emissions_.size();

    ManifestPhase benign;
    benign.name = "benign";
    benign.type = "benign";
    benign.start = t0_;
    benign.end = t0_ + script_.duration;
    manifest.phases.push_back(benign);
    for (std::size_t i = 0; i < script_.phases.size(); ++i) {
        const AttackPhase& phase = script_.phases[i];
        ManifestPhase mp;
        mp.name = phase.type + "-" + std::to_string(i + 1);
        mp.type = phase.type;
        mp.start = t0_ + phase.start;
        mp.end = t0_ + phase.end;
        mp.intensity = phase.intensity;
        manifest.phases.push_back(mp);
    }
    for (const Emission& e : emissions_) ++manifest.phases[e.phase].packets;

    // flow grouping mirrors the lazy-flush rule on the emission records
    struct Group {
        double start = 0.0;
        double end = 0.0;
        std::uint64_t packets = 0;
    };
    struct KeyedGroup {
        std::string s_addr, r_addr, protocol;
        Group group;
    };
    std::vector<KeyedGroup> open;
    auto close_group = [&](const KeyedGroup& kg) {
        ManifestFlow flow;
        flow.s_address = kg.s_addr;
        flow.r_address = kg.r_addr;
        flow.protocol = kg.protocol;
        flow.start = kg.group.start;
        flow.end = kg.group.end;
        flow.packets = kg.group.packets;
        // IT: window overlap, latest start wins; NST: additionally the
        // attacker address must be one of the flow's addresses
        const Endpoint* attacker = nullptr;
        for (const Endpoint& ep : script_.endpoints)
            if (ep.name == "attacker") attacker = &ep;
        const ManifestPhase* it_pick = nullptr;
        const ManifestPhase* nst_pick = nullptr;
        for (std::size_t p = 1; p < manifest.phases.size(); ++p) {
            const ManifestPhase& mp = manifest.phases[p];
            if (!(flow.start <= mp.end && mp.start <= flow.end)) continue;
            if (it_pick == nullptr || mp.start > it_pick->start) it_pick = &mp;
            if (attacker != nullptr) {
                const std::string addr = kg.protocol == "ARP" ? attacker->mac.to_string()
                                                              : attacker->ip.to_string();
                if (kg.s_addr == addr || kg.r_addr == addr) {
                    if (nst_pick == nullptr || mp.start > nst_pick->start) nst_pick = &mp;
                }
            }
        }
        if (it_pick != nullptr) flow.it_label = it_pick->type;
        if (nst_pick != nullptr) flow.nst_label = nst_pick->type;
        manifest.flows.push_back(std::move(flow));
    };

    for (const Emission& e : emissions_) {
        const double ts = us_to_seconds(e.ts_us);
        std::string s_addr;
        std::string r_addr;
        std::string protocol;
        if (e.is_arp) {
            s_addr = std::min(e.src_mac, e.dst_mac).to_string();
            r_addr = std::max(e.src_mac, e.dst_mac).to_string();
            protocol = "ARP";
        } else {
            s_addr = std::min(e.src_ip, e.dst_ip).to_string();
            r_addr = std::max(e.src_ip, e.dst_ip).to_string();
            protocol = "IPV4-TCP";
        }
        KeyedGroup* found = nullptr;
        for (KeyedGroup& kg : open) {
            if (kg.s_addr == s_addr && kg.r_addr == r_addr && kg.protocol == protocol) {
                found = &kg;
                break;
            }
        }
        if (found == nullptr) {
            open.push_back({s_addr, r_addr, protocol, {ts, ts, 0}});
            found = &open.back();
        } else if (ts - found->group.start > script_.interval) {
            close_group(*found);
            found->group = {ts, ts, 0};
        }
        found->group.end = std::max(found->group.end, ts);
        ++found->group.packets;
    }
    for (const KeyedGroup& kg : open) close_group(kg);
    return manifest;
}

SynthResult TraceBuilder::build() {
    validate();
    t0_ = script_.start_time;

    generate_benign();
    for (std::size_t i = 0; i < script_.phases.size(); ++i)
        generate_phase(i + 1, script_.phases[i], static_cast<std::uint32_t>(200 + i));

    std::sort(emissions_.begin(), emissions_.end(), [](const Emission& a, const Emission& b) {
        if (a.ts_us != b.ts_us) return a.ts_us < b.ts_us;
        if (a.stream != b.stream) return a.stream < b.stream;
        return a.seq_in_stream < b.seq_in_stream;
    });

    SynthResult result;
    result.manifest = finalize_manifest();
    PcapWriter writer;
    for (const Emission& e : emissions_) writer.add(us_to_seconds(e.ts_us), e.frame);
    result.pcap = writer.bytes();
    return result;
}

}  // namespace

SynthResult synth_trace(const TraceScript& script) {
    TraceBuilder builder(script);
    return builder.build();
}

std::string synth_attack_log(const TraceScript& script) {
    std::string out = attack_log_header();
    out.push_back('\n');
    if (script.phases.empty()) return out;
    const Endpoint& attacker = script.endpoint("attacker");
    for (const AttackPhase& phase : script.phases) {
        AttackLogEntry entry;
        entry.attack = phase.type;
        entry.start_ts = script.start_time + phase.start;
        entry.end_ts = script.start_time + phase.end;
        entry.attacker_ip = attacker.ip.to_string();
        entry.attacker_mac = attacker.mac.to_string();
        entry.extra = "intensity " + format_float6(phase.intensity);
        out += attack_log_row(entry);
        out.push_back('\n');
    }
    return out;
}

std::string TraceManifest::to_json() const {
    json doc;
    doc["format"] = "flowids-manifest";
    doc["version"] = 1;
    doc["total_packets"] = total_packets;
    doc["start_time"] = start_time;
    doc["duration"] = duration;
    doc["interval"] = interval;
    doc["phases"] = json::array();
    for (const ManifestPhase& phase : phases) {
        doc["phases"].push_back({{"name", phase.name},
                                 {"type", phase.type},
                                 {"start", phase.start},
                                 {"end", phase.end},
                                 {"intensity", phase.intensity},
                                 {"packets", phase.packets}});
    }
    doc["flows"] = json::array();
    for (const ManifestFlow& flow : flows) {
        doc["flows"].push_back({{"sAddress", flow.s_address},
                                {"rAddress", flow.r_address},
                                {"protocol", flow.protocol},
                                {"start", flow.start},
                                {"end", flow.end},
                                {"packets", flow.packets},
                                {"it", flow.it_label},
                                {"nst", flow.nst_label}});
    }
    return doc.dump(2);
}

TraceManifest TraceManifest::from_json(const std::string& text) {
    const json doc = json::parse(text);
    TraceManifest manifest;
    manifest.total_packets = doc.at("total_packets").get<std::uint64_t>();
    manifest.start_time = doc.at("start_time").get<double>();
    manifest.duration = doc.at("duration").get<double>();
    manifest.interval = doc.at("interval").get<double>();
    for (const json& item : doc.at("phases")) {
        ManifestPhase phase;
        phase.name = item.at("name").get<std::string>();
        phase.type = item.at("type").get<std::string>();
        phase.start = item.at("start").get<double>();
        phase.end = item.at("end").get<double>();
        phase.intensity = item.at("intensity").get<double>();
        phase.packets = item.at("packets").get<std::uint64_t>();
        manifest.phases.push_back(std::move(phase));
    }
    for (const json& item : doc.at("flows")) {
        ManifestFlow flow;
        flow.s_address = item.at("sAddress").get<std::string>();
        flow.r_address = item.at("rAddress").get<std::string>();
        flow.protocol = item.at("protocol").get<std::string>();
        flow.start = item.at("start").get<double>();
        flow.end = item.at("end").get<double>();
        flow.packets = item.at("packets").get<std::uint64_t>();
        flow.it_label = item.at("it").get<std::string>();
        flow.nst_label = item.at("nst").get<std::string>();
        manifest.flows.push_back(std::move(flow));
    }
    return manifest;
}

}  // namespace flowids
