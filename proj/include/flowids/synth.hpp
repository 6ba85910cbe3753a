#pragma once

// Deterministic desk-scale trace generator: benign request/response polling
// on port 502 shaped like HMI/PLC chatter, plus attack-shaped phases
// (ARP-sweep ip-scan, SYN port-scan, connection-flood ddos, replayed-payload
// bursts, ARP-poison mitm). Emits classic pcap bytes, a ground-truth manifest
// and a matching attack log. Identical scripts yield identical bytes.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "flowids/packet.hpp"

namespace flowids {

struct SynthError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Endpoint {
    std::string name;
    Ipv4Addr ip;
    MacAddr mac;
};

struct PollerSpec {
    std::string client;  // endpoint names
    std::string server;
    double rate_hz = 5.0;
};

struct AttackPhase {
    std::string type;  // ip-scan | port-scan | replay | ddos | mitm
    double start = 0.0;  // seconds relative to trace start
    double end = 0.0;
    double intensity = 1.0;
};

struct TraceScript {
    std::uint64_t seed = 1;
    double duration = 60.0;
    double start_time = 1660000000.0;  // epoch seconds of the first instant
    double interval = 0.5;             // flow grouping used by the manifest
    bool allow_overlap = false;
    std::vector<Endpoint> endpoints;  // empty -> default topology
    std::vector<PollerSpec> pollers;  // empty -> default pollers
    std::vector<AttackPhase> phases;

    static TraceScript with_defaults();
    const Endpoint& endpoint(const std::string& name) const;  // throws SynthError
};

const std::vector<Endpoint>& default_topology();
const std::vector<PollerSpec>& default_pollers();

struct ManifestPhase {
    std::string name;  // "benign" or "<type>-<n>"
    std::string type;
    double start = 0.0;  // absolute epoch seconds
    double end = 0.0;
    double intensity = 1.0;
    std::uint64_t packets = 0;  // frames generated by this phase
};

struct ManifestFlow {
    std::string s_address;
    std::string r_address;
    std::string protocol;
    double start = 0.0;
    double end = 0.0;
    std::uint64_t packets = 0;
    std::string it_label = "normal";
    std::string nst_label = "normal";
};

struct TraceManifest {
    std::uint64_t total_packets = 0;
    double start_time = 0.0;
    double duration = 0.0;
    double interval = 0.5;
    std::vector<ManifestPhase> phases;  // phases[0] is benign
    std::vector<ManifestFlow> flows;

    std::string to_json() const;
    static TraceManifest from_json(const std::string& text);
};

struct SynthResult {
    std::vector<std::uint8_t> pcap;
    TraceManifest manifest;
};

SynthResult synth_trace(const TraceScript& script);

// Attack log CSV (one row per attack phase) on the same clock as the trace.
std::string synth_attack_log(const TraceScript& script);

// Plain-text script files (TOML subset: `key = value`, [[endpoint]],
// [[poller]] and [[phase]] tables, # comments).
TraceScript parse_trace_script(const std::string& text);
TraceScript load_trace_script(const std::string& path);

}  // namespace flowids
