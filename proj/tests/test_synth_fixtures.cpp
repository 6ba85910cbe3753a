#include <doctest.h>

#include <algorithm>
#include <map>

#include "flowids/flow.hpp"
#include "flowids/io_util.hpp"
#include "flowids/labeler.hpp"
#include "flowids/pcap_io.hpp"
#include "flowids/synth.hpp"
#include "temp_dir.hpp"

using namespace flowids;
using flowids::testing::TempDir;

namespace {

std::vector<DecodedPacket> decode_all(const std::vector<std::uint8_t>& pcap, TempDir& dir,
                                      PcapReadStats* stats = nullptr) {
    const std::string path = dir.file("trace.pcap");
    write_file_atomic(path, pcap);
    return read_pcap_file(path, stats);
}

TraceScript benign_script(std::uint64_t seed, double duration) {
    TraceScript script = TraceScript::with_defaults();
    script.seed = seed;
    script.duration = duration;
    script.pollers = {{"hmi1", "plc1", 5.0}, {"hmi2", "plc2", 5.0}};
    return script;
}

}  // namespace

TEST_CASE("zero-duration script yields a header-only pcap and an empty manifest") {
    TraceScript script = TraceScript::with_defaults();
    script.duration = 0.0;
    const SynthResult result = synth_trace(script);
    CHECK(result.pcap.size() == 24);
    CHECK(result.manifest.total_packets == 0);
    CHECK(result.manifest.flows.empty());
}

TEST_CASE("identical scripts yield identical bytes and manifests") {
    TraceScript script = benign_script(42, 8.0);
    script.phases = {{"ddos", 2.0, 5.0, 2.0}};
    const SynthResult a = synth_trace(script);
    const SynthResult b = synth_trace(script);
    CHECK(a.pcap == b.pcap);
    CHECK(a.manifest.to_json() == b.manifest.to_json());

    TraceScript other = script;
    other.seed = 43;
    const SynthResult c = synth_trace(other);
    CHECK(a.pcap != c.pcap);
}

TEST_CASE("manifest totals equal the decoded packet count with zero malformed frames") {
    TempDir dir("synth");
    const TraceScript script = benign_script(42, 10.0);
    const SynthResult result = synth_trace(script);

    PcapReadStats stats;
    const auto packets = decode_all(result.pcap, dir, &stats);
    CHECK(packets.size() == result.manifest.total_packets);
    CHECK(stats.malformed_frames == 0);
    CHECK(stats.skipped_records == 0);

    // every frame decodes to a keyed protocol
    for (const DecodedPacket& pkt : packets) CHECK(pkt.ether_kind != EtherKind::NonProtocol);
}

TEST_CASE("manifest flow grouping matches the flow engine exactly") {
    TempDir dir("synth");
    TraceScript script = benign_script(7, 12.0);
    script.phases = {{"ip-scan", 3.0, 5.0, 1.0}, {"replay", 7.0, 10.0, 1.0}};
    const SynthResult result = synth_trace(script);

    const auto packets = decode_all(result.pcap, dir);
    auto flows = generate_flows(packets, script.interval);
    REQUIRE(flows.size() == result.manifest.flows.size());

    auto flow_order = [](const FlowRecord& a, const FlowRecord& b) {
        return std::tie(a.start, a.s_address, a.r_address, a.protocol) <
               std::tie(b.start, b.s_address, b.r_address, b.protocol);
    };
    auto manifest_order = [](const ManifestFlow& a, const ManifestFlow& b) {
        return std::tie(a.start, a.s_address, a.r_address, a.protocol) <
               std::tie(b.start, b.s_address, b.r_address, b.protocol);
    };
    std::sort(flows.begin(), flows.end(), flow_order);
    auto expected = result.manifest.flows;
    std::sort(expected.begin(), expected.end(), manifest_order);

    for (std::size_t i = 0; i < flows.size(); ++i) {
        CHECK(flows[i].s_address == expected[i].s_address);
        CHECK(flows[i].r_address == expected[i].r_address);
        CHECK(flows[i].protocol == expected[i].protocol);
        CHECK(flows[i].start == expected[i].start);  // bit-equal through the pcap round trip
        CHECK(flows[i].end == expected[i].end);
        CHECK(flows[i].s_packets + flows[i].r_packets ==
              static_cast<std::int64_t>(expected[i].packets));
    }
}

TEST_CASE("labeler reproduces the manifest's IT and NST membership exactly") {
    TempDir dir("synth");
    TraceScript script = TraceScript::with_defaults();
    script.seed = 11;
    script.duration = 30.0;
    script.phases = {{"ip-scan", 2.0, 6.0, 1.0},
                     {"port-scan", 8.0, 12.0, 1.0},
                     {"ddos", 14.0, 18.0, 1.0},
                     {"replay", 20.0, 24.0, 1.0},
                     {"mitm", 25.0, 29.0, 1.0}};
    const SynthResult result = synth_trace(script);

    const auto packets = decode_all(result.pcap, dir);
    auto flows = generate_flows(packets, script.interval);

    const std::string log_csv = synth_attack_log(script);
    const auto log = parse_attack_log_text(log_csv, "synth");
    REQUIRE(log.errors.empty());
    REQUIRE(log.entries.size() == 5);
    label_flows(flows, log.entries);

    std::map<std::tuple<std::string, std::string, std::string, double>,
             std::pair<std::string, std::string>>
        expected;
    for (const ManifestFlow& flow : result.manifest.flows) {
        expected[{flow.s_address, flow.r_address, flow.protocol, flow.start}] = {
            flow.it_label, flow.nst_label};
    }
    REQUIRE(expected.size() == flows.size());

    std::size_t it_attacks = 0;
    for (const FlowRecord& flow : flows) {
        const auto it = expected.find({flow.s_address, flow.r_address, flow.protocol, flow.start});
        REQUIRE(it != expected.end());
        CHECK(flow.it_m == it->second.first);
        CHECK(flow.nst_m == it->second.second);
        CHECK(flow.nst_b <= flow.it_b);
        if (flow.it_b != 0) ++it_attacks;
    }
    CHECK(it_attacks > 0);

    // every attack type produced at least one NST-labeled flow
    std::map<std::string, int> nst_counts;
    for (const FlowRecord& flow : flows)
        if (flow.nst_b != 0) ++nst_counts[flow.nst_m];
    for (const char* type : {"ip-scan", "port-scan", "ddos", "replay", "mitm"})
        CHECK(nst_counts[type] > 0);
}

TEST_CASE("benign-only scripts label 100% normal") {
    TempDir dir("synth");
    const TraceScript script = benign_script(5, 6.0);
    const SynthResult result = synth_trace(script);
    const auto packets = decode_all(result.pcap, dir);
    auto flows = generate_flows(packets, script.interval);
    REQUIRE(!flows.empty());

    const auto log = parse_attack_log_text(synth_attack_log(script), "synth");
    CHECK(log.entries.empty());
    label_flows(flows, log.entries);
    for (const FlowRecord& flow : flows) {
        CHECK(flow.it_b == 0);
        CHECK(flow.nst_b == 0);
        CHECK(flow.it_m == "normal");
    }
    for (const ManifestFlow& flow : result.manifest.flows) {
        CHECK(flow.it_label == "normal");
        CHECK(flow.nst_label == "normal");
    }
}

TEST_CASE("ddos phase at intensity 10 pushes packet rate at least 5x the benign baseline") {
    TraceScript script = benign_script(9, 30.0);
    script.phases = {{"ddos", 10.0, 20.0, 10.0}};
    const SynthResult result = synth_trace(script);

    const ManifestPhase& benign = result.manifest.phases[0];
    const ManifestPhase& ddos = result.manifest.phases[1];
    REQUIRE(ddos.type == "ddos");
    const double benign_rate =
        static_cast<double>(benign.packets) / result.manifest.duration;
    const double ddos_rate = static_cast<double>(ddos.packets) / (ddos.end - ddos.start);
    CHECK(ddos_rate >= 5.0 * benign_rate);
}

TEST_CASE("attack log has one Table-6 row per phase") {
    TraceScript script = benign_script(3, 200.0);
    script.start_time = 1660000000.0;
    script.phases = {{"ddos", 100.0, 160.0, 1.0}};
    const std::string csv = synth_attack_log(script);
    const auto lines = split_lines(csv);
    REQUIRE(lines.size() == 2);
    CHECK(lines[0] == attack_log_header());
    CHECK(lines[1].find("ddos,1660000100,1660000160,192.168.0.41,02:42:c0:a8:00:29") == 0);

    script.phases.clear();
    const auto empty = split_lines(synth_attack_log(script));
    REQUIRE(empty.size() == 1);  // header only
}

TEST_CASE("overlapping phases error without the allow flag") {
    TraceScript script = benign_script(1, 30.0);
    script.phases = {{"ddos", 5.0, 15.0, 1.0}, {"replay", 10.0, 20.0, 1.0}};
    CHECK_THROWS_AS(synth_trace(script), SynthError);
    script.allow_overlap = true;
    CHECK_NOTHROW(synth_trace(script));
}

TEST_CASE("phases outside the duration or of unknown type are rejected") {
    TraceScript script = benign_script(1, 10.0);
    script.phases = {{"ddos", 5.0, 15.0, 1.0}};
    CHECK_THROWS_AS(synth_trace(script), SynthError);
    script.phases = {{"teleport", 1.0, 2.0, 1.0}};
    CHECK_THROWS_AS(synth_trace(script), SynthError);
}

TEST_CASE("manifest json round-trips") {
    TraceScript script = benign_script(13, 5.0);
    script.phases = {{"mitm", 1.0, 4.0, 2.0}};
    const SynthResult result = synth_trace(script);
    const TraceManifest reloaded = TraceManifest::from_json(result.manifest.to_json());
    CHECK(reloaded.total_packets == result.manifest.total_packets);
    CHECK(reloaded.flows.size() == result.manifest.flows.size());
    CHECK(reloaded.phases.size() == result.manifest.phases.size());
    CHECK(reloaded.to_json() == result.manifest.to_json());
}

TEST_CASE("script parser handles tables, comments and defaults") {
    const std::string text =
        "# synthetic capture\n"
        "seed = 99\n"
        "duration = 45.5\n"
        "start_time = 1700000000.0\n"
        "interval = 0.25\n"
        "\n"
        "[[phase]]\n"
        "type = \"ddos\"\n"
        "start = 10.0\n"
        "end = 20.0\n"
        "intensity = 3.0\n"
        "\n"
        "[[phase]]\n"
        "type = \"mitm\"\n"
        "start = 30\n"
        "end = 40\n";
    const TraceScript script = parse_trace_script(text);
    CHECK(script.seed == 99);
    CHECK(script.duration == 45.5);
    CHECK(script.interval == 0.25);
    REQUIRE(script.phases.size() == 2);
    CHECK(script.phases[0].type == "ddos");
    CHECK(script.phases[0].intensity == 3.0);
    CHECK(script.phases[1].type == "mitm");
    CHECK(script.phases[1].intensity == 1.0);
    // defaults kick in when no endpoint/poller tables are given
    CHECK(script.endpoints.size() == 6);
    CHECK(script.endpoint("attacker").ip.to_string() == "192.168.0.41");
    CHECK(!script.pollers.empty());
}

TEST_CASE("script parser reports unknown keys with line numbers") {
    CHECK_THROWS_WITH_AS(parse_trace_script("nonsense = 1\n"), doctest::Contains("line 1"),
                         SynthError);
    CHECK_THROWS_WITH_AS(parse_trace_script("[[rocket]]\n"), doctest::Contains("rocket"),
                         SynthError);
    CHECK_THROWS_WITH_AS(parse_trace_script("duration = fast\n"), doctest::Contains("number"),
                         SynthError);
}

TEST_CASE("custom endpoints and pollers override the defaults") {
    const std::string text =
        "duration = 5\n"
        "[[endpoint]]\n"
        "name = \"alpha\"\n"
        "ip = \"10.1.1.1\"\n"
        "mac = \"02:00:00:00:00:01\"\n"
        "[[endpoint]]\n"
        "name = \"beta\"\n"
        "ip = \"10.1.1.2\"\n"
        "mac = \"02:00:00:00:00:02\"\n"
        "[[poller]]\n"
        "client = \"alpha\"\n"
        "server = \"beta\"\n"
        "rate_hz = 10\n";
    const TraceScript script = parse_trace_script(text);
    CHECK(script.endpoints.size() == 2);
    REQUIRE(script.pollers.size() == 1);
    CHECK(script.pollers[0].rate_hz == 10.0);
    const SynthResult result = synth_trace(script);
    CHECK(result.manifest.total_packets > 0);
}
