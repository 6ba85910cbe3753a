#include <doctest.h>

#include <algorithm>

#include "flowids/attack_log.hpp"
#include "flowids/labeler.hpp"
#include "flowids/rng.hpp"

using namespace flowids;

namespace {

FlowRecord make_flow(double start, double end, const char* s_addr = "192.168.0.11",
                     const char* r_addr = "192.168.0.21", const char* protocol = "IPV4-TCP") {
    FlowRecord flow;
    flow.s_address = s_addr;
    flow.r_address = r_addr;
    flow.protocol = protocol;
    flow.start = start;
    flow.end = end;
    flow.duration = end - start;
    flow.s_packets = 1;
    return flow;
}

AttackLogEntry make_entry(const char* attack, double start, double end,
                          const char* ip = "192.168.0.41",
                          const char* mac = "02:42:c0:a8:00:29") {
    AttackLogEntry entry;
    entry.attack = attack;
    entry.start_ts = start;
    entry.end_ts = end;
    entry.attacker_ip = ip;
    entry.attacker_mac = mac;
    return entry;
}

}  // namespace

TEST_CASE("attack log parses the Table-6 style row") {
    const std::string text =
        "attack,startStamp,endStamp,attackerIP,attackerMAC,description\n"
        "ddos,1660000000.0,1660000060.0,192.168.0.41,02:42:c0:a8:00:29,800 agents\n";
    const auto result = parse_attack_log_text(text, "inline");
    CHECK(result.errors.empty());
    REQUIRE(result.entries.size() == 1);
    const AttackLogEntry& entry = result.entries[0];
    CHECK(entry.attack == "ddos");
    CHECK(entry.end_ts - entry.start_ts == doctest::Approx(60.0));
    CHECK(entry.attacker_ip == "192.168.0.41");
    CHECK(entry.attacker_mac == "02:42:c0:a8:00:29");
    CHECK(entry.extra == "800 agents");
}

TEST_CASE("empty attack log labels every flow normal") {
    const auto result =
        parse_attack_log_text("attack,startStamp,endStamp,attackerIP,attackerMAC,description\n",
                              "inline");
    CHECK(result.entries.empty());
    CHECK(result.errors.empty());

    std::vector<FlowRecord> flows = {make_flow(10, 10.4), make_flow(11, 11.4)};
    const auto summary = label_flows(flows, result.entries);
    CHECK(summary.it_attack_flows == 0);
    CHECK(summary.nst_attack_flows == 0);
    for (const FlowRecord& flow : flows) {
        CHECK(flow.labeled);
        CHECK(flow.it_b == 0);
        CHECK(flow.it_m == "normal");
        CHECK(flow.nst_b == 0);
        CHECK(flow.nst_m == "normal");
    }
}

TEST_CASE("row with end before start is rejected and the error names the row") {
    const std::string text =
        "attack,startStamp,endStamp,attackerIP,attackerMAC,description\n"
        "replay,100.0,90.0,192.168.0.41,02:42:c0:a8:00:29,broken\n";
    const auto result = parse_attack_log_text(text, "log.csv");
    CHECK(result.entries.empty());
    REQUIRE(result.errors.size() == 1);
    CHECK(result.errors[0].find("row 2") != std::string::npos);
}

TEST_CASE("row with an unparseable timestamp is rejected") {
    const std::string text =
        "attack,startStamp,endStamp,attackerIP,attackerMAC,description\n"
        "replay,not-a-time,90.0,192.168.0.41,02:42:c0:a8:00:29,broken\n"
        "ddos,10.0,20.0,192.168.0.41,02:42:c0:a8:00:29,ok\n";
    const auto result = parse_attack_log_text(text, "log.csv");
    REQUIRE(result.entries.size() == 1);
    CHECK(result.entries[0].attack == "ddos");
    REQUIRE(result.errors.size() == 1);
    CHECK(result.errors[0].find("row 2") != std::string::npos);
}

TEST_CASE("overlapping windows are permitted but flagged") {
    const std::string text =
        "attack,startStamp,endStamp,attackerIP,attackerMAC,description\n"
        "ddos,10.0,20.0,192.168.0.41,02:42:c0:a8:00:29,\n"
        "replay,15.0,25.0,192.168.0.41,02:42:c0:a8:00:29,\n";
    const auto result = parse_attack_log_text(text, "inline");
    CHECK(result.entries.size() == 2);
    CHECK(result.warnings.size() == 1);
}

TEST_CASE("entries come back sorted by start time") {
    const std::string text =
        "attack,startStamp,endStamp,attackerIP,attackerMAC,description\n"
        "replay,50.0,60.0,192.168.0.41,02:42:c0:a8:00:29,\n"
        "ddos,10.0,20.0,192.168.0.41,02:42:c0:a8:00:29,\n";
    const auto result = parse_attack_log_text(text, "inline");
    REQUIRE(result.entries.size() == 2);
    CHECK(result.entries[0].attack == "ddos");
    CHECK(result.entries[1].attack == "replay");
}

TEST_CASE("IT labels window traffic; NST additionally requires the attacker address") {
    // flow inside a replay window, neither endpoint is the attacker
    std::vector<FlowRecord> flows = {make_flow(1010.0, 1010.4)};
    std::vector<AttackLogEntry> entries = {make_entry("replay", 1000.0, 1045.0)};
    label_flows(flows, entries);
    CHECK(flows[0].it_b == 1);
    CHECK(flows[0].it_m == "replay");
    CHECK(flows[0].nst_b == 0);
    CHECK(flows[0].nst_m == "normal");
}

TEST_CASE("arp flows match the attacker by MAC on both schemes") {
    std::vector<FlowRecord> flows = {
        make_flow(2000.0, 2000.3, "02:42:c0:a8:00:29", "ff:ff:ff:ff:ff:ff", "ARP")};
    std::vector<AttackLogEntry> entries = {make_entry("ip-scan", 1995.0, 2030.0)};
    label_flows(flows, entries);
    CHECK(flows[0].it_b == 1);
    CHECK(flows[0].it_m == "ip-scan");
    CHECK(flows[0].nst_b == 1);
    CHECK(flows[0].nst_m == "ip-scan");
}

TEST_CASE("ip flows match the attacker by IP") {
    std::vector<FlowRecord> flows = {make_flow(3000.0, 3000.4, "192.168.0.11", "192.168.0.41")};
    std::vector<AttackLogEntry> entries = {make_entry("ddos", 2999.0, 3060.0)};
    label_flows(flows, entries);
    CHECK(flows[0].nst_b == 1);
    CHECK(flows[0].nst_m == "ddos");
}

TEST_CASE("a flow between attack windows stays normal on both schemes") {
    std::vector<FlowRecord> flows = {make_flow(100.0, 100.4)};
    std::vector<AttackLogEntry> entries = {make_entry("ddos", 10.0, 20.0),
                                           make_entry("replay", 200.0, 210.0)};
    label_flows(flows, entries);
    CHECK(flows[0].it_b == 0);
    CHECK(flows[0].nst_b == 0);
}

TEST_CASE("boundary touch counts as overlap") {
    std::vector<FlowRecord> flows = {make_flow(90.0, 100.0), make_flow(20.0, 30.0)};
    std::vector<AttackLogEntry> entries = {make_entry("mitm", 100.0, 150.0),
                                           make_entry("ddos", 10.0, 20.0)};
    label_flows(flows, entries);
    CHECK(flows[0].it_b == 1);  // flow.end == window.start
    CHECK(flows[0].it_m == "mitm");
    CHECK(flows[1].it_b == 1);  // flow.start == window.end
    CHECK(flows[1].it_m == "ddos");
}

TEST_CASE("multi-window overlap takes the latest start and counts the ambiguity") {
    std::vector<FlowRecord> flows = {make_flow(14.0, 16.0)};
    std::vector<AttackLogEntry> entries = {make_entry("ddos", 10.0, 20.0),
                                           make_entry("replay", 15.0, 25.0)};
    const auto summary = label_flows(flows, entries);
    CHECK(flows[0].it_m == "replay");  // started later
    CHECK(summary.ambiguous_flows == 1);

    // equal starts: first in file order wins
    std::vector<AttackLogEntry> tied = {make_entry("ddos", 10.0, 20.0),
                                        make_entry("replay", 10.0, 25.0)};
    tied[0].file_order = 0;
    tied[1].file_order = 1;
    std::vector<FlowRecord> flows2 = {make_flow(14.0, 16.0)};
    label_flows(flows2, tied);
    CHECK(flows2[0].it_m == "ddos");
}

TEST_CASE("nst_b never exceeds it_b and labeling is order independent and idempotent") {
    Rng rng(99);
    std::vector<FlowRecord> flows;
    for (int i = 0; i < 200; ++i) {
        const double start = rng.uniform01() * 100.0;
        const bool attacker_end = rng.bounded(3) == 0;
        flows.push_back(make_flow(start, start + rng.uniform01(),
                                  attacker_end ? "192.168.0.41" : "192.168.0.11",
                                  "192.168.0.21"));
    }
    std::vector<AttackLogEntry> entries = {make_entry("ddos", 5.0, 25.0),
                                           make_entry("replay", 40.0, 60.0),
                                           make_entry("mitm", 80.0, 95.0)};

    auto shuffled = flows;
    std::reverse(shuffled.begin(), shuffled.end());
    label_flows(flows, entries);
    label_flows(shuffled, entries);
    std::reverse(shuffled.begin(), shuffled.end());

    for (std::size_t i = 0; i < flows.size(); ++i) {
        CHECK(flows[i].nst_b <= flows[i].it_b);
        CHECK(flows[i].it_m == shuffled[i].it_m);
        CHECK(flows[i].nst_m == shuffled[i].nst_m);
    }

    auto again = flows;
    label_flows(again, entries);
    for (std::size_t i = 0; i < flows.size(); ++i) {
        CHECK(again[i].it_m == flows[i].it_m);
        CHECK(again[i].nst_b == flows[i].nst_b);
    }
}
