// Acceptance suite: runs every criterion at its stated tolerance and prints
// one PASS/FAIL line per criterion (SKIP only for the optional
// published-dataset reproduction when the file is not available).

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <map>
#include <numeric>
#include <sstream>
#include <vector>

#include "flow_oracle.hpp"
#include "flowids/csv.hpp"
#include "flowids/dataset.hpp"
#include "flowids/flow.hpp"
#include "flowids/flow_csv.hpp"
#include "flowids/flow_schema.hpp"
#include "flowids/forest.hpp"
#include "flowids/io_util.hpp"
#include "flowids/labeler.hpp"
#include "flowids/metrics.hpp"
#include "flowids/mlp.hpp"
#include "flowids/model_io.hpp"
#include "flowids/mrmr.hpp"
#include "flowids/pcap_io.hpp"
#include "flowids/rng.hpp"
#include "flowids/synth.hpp"
#include "flowids/tree.hpp"
#include "temp_dir.hpp"
#include "trace_gen.hpp"

using namespace flowids;
using flowids::testing::oracle_flows;
using flowids::testing::OracleFlow;
using flowids::testing::random_trace;
using flowids::testing::TempDir;
using flowids::testing::TraceGenConfig;

namespace {

struct Failure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void require(bool condition, const std::string& message) {
    if (!condition) throw Failure(message);
}

void require_close(double got, double want, double tolerance, const std::string& what) {
    if (std::abs(got - want) > tolerance) {
        std::ostringstream out;
        out << what << ": got " << got << ", want " << want << " (tolerance " << tolerance
            << ")";
        throw Failure(out.str());
    }
}

// state shared between criteria 1 and 2
struct SuiteFlows {
    std::vector<FlowRecord> flows;
    std::vector<double> intervals;          // parallel to flows
    std::uint64_t aggregated_packets = 0;
    std::uint64_t flow_packet_sum = 0;
};
SuiteFlows g_suite;

// ---- criterion 1 -----------------------------------------------------------

void compare_flows(const FlowRecord& g, const OracleFlow& w, std::size_t trace_seed) {
    const std::string where =
        "trace seed " + std::to_string(trace_seed) + ", flow " + g.s_address + "->" +
        g.r_address + " " + g.protocol + " @" + format_float6(g.start);
    auto ieq = [&](std::int64_t a, std::int64_t b, const char* name) {
        require(a == b, where + ": integer field " + name + " " + std::to_string(a) +
                            " != " + std::to_string(b));
    };
    auto feq = [&](double a, double b, const char* name) {
        if (std::abs(a - b) > 1e-9)
            throw Failure(where + ": float field " + name + " differs by " +
                          std::to_string(std::abs(a - b)));
    };
    require(g.s_address == w.s_addr && g.r_address == w.r_addr && g.protocol == w.protocol,
            where + ": key mismatch");
    ieq(g.s_packets, w.s_packets, "sPackets");
    ieq(g.r_packets, w.r_packets, "rPackets");
    ieq(g.s_bytes_max, w.s_bytes_max, "sBytesMax");
    ieq(g.r_bytes_max, w.r_bytes_max, "rBytesMax");
    ieq(g.s_bytes_min, w.s_bytes_min, "sBytesMin");
    ieq(g.r_bytes_min, w.r_bytes_min, "rBytesMin");
    ieq(g.s_payload_max, w.s_payload_max, "sPayloadMax");
    ieq(g.r_payload_max, w.r_payload_max, "rPayloadMax");
    ieq(g.s_payload_min, w.s_payload_min, "sPayloadMin");
    ieq(g.r_payload_min, w.r_payload_min, "rPayloadMin");
    feq(g.start, w.start, "start");
    feq(g.end, w.end, "end");
    feq(g.start_offset, w.start_offset, "startOffset");
    feq(g.end_offset, w.end_offset, "endOffset");
    feq(g.duration, w.duration, "duration");
    feq(g.s_bytes_avg, w.s_bytes_avg, "sBytesAvg");
    feq(g.r_bytes_avg, w.r_bytes_avg, "rBytesAvg");
    feq(g.s_load, w.s_load, "sLoad");
    feq(g.r_load, w.r_load, "rLoad");
    feq(g.s_payload_avg, w.s_payload_avg, "sPayloadAvg");
    feq(g.r_payload_avg, w.r_payload_avg, "rPayloadAvg");
    feq(g.s_inter_packet, w.s_inter_packet, "sInterPacket");
    feq(g.r_inter_packet, w.r_inter_packet, "rInterPacket");
    feq(g.s_ttl, w.s_ttl, "sttl");
    feq(g.r_ttl, w.r_ttl, "rttl");
    feq(g.s_ack_delay_max, w.s_ack_delay_max, "sAckDelayMax");
    feq(g.r_ack_delay_max, w.r_ack_delay_max, "rAckDelayMax");
    feq(g.s_ack_delay_min, w.s_ack_delay_min, "sAckDelayMin");
    feq(g.r_ack_delay_min, w.r_ack_delay_min, "rAckDelayMin");
    feq(g.s_ack_delay_avg, w.s_ack_delay_avg, "sAckDelayAvg");
    feq(g.r_ack_delay_avg, w.r_ack_delay_avg, "rAckDelayAvg");
    feq(g.s_ack_rate, w.s_ack_rate, "sAckRate");
    feq(g.r_ack_rate, w.r_ack_rate, "rAckRate");
    feq(g.s_fin_rate, w.s_fin_rate, "sFinRate");
    feq(g.r_fin_rate, w.r_fin_rate, "rFinRate");
    feq(g.s_psh_rate, w.s_psh_rate, "sPshRate");
    feq(g.r_psh_rate, w.r_psh_rate, "rPshRate");
    feq(g.s_rst_rate, w.s_rst_rate, "sRstRate");
    feq(g.r_rst_rate, w.r_rst_rate, "rRstRate");
    feq(g.s_urg_rate, w.s_urg_rate, "sUrgRate");
    feq(g.r_urg_rate, w.r_urg_rate, "rUrgRate");
    feq(g.s_syn_rate, w.s_syn_rate, "sSynRate");
    feq(g.r_syn_rate, w.r_syn_rate, "rSynRate");
    feq(g.s_win_tcp, w.s_win_tcp, "sWinTCP");
    feq(g.r_win_tcp, w.r_win_tcp, "rWinTCP");
    feq(g.s_fragment_rate, w.s_fragment_rate, "sFragmentRate");
    feq(g.r_fragment_rate, w.r_fragment_rate, "rFragmentRate");
}

void criterion1_oracle_equivalence() {
    const auto started = std::chrono::steady_clock::now();
    for (std::uint64_t seed = 1; seed <= 200; ++seed) {
        TraceGenConfig config;
        config.seed = seed;
        config.n_packets = 200 + (seed * 37) % 1801;  // <= 2000
        config.n_endpoints = 2 + static_cast<int>(seed % 7);
        config.duration = static_cast<double>(config.n_packets) / 60.0;
        const double interval = seed % 3 == 0 ? 0.2 : 0.5;

        const auto packets = random_trace(config);
        FlowEngineStats stats;
        auto got = generate_flows(packets, interval, &stats);
        auto want = oracle_flows(packets, interval);
        require(got.size() == want.size(),
                "trace seed " + std::to_string(seed) + ": engine emitted " +
                    std::to_string(got.size()) + " flows, oracle " +
                    std::to_string(want.size()));

        std::sort(got.begin(), got.end(), [](const FlowRecord& a, const FlowRecord& b) {
            return std::tie(a.start, a.s_address, a.r_address, a.protocol, a.end) <
                   std::tie(b.start, b.s_address, b.r_address, b.protocol, b.end);
        });
        std::sort(want.begin(), want.end(), [](const OracleFlow& a, const OracleFlow& b) {
            return std::tie(a.start, a.s_addr, a.r_addr, a.protocol, a.end) <
                   std::tie(b.start, b.s_addr, b.r_addr, b.protocol, b.end);
        });
        for (std::size_t i = 0; i < got.size(); ++i) compare_flows(got[i], want[i], seed);

        g_suite.aggregated_packets += stats.aggregated_packets;
        for (const FlowRecord& flow : got) {
            g_suite.flow_packet_sum +=
                static_cast<std::uint64_t>(flow.s_packets + flow.r_packets);
            g_suite.intervals.push_back(interval);
            g_suite.flows.push_back(flow);
        }
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    require(elapsed < 60.0, "200-trace oracle comparison took " + std::to_string(elapsed) +
                                " s, budget is 60 s");
}

// ---- criterion 2 -----------------------------------------------------------

void criterion2_flow_invariants() {
    require(!g_suite.flows.empty(), "criterion 1 must run first and produce flows");
    require(g_suite.flow_packet_sum == g_suite.aggregated_packets,
            "packet conservation: flows account for " +
                std::to_string(g_suite.flow_packet_sum) + " packets, engine aggregated " +
                std::to_string(g_suite.aggregated_packets));

    for (std::size_t i = 0; i < g_suite.flows.size(); ++i) {
        const FlowRecord& flow = g_suite.flows[i];
        const double interval = g_suite.intervals[i];
        require(flow.duration >= 0.0 && flow.duration <= interval + 1e-12,
                "duration " + format_float6(flow.duration) + " outside [0, " +
                    format_float6(interval) + "]");
        require(flow.s_packets + flow.r_packets >= 1, "flow without packets");
        if (flow.s_packets > 0) {
            require(static_cast<double>(flow.s_bytes_min) <= flow.s_bytes_avg + 1e-9 &&
                        flow.s_bytes_avg <= static_cast<double>(flow.s_bytes_max) + 1e-9,
                    "sBytes min<=avg<=max violated");
            require(static_cast<double>(flow.s_payload_min) <= flow.s_payload_avg + 1e-9 &&
                        flow.s_payload_avg <= static_cast<double>(flow.s_payload_max) + 1e-9,
                    "sPayload min<=avg<=max violated");
        }
        if (flow.r_packets > 0) {
            require(static_cast<double>(flow.r_bytes_min) <= flow.r_bytes_avg + 1e-9 &&
                        flow.r_bytes_avg <= static_cast<double>(flow.r_bytes_max) + 1e-9,
                    "rBytes min<=avg<=max violated");
            require(static_cast<double>(flow.r_payload_min) <= flow.r_payload_avg + 1e-9 &&
                        flow.r_payload_avg <= static_cast<double>(flow.r_payload_max) + 1e-9,
                    "rPayload min<=avg<=max violated");
        }
        for (double rate :
             {flow.s_ack_rate, flow.r_ack_rate, flow.s_fin_rate, flow.r_fin_rate,
              flow.s_psh_rate, flow.r_psh_rate, flow.s_rst_rate, flow.r_rst_rate,
              flow.s_urg_rate, flow.r_urg_rate, flow.s_syn_rate, flow.r_syn_rate}) {
            require(rate >= 0.0 && rate <= 1.0, "flag rate outside [0,1]");
        }
        // TCP cells empty iff non-TCP, checked on the rendered row
        const auto cells = csv_split(flow_csv_row(flow));
        const bool tcp = flow.protocol == "IPV4-TCP";
        for (std::size_t col = kFirstTcpColumn; col < kFirstLabelColumn; ++col) {
            require(cells[col].empty() != tcp,
                    "TCP cell emptiness does not match protocol " + flow.protocol);
        }
    }
}

// ---- criterion 3 -----------------------------------------------------------

void criterion3_labeling() {
    for (std::uint64_t seed : {11ULL, 12ULL, 13ULL}) {
        TraceScript script = TraceScript::with_defaults();
        script.seed = seed;
        script.duration = 60.0;
        script.phases = {{"ip-scan", 4.0, 10.0, 1.0},
                         {"port-scan", 14.0, 20.0, 1.0},
                         {"ddos", 24.0, 32.0, 1.5},
                         {"replay", 36.0, 44.0, 1.0},
                         {"mitm", 48.0, 56.0, 1.0}};
        const SynthResult result = synth_trace(script);

        TempDir dir("accept3");
        write_file_atomic(dir.file("t.pcap"), result.pcap);
        const auto packets = read_pcap_file(dir.file("t.pcap"));
        auto flows = generate_flows(packets, script.interval);

        const auto log = parse_attack_log_text(synth_attack_log(script), "synth");
        require(log.errors.empty(), "synth attack log failed to parse");
        label_flows(flows, log.entries);

        std::map<std::tuple<std::string, std::string, std::string, double>,
                 std::pair<std::string, std::string>>
            expected;
        for (const ManifestFlow& flow : result.manifest.flows)
            expected[{flow.s_address, flow.r_address, flow.protocol, flow.start}] = {
                flow.it_label, flow.nst_label};
        require(expected.size() == flows.size(), "manifest flow count mismatch");

        std::size_t it_mismatches = 0;
        for (const FlowRecord& flow : flows) {
            const auto it =
                expected.find({flow.s_address, flow.r_address, flow.protocol, flow.start});
            require(it != expected.end(), "flow missing from manifest");
            if (flow.it_m != it->second.first) ++it_mismatches;
            require(flow.nst_b <= flow.it_b, "NST label outside the IT set");
            if (flow.nst_b != 0)
                require(flow.it_b == 1, "nst attack flow not it-labeled");
        }
        require(it_mismatches == 0,
                std::to_string(it_mismatches) + " IT label mismatches against the manifest");
    }

    // empty log => all normal
    TraceScript benign = TraceScript::with_defaults();
    benign.seed = 14;
    benign.duration = 20.0;
    const SynthResult result = synth_trace(benign);
    TempDir dir("accept3b");
    write_file_atomic(dir.file("b.pcap"), result.pcap);
    auto flows = generate_flows(read_pcap_file(dir.file("b.pcap")), benign.interval);
    const std::vector<AttackLogEntry> no_entries;
    label_flows(flows, no_entries);
    for (const FlowRecord& flow : flows)
        require(flow.it_b == 0 && flow.nst_b == 0 && flow.it_m == "normal" &&
                    flow.nst_m == "normal",
                "flow labeled non-normal under an empty log");
}

// ---- criterion 4 -----------------------------------------------------------

void criterion4_formula_checks() {
    // min-max normalization on the worked examples
    DatasetMatrix matrix;
    matrix.column_names = {"f0", "f1"};
    matrix.n_cols = 2;
    matrix.n_rows = 4;
    matrix.data = {0.0, 7.0, 10.0, 7.0, 5.0, 7.0, 12.0, 7.0};
    matrix.labels = {0, 0, 0, 0};
    matrix.split = {SplitTag::Train, SplitTag::Train, SplitTag::Train, SplitTag::Test};
    minmax_normalize(matrix);
    require_close(matrix.at(2, 0), 0.5, 1e-9, "min-max: (5-0)/(10-0)");
    require_close(matrix.at(0, 1), 0.0, 1e-9, "min-max: constant column maps to 0");
    require_close(matrix.at(3, 0), 1.2, 1e-9, "min-max: unclamped test value (12-0)/(10-0)");

    // metric formulas on the worked confusion matrix
    ConfusionMatrix cm;
    cm.k = 2;
    cm.class_names = {"normal", "attack"};
    cm.counts = {47, 1, 2, 50};
    const MetricsReport report = compute_metrics(cm);
    require_close(report.per_class[1].precision, 50.0 / 51.0, 1e-9, "precision");
    require_close(report.per_class[1].recall, 50.0 / 52.0, 1e-9, "recall");
    require_close(report.per_class[1].f1, 100.0 / 103.0, 1e-9, "F1");
    require_close(report.overall_accuracy, 0.97, 1e-9, "overall accuracy");
    require_close(report.per_class[1].accuracy, 0.97, 1e-9, "one-vs-rest accuracy");

    // zero-division cases return flagged zeros
    ConfusionMatrix zero;
    zero.k = 2;
    zero.class_names = {"a", "b"};
    zero.counts = {5, 0, 3, 0};
    const MetricsReport zreport = compute_metrics(zero);
    require(zreport.per_class[1].precision == 0.0 && zreport.per_class[1].precision_undefined,
            "zero-division precision must be a flagged 0");
    require(zreport.per_class[1].f1 == 0.0 && zreport.per_class[1].f1_undefined,
            "zero-division F1 must be a flagged 0");
}

// ---- criterion 5 -----------------------------------------------------------

double entropy_bits(const std::vector<int>& xs) {
    std::map<int, std::int64_t> counts;
    for (int x : xs) ++counts[x];
    double h = 0.0;
    for (const auto& [value, count] : counts) {
        const double p = static_cast<double>(count) / static_cast<double>(xs.size());
        h -= p * std::log2(p);
    }
    return h;
}

void criterion5_mrmr_properties() {
    Rng rng(505);
    for (int table = 0; table < 100; ++table) {
        const std::size_t n = 20 + rng.bounded(150);
        std::vector<int> x(n);
        std::vector<int> y(n);
        const int kx = 2 + static_cast<int>(rng.bounded(5));
        const int ky = 2 + static_cast<int>(rng.bounded(5));
        for (std::size_t i = 0; i < n; ++i) {
            x[i] = static_cast<int>(rng.bounded(kx));
            y[i] = rng.bounded(2) == 0 ? x[i] % ky : static_cast<int>(rng.bounded(ky));
        }
        const double mi_xy = mutual_information(x, y);
        const double mi_yx = mutual_information(y, x);
        require(std::abs(mi_xy - mi_yx) <= 1e-12, "MI symmetry violated");
        require(mi_xy <= std::min(entropy_bits(x), entropy_bits(y)) + 1e-12,
                "MI exceeds min(H(x), H(y))");
        require(mi_xy >= -1e-12, "negative MI");
    }

    // a feature equal to the label ranks first
    {
        const std::size_t n = 400;
        std::vector<int> labels(n);
        for (auto& label : labels) label = static_cast<int>(rng.bounded(2));
        DatasetMatrix matrix;
        matrix.column_names = {"noise_a", "label_copy", "noise_b"};
        matrix.n_cols = 3;
        matrix.n_rows = n;
        matrix.data.resize(n * 3);
        for (std::size_t i = 0; i < n; ++i) {
            matrix.at(i, 0) = rng.uniform01();
            matrix.at(i, 1) = static_cast<double>(labels[i]);
            matrix.at(i, 2) = rng.uniform01();
        }
        matrix.labels = labels;
        matrix.class_names = {"normal", "attack"};
        const MrmrRanking ranking = mrmr_rank(matrix);
        require(ranking.order[0].feature == "label_copy",
                "label copy not ranked first, got " + ranking.order[0].feature);
    }

    // an exact duplicate column is penalized below positive-margin features;
    // the base feature carries 10% label noise so the duplicate's redundancy
    // strictly exceeds its relevance
    const std::size_t n = 500;
    std::vector<int> labels(n);
    for (auto& label : labels) label = static_cast<int>(rng.bounded(2));
    DatasetMatrix matrix;
    matrix.column_names = {"noise", "strong", "strong_dup", "weak"};
    matrix.n_cols = 4;
    matrix.n_rows = n;
    matrix.data.resize(n * 4);
    for (std::size_t i = 0; i < n; ++i) {
        const int noisy = rng.bounded(10) == 0 ? 1 - labels[i] : labels[i];
        matrix.at(i, 0) = rng.uniform01();
        matrix.at(i, 1) = static_cast<double>(noisy);
        matrix.at(i, 2) = static_cast<double>(noisy);
        matrix.at(i, 3) = labels[i] == 1 ? 0.4 + rng.uniform01() : rng.uniform01();
    }
    matrix.labels = labels;
    matrix.class_names = {"normal", "attack"};

    const MrmrRanking ranking = mrmr_rank(matrix);
    require(ranking.order[0].feature == "strong", "strong feature not ranked first, got " +
                                                      ranking.order[0].feature);
    double dup_score = 1.0;
    std::size_t dup_rank = 0;
    std::size_t weak_rank = 0;
    double weak_score = 0.0;
    for (std::size_t i = 0; i < ranking.order.size(); ++i) {
        if (ranking.order[i].feature == "strong_dup") {
            dup_score = ranking.order[i].score;
            dup_rank = i;
        }
        if (ranking.order[i].feature == "weak") {
            weak_rank = i;
            weak_score = ranking.order[i].score;
        }
    }
    require(dup_score <= 1e-9, "duplicate column score should be <= 0 at selection time");
    require(weak_score > 0.0, "the weak-but-novel feature should score positive");
    require(weak_rank < dup_rank, "duplicate column must rank below positive-margin features");
}

// ---- criterion 6 -----------------------------------------------------------

void criterion6_model_checks() {
    // MLP gradient vs central finite differences on 20 random configurations
    Rng rng(606);
    for (int config = 0; config < 20; ++config) {
        const std::size_t n = 10;
        const std::size_t p = 5;
        std::vector<double> data(n * p);
        for (auto& v : data) v = rng.uniform01() * 2.0 - 1.0;
        const int classes = 2 + static_cast<int>(rng.bounded(3));
        std::vector<int> labels(n);
        for (auto& label : labels) label = static_cast<int>(rng.bounded(classes));

        std::vector<int> hidden;
        const int layer_count = 1 + static_cast<int>(rng.bounded(3));
        for (int l = 0; l < layer_count; ++l)
            hidden.push_back(2 + static_cast<int>(rng.bounded(7)));
        const auto activation = static_cast<Activation>(rng.bounded(4));

        MlpModel model = mlp_init(static_cast<int>(p), classes, hidden, activation,
                                  9000 + static_cast<std::uint64_t>(config));
        std::vector<std::size_t> rows(n);
        std::iota(rows.begin(), rows.end(), 0);
        std::vector<double> gradient;
        mlp_loss_and_gradient(model, data, p, rows, labels, gradient);

        const double eps = 1e-5;
        double max_rel = 0.0;
        for (std::size_t i = 0; i < model.param_count(); ++i) {
            const double original = model.get_param(i);
            model.set_param(i, original + eps);
            const double up = mlp_loss(model, data, p, rows, labels);
            model.set_param(i, original - eps);
            const double down = mlp_loss(model, data, p, rows, labels);
            model.set_param(i, original);
            const double fd = (up - down) / (2.0 * eps);
            max_rel = std::max(max_rel, std::abs(gradient[i] - fd) /
                                            std::max(1.0, std::abs(gradient[i]) + std::abs(fd)));
        }
        require(max_rel < 1e-4, "config " + std::to_string(config) +
                                    ": max relative gradient error " + std::to_string(max_rel));
    }

    // DT: XOR at max_splits >= 3 and purity growth on distinct rows
    {
        const std::vector<double> xor_data = {0, 0, 0, 1, 1, 0, 1, 1};
        const std::vector<int> xor_labels = {0, 1, 1, 0};
        for (SplitCriterion criterion :
             {SplitCriterion::Gini, SplitCriterion::Twoing, SplitCriterion::Deviance}) {
            const TreeModel tree = dt_fit(xor_data, 4, 2, xor_labels, criterion, 3);
            for (std::size_t i = 0; i < 4; ++i) {
                const std::span<const double> row(xor_data.data() + i * 2, 2);
                require(argmax_class(tree.probabilities(row)) == xor_labels[i],
                        std::string("XOR misclassified under ") + to_string(criterion));
            }
        }

        Rng drng(42);
        const std::size_t n = 300;
        const std::size_t p = 4;
        std::vector<double> data(n * p);
        for (auto& v : data) v = drng.uniform01();
        std::vector<int> labels(n);
        for (auto& label : labels) label = static_cast<int>(drng.bounded(5));
        const TreeModel tree = dt_fit(data, n, p, labels, SplitCriterion::Gini, 1 << 20);
        for (std::size_t i = 0; i < n; ++i) {
            const std::span<const double> row(data.data() + i * p, p);
            require(argmax_class(tree.probabilities(row)) == labels[i],
                    "purity-grown tree misclassified a distinct training row");
        }
    }

    // RF and MLP bit-determinism under fixed seeds
    {
        Rng drng(43);
        const std::size_t n = 200;
        const std::size_t p = 3;
        std::vector<double> data(n * p);
        for (auto& v : data) v = drng.uniform01();
        std::vector<int> labels(n);
        for (std::size_t i = 0; i < n; ++i) labels[i] = data[i * p] > 0.5 ? 1 : 0;

        const ForestModel fa = rf_fit(data, n, p, labels, 8, 30, 2, 777);
        const ForestModel fb = rf_fit(data, n, p, labels, 8, 30, 2, 777);
        SavedModel sa{"forest", {"a", "b", "c"}, {"0", "1"}, "", "", fa};
        SavedModel sb{"forest", {"a", "b", "c"}, {"0", "1"}, "", "", fb};
        require(model_to_json(sa) == model_to_json(sb), "forest not bit-deterministic");

        MlpFitOptions options;
        options.epochs = 15;
        const MlpModel ma = mlp_fit(data, n, p, labels, {8}, Activation::Sigmoid, options, 31);
        const MlpModel mb = mlp_fit(data, n, p, labels, {8}, Activation::Sigmoid, options, 31);
        require(ma.param_count() == mb.param_count(), "mlp parameter counts differ");
        for (std::size_t i = 0; i < ma.param_count(); ++i)
            require(ma.get_param(i) == mb.get_param(i), "mlp not bit-deterministic");
    }
}

// ---- criterion 7 -----------------------------------------------------------

void criterion7_end_to_end_detection() {
    TraceScript script = TraceScript::with_defaults();
    script.seed = 7007;
    script.duration = 300.0;
    script.phases = {{"ip-scan", 30.0, 60.0, 1.0},
                     {"port-scan", 75.0, 105.0, 1.0},
                     {"ddos", 120.0, 150.0, 2.0},
                     {"replay", 165.0, 195.0, 1.0},
                     {"mitm", 210.0, 240.0, 1.0}};
    const SynthResult result = synth_trace(script);

    TempDir dir("accept7");
    write_file_atomic(dir.file("t.pcap"), result.pcap);
    auto flows = generate_flows(read_pcap_file(dir.file("t.pcap")), 0.5);
    const auto log = parse_attack_log_text(synth_attack_log(script), "synth");
    label_flows(flows, log.entries);

    DatasetMatrix matrix = clean_dataset(flows, TaskKind::Detect, LabelScheme::Nst);
    split_dataset(matrix, {0.5, 0.2, 0.3}, 1);
    minmax_normalize(matrix);

    const auto train_rows = matrix.rows_with_tag(SplitTag::Train);
    const auto test_rows = matrix.rows_with_tag(SplitTag::Test);
    std::vector<double> train_data;
    std::vector<int> train_labels;
    for (std::size_t r : train_rows) {
        const auto row = matrix.row(r);
        train_data.insert(train_data.end(), row.begin(), row.end());
        train_labels.push_back(matrix.labels[r]);
    }

    const int predictors =
        std::max(1, static_cast<int>(std::lround(std::sqrt(static_cast<double>(matrix.n_cols)))));
    const ForestModel forest = rf_fit(train_data, train_rows.size(), matrix.n_cols, train_labels,
                                      10, 850, predictors, 1);

    std::vector<int> truth;
    std::vector<int> predicted;
    for (std::size_t r : test_rows) {
        truth.push_back(matrix.labels[r]);
        predicted.push_back(argmax_class(forest.probabilities(matrix.row(r))));
    }
    const ConfusionMatrix cm = confusion_matrix(truth, predicted, 2, {"normal", "attack"});
    const MetricsReport report = compute_metrics(cm);
    const double f1 = report.per_class[1].f1;
    std::fprintf(stderr, "        criterion 7 detail: %zu flows, test attack F1 = %.4f\n",
                 flows.size(), f1);
    require(f1 >= 0.90, "binary attack F1 " + std::to_string(f1) + " below 0.90");
}

// ---- criterion 8 (optional) -------------------------------------------------

std::string published_dataset_path() {
    if (const char* env = std::getenv("FLOWIDS_DATASET_CSV")) return env;
    if (file_exists("data/dataset.csv")) return "data/dataset.csv";
    if (file_exists("../data/dataset.csv")) return "../data/dataset.csv";
    return {};
}

std::uint64_t class_count(const std::map<std::string, std::uint64_t>& counts,
                          const std::string& wanted) {
    for (const auto& [name, count] : counts) {
        std::string lower = name;
        for (char& c : lower) c = static_cast<char>(std::tolower(c));
        if (lower == wanted) return count;
    }
    return 0;
}

void criterion8_published_dataset(const std::string& path) {
    const auto started = std::chrono::steady_clock::now();
    auto read = read_flow_csv(path);
    const DatasetStatsReport stats = dataset_stats(read.flows);

    require(stats.total_flows == 45719,
            "total flows " + std::to_string(stats.total_flows) + " != 45719");
    require(class_count(stats.it.class_counts, "normal") == 30236,
            "IT normal count != 30236");
    require(class_count(stats.nst.class_counts, "normal") == 36706,
            "NST normal count != 36706");
    require(stats.it.attack_flows == 45719 - 30236, "IT attack total inconsistent");
    require(stats.nst.attack_flows == 45719 - 36706, "NST attack total inconsistent");
    for (const auto& [name, count] : stats.it.class_counts)
        std::fprintf(stderr, "        criterion 8 detail: IT %s = %llu\n", name.c_str(),
                     static_cast<unsigned long long>(count));

    // MRMR shape: rBytesAvg belongs to the top 3 on the prepared training split
    {
        DatasetMatrix prep = clean_dataset(read.flows, TaskKind::Detect, LabelScheme::Nst);
        split_dataset(prep, {0.5, 0.2, 0.3}, 1);
        minmax_normalize(prep);
        const MrmrRanking ranking = mrmr_rank(prep);
        bool in_top3 = false;
        for (std::size_t i = 0; i < 3 && i < ranking.order.size(); ++i) {
            std::fprintf(stderr, "        criterion 8 detail: mrmr #%zu %s (%.4f)\n", i + 1,
                         ranking.order[i].feature.c_str(), ranking.order[i].score);
            if (ranking.order[i].feature == "rBytesAvg") in_top3 = true;
        }
        require(in_top3, "rBytesAvg not in the top 3 of the MRMR ranking");
        const auto selected = select_by_threshold(ranking, 0.07);
        std::fprintf(stderr, "        criterion 8 detail: %zu features above tau=0.07\n",
                     selected.size());
    }

    // binary detection, NST scheme
    DatasetMatrix binary = clean_dataset(read.flows, TaskKind::Detect, LabelScheme::Nst);
    split_dataset(binary, {0.5, 0.2, 0.3}, 1);
    minmax_normalize(binary);
    auto fit_and_score = [](DatasetMatrix& matrix, int learners, int splits, int predictors,
                            MetricsReport& out) {
        const auto train_rows = matrix.rows_with_tag(SplitTag::Train);
        const auto test_rows = matrix.rows_with_tag(SplitTag::Test);
        std::vector<double> train_data;
        std::vector<int> train_labels;
        for (std::size_t r : train_rows) {
            const auto row = matrix.row(r);
            train_data.insert(train_data.end(), row.begin(), row.end());
            train_labels.push_back(matrix.labels[r]);
        }
        const ForestModel forest =
            rf_fit(train_data, train_rows.size(), matrix.n_cols, train_labels, learners, splits,
                   std::min<int>(predictors, static_cast<int>(matrix.n_cols)), 1);
        std::vector<int> truth;
        std::vector<int> predicted;
        for (std::size_t r : test_rows) {
            truth.push_back(matrix.labels[r]);
            predicted.push_back(argmax_class(forest.probabilities(matrix.row(r))));
        }
        const ConfusionMatrix cm = confusion_matrix(
            truth, predicted, matrix.class_names.size(), matrix.class_names);
        out = compute_metrics(cm);
    };

    MetricsReport binary_report;
    fit_and_score(binary, 10, 850, 17, binary_report);
    std::fprintf(stderr, "        criterion 8 detail: RF binary accuracy %.4f\n",
                 binary_report.overall_accuracy);
    require(binary_report.overall_accuracy >= 0.99,
            "RF binary accuracy " + std::to_string(binary_report.overall_accuracy) +
                " below 0.99");

    // multi-class identification, NST scheme
    DatasetMatrix multi = clean_dataset(read.flows, TaskKind::Identify, LabelScheme::Nst);
    split_dataset(multi, {0.5, 0.2, 0.3}, 1);
    minmax_normalize(multi);
    MetricsReport multi_report;
    fit_and_score(multi, 54, 1680, 8, multi_report);
    std::fprintf(stderr, "        criterion 8 detail: RF multi-class accuracy %.4f\n",
                 multi_report.overall_accuracy);
    require(multi_report.overall_accuracy >= 0.975,
            "RF multi-class accuracy " + std::to_string(multi_report.overall_accuracy) +
                " below 0.975");

    bool found_ip_scan = false;
    for (const ClassMetrics& m : multi_report.per_class) {
        std::string lower = m.name;
        for (char& c : lower) c = static_cast<char>(std::tolower(c));
        if (lower.find("ip") != std::string::npos && lower.find("scan") != std::string::npos) {
            found_ip_scan = true;
            std::fprintf(stderr, "        criterion 8 detail: %s F1 = %.4f\n", m.name.c_str(),
                         m.f1);
            require(m.f1 <= 0.75, "IP-Scan F1 " + std::to_string(m.f1) +
                                      " unexpectedly high; the known confusion should cap it");
        }
    }
    require(found_ip_scan, "no ip-scan class found in the published labels");

    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    require(elapsed < 1800.0,
            "published-dataset run took " + std::to_string(elapsed) + " s, budget is 30 min");
}

}  // namespace

int main() {
    struct Criterion {
        int number;
        const char* description;
        std::function<void()> run;
    };

    const std::string dataset_path = published_dataset_path();

    const std::vector<Criterion> criteria = {
        {1, "flow-aggregation oracle equivalence, 200 randomized traces, < 60 s",
         criterion1_oracle_equivalence},
        {2, "flow invariants on every emitted flow", criterion2_flow_invariants},
        {3, "labeling: manifest IT match, NST subset, empty-log normal", criterion3_labeling},
        {4, "normalization and metric formulas match hand-computed values at 1e-9", criterion4_formula_checks},
        {5, "MRMR: MI symmetry/H-bound, label-copy first, duplicate penalty",
         criterion5_mrmr_properties},
        {6, "models: gradient check, XOR/purity trees, seeded determinism",
         criterion6_model_checks},
        {7, "end-to-end desk-scale detection: RF binary F1 >= 0.90",
         criterion7_end_to_end_detection},
        {8, "published-dataset reproduction (optional, file-dependent)",
         [&] { criterion8_published_dataset(dataset_path); }},
    };

    int failures = 0;
    for (const Criterion& criterion : criteria) {
        if (criterion.number == 8 && dataset_path.empty()) {
            std::printf("SKIP  criterion 8: %s — set FLOWIDS_DATASET_CSV or place the flow CSV "
                        "at ./data/dataset.csv\n",
                        criterion.description);
            continue;
        }
        try {
            criterion.run();
            std::printf("PASS  criterion %d: %s\n", criterion.number, criterion.description);
        } catch (const std::exception& e) {
            std::printf("FAIL  criterion %d: %s — %s\n", criterion.number,
                        criterion.description, e.what());
            ++failures;
        }
        std::fflush(stdout);
    }
    return failures == 0 ? 0 : 1;
}
