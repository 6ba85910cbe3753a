#include "flowids/cli.hpp"

#include <cmath>
#include <filesystem>
#include <iostream>

#include <CLI11.hpp>

#include "flowids/attack_log.hpp"
#include "flowids/csv.hpp"
#include "flowids/dataset.hpp"
#include "flowids/dataset_io.hpp"
#include "flowids/flow.hpp"
#include "flowids/flow_csv.hpp"
#include "flowids/forest.hpp"
#include "flowids/io_util.hpp"
#include "flowids/labeler.hpp"
#include "flowids/log.hpp"
#include "flowids/metrics.hpp"
#include "flowids/mlp.hpp"
#include "flowids/model_io.hpp"
#include "flowids/mrmr.hpp"
#include "flowids/pca.hpp"
#include "flowids/pcap_io.hpp"
#include "flowids/synth.hpp"
#include "flowids/tree.hpp"

namespace flowids {

namespace fs = std::filesystem;

namespace {

struct CliError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void ensure_writable(const std::string& path, bool force) {
    if (!force && file_exists(path))
        throw CliError("output '" + path + "' already exists; pass --force to overwrite");
}

// ---- flows ----------------------------------------------------------------

struct FlowsArgs {
    std::string pcap;
    std::string out;
    double interval = 0.5;
    bool force = false;
};

int cmd_flows(const FlowsArgs& args) {
    log_info("config: flows pcap=%s interval=%.6f out=%s", args.pcap.c_str(), args.interval,
             args.out.c_str());
    ensure_writable(args.out, args.force);
    if (!file_exists(args.pcap)) throw CliError("pcap file not found: " + args.pcap);

    PcapReader reader(args.pcap);
    FlowAggregator aggregator(args.interval);
    std::vector<FlowRecord> flows;
    DecodedPacket pkt;
    while (reader.next_packet(pkt)) {
        if (auto flushed = aggregator.add(pkt)) flows.push_back(std::move(*flushed));
    }
    auto rest = aggregator.finish();
    flows.insert(flows.end(), std::make_move_iterator(rest.begin()),
                 std::make_move_iterator(rest.end()));

    const auto& pstats = reader.stats();
    const auto& fstats = aggregator.stats();
    log_info("pcap: %llu records, %llu skipped, %llu truncated, %llu malformed frames",
             (unsigned long long)pstats.packets, (unsigned long long)pstats.skipped_records,
             (unsigned long long)pstats.truncated_tail,
             (unsigned long long)pstats.malformed_frames);
    log_info("flows: %llu packets aggregated, %llu discarded as NonProtocol",
             (unsigned long long)fstats.aggregated_packets,
             (unsigned long long)fstats.discarded_non_protocol);

    const std::uint64_t rows = write_flow_csv(flows, args.out);
    std::cout << rows << " flows written to " << args.out << "\n";
    return 0;
}

// ---- label ----------------------------------------------------------------

struct LabelArgs {
    std::string flows;
    std::string attacks;
    std::string out;
    bool force = false;
};

int cmd_label(const LabelArgs& args) {
    log_info("config: label flows=%s attacks=%s out=%s", args.flows.c_str(),
             args.attacks.c_str(), args.out.c_str());
    ensure_writable(args.out, args.force);

    auto read = read_flow_csv(args.flows);
    for (const std::string& warning : read.warnings) log_warn("%s", warning.c_str());

    const auto log_result = parse_attack_log(args.attacks);
    for (const std::string& error : log_result.errors) log_error("%s", error.c_str());
    for (const std::string& warning : log_result.warnings) log_warn("%s", warning.c_str());
    if (log_result.entries.empty() && !log_result.errors.empty())
        throw CliError("attack log " + args.attacks + " yielded no usable entries");

    const LabelingSummary summary = label_flows(read.flows, log_result.entries);
    write_flow_csv(read.flows, args.out);
    std::cout << summary.flows << " flows labeled (IT attacks: " << summary.it_attack_flows
              << ", NST attacks: " << summary.nst_attack_flows
              << ", ambiguous: " << summary.ambiguous_flows << ") -> " << args.out << "\n";
    return 0;
}

// ---- stats ----------------------------------------------------------------

struct StatsArgs {
    std::string flows;
    std::string out;
    bool force = false;
};

int cmd_stats(const StatsArgs& args) {
    log_info("config: stats flows=%s out=%s", args.flows.c_str(),
             args.out.empty() ? "(stdout only)" : args.out.c_str());
    auto read = read_flow_csv(args.flows);
    for (const std::string& warning : read.warnings) log_warn("%s", warning.c_str());
    const DatasetStatsReport report = dataset_stats(read.flows);
    std::cout << report.to_text();
    if (!args.out.empty()) {
        ensure_writable(args.out, args.force);
        write_file_atomic(args.out, report.to_json());
    }
    return 0;
}

// ---- prepare --------------------------------------------------------------

struct PrepareArgs {
    std::string flows;
    std::string scheme = "NST";
    std::string task = "detect";
    std::uint64_t seed = 1;
    std::vector<double> fractions = {0.5, 0.2, 0.3};
    bool chronological = false;
    std::string pca_out;  // optional 2-D projection CSV
    std::string out;
    bool force = false;
};

int cmd_prepare(const PrepareArgs& args) {
    log_info("config: prepare flows=%s scheme=%s task=%s seed=%llu fractions=%.2f,%.2f,%.2f "
             "chronological=%d out=%s",
             args.flows.c_str(), args.scheme.c_str(), args.task.c_str(),
             (unsigned long long)args.seed, args.fractions[0], args.fractions[1],
             args.fractions[2], args.chronological ? 1 : 0, args.out.c_str());
    if (args.fractions.size() != 3) throw CliError("--fractions expects three values");
    for (const char* name : {"dataset.csv", "meta.json", "normalization.json"})
        ensure_writable((fs::path(args.out) / name).string(), args.force);

    auto read = read_flow_csv(args.flows);
    for (const std::string& warning : read.warnings) log_warn("%s", warning.c_str());

    const LabelScheme scheme = parse_label_scheme(args.scheme);
    const TaskKind task = parse_task_kind(args.task);
    DatasetMatrix matrix = clean_dataset(read.flows, task, scheme);
    const std::array<double, 3> fractions = {args.fractions[0], args.fractions[1],
                                             args.fractions[2]};
    if (args.chronological) {
        split_dataset_chronological(matrix, fractions);
    } else {
        split_dataset(matrix, fractions, args.seed);
    }
    const NormalizationParams params = minmax_normalize(matrix);

    PreparedDatasetInfo info;
    info.scheme = args.scheme;
    info.task = args.task;
    info.seed = args.seed;
    info.fractions = fractions;
    info.chronological = args.chronological;
    save_prepared_dataset(args.out, matrix, params, info);

    if (!args.pca_out.empty()) {
        ensure_writable(args.pca_out, args.force);
        const PcaResult pca = pca_project(matrix.data, matrix.n_rows, matrix.n_cols, 2);
        std::string csv = "pc1,pc2,label,split\n";
        const char* split_names[] = {"none", "train", "val", "test"};
        for (std::size_t r = 0; r < matrix.n_rows; ++r) {
            csv += format_float6(pca.coords[r * 2]);
            csv.push_back(',');
            csv += format_float6(pca.coords[r * 2 + 1]);
            csv.push_back(',');
            csv += matrix.class_names[static_cast<std::size_t>(matrix.labels[r])];
            csv.push_back(',');
            csv += split_names[static_cast<int>(matrix.split[r])];
            csv.push_back('\n');
        }
        write_file_atomic(args.pca_out, csv);
        const auto ratio = pca.explained_ratio();
        log_info("pca: top-2 explained variance %.4f + %.4f", ratio[0], ratio[1]);
    }

    const auto train_rows = matrix.rows_with_tag(SplitTag::Train).size();
    const auto val_rows = matrix.rows_with_tag(SplitTag::Val).size();
    const auto test_rows = matrix.rows_with_tag(SplitTag::Test).size();
    std::cout << matrix.n_rows << " rows, " << matrix.n_cols << " features -> " << args.out
              << " (train " << train_rows << ", val " << val_rows << ", test " << test_rows
              << ", classes " << matrix.class_names.size() << ")\n";
    return 0;
}

// ---- select ---------------------------------------------------------------

struct SelectArgs {
    std::string data;
    double tau = 0.07;
    int bins = 16;
    bool force = false;
};

int cmd_select(const SelectArgs& args) {
    log_info("config: select data=%s tau=%.6f bins=%d", args.data.c_str(), args.tau, args.bins);
    const std::string ranking_path = (fs::path(args.data) / "mrmr_ranking.csv").string();
    const std::string selected_path = (fs::path(args.data) / "selected_features.txt").string();
    ensure_writable(ranking_path, args.force);
    ensure_writable(selected_path, args.force);

    PreparedDataset prepared = load_prepared_dataset(args.data);
    const MrmrRanking ranking = mrmr_rank(prepared.matrix, args.bins);
    const std::vector<std::string> selected = select_by_threshold(ranking, args.tau);

    write_file_atomic(ranking_path, ranking.to_csv());
    std::string listing;
    for (const std::string& name : selected) {
        listing += name;
        listing.push_back('\n');
    }
    write_file_atomic(selected_path, listing);

    std::cout << selected.size() << " features selected (tau " << args.tau << ", "
              << ranking.bins << " bins, " << ranking.order.size() << " ranked) -> "
              << selected_path << "\n";
    return 0;
}

// ---- train ----------------------------------------------------------------

struct TrainArgs {
    std::string data;
    std::string model = "rf";
    std::string features;  // file listing selected feature names
    std::string out;
    std::uint64_t seed = 1;
    bool force = false;
    bool search = false;
    // dt
    std::string criterion = "deviance";
    int max_splits = -1;  // default depends on the model
    // rf
    int learners = 10;
    int predictors = 0;  // 0 = round(sqrt(p))
    // mlp
    std::vector<int> layers = {79};
    std::string activation = "sigmoid";
    int epochs = 40;
    double learning_rate = 0.05;
    int batch_size = 32;
};

struct ColumnSubset {
    std::vector<std::string> names;
    std::vector<std::size_t> indices;
};

ColumnSubset resolve_columns(const DatasetMatrix& matrix, const std::string& features_file,
                             const std::string& data_dir) {
    ColumnSubset subset;
    std::string path = features_file;
    if (path.empty()) {
        const std::string default_path = (fs::path(data_dir) / "selected_features.txt").string();
        if (file_exists(default_path)) {
            path = default_path;
            log_info("using feature selection from %s", path.c_str());
        }
    }
    if (path.empty()) {
        subset.names = matrix.column_names;
        for (std::size_t i = 0; i < matrix.n_cols; ++i) subset.indices.push_back(i);
        return subset;
    }
    for (const std::string& line : split_lines(read_text_file(path))) {
        if (line.empty()) continue;
        const auto it =
            std::find(matrix.column_names.begin(), matrix.column_names.end(), line);
        if (it == matrix.column_names.end())
            throw CliError("selected feature '" + line + "' is not a dataset column");
        subset.names.push_back(line);
        subset.indices.push_back(
            static_cast<std::size_t>(it - matrix.column_names.begin()));
    }
    if (subset.names.empty()) throw CliError("feature list " + path + " is empty");
    return subset;
}

struct SplitView {
    std::vector<double> data;  // rows x subset columns
    std::vector<int> labels;
    std::size_t n_rows = 0;
};

SplitView view_split(const DatasetMatrix& matrix, const ColumnSubset& subset, SplitTag tag) {
    SplitView view;
    const auto rows = matrix.rows_with_tag(tag);
    view.n_rows = rows.size();
    view.data.reserve(rows.size() * subset.indices.size());
    view.labels.reserve(rows.size());
    for (std::size_t r : rows) {
        for (std::size_t c : subset.indices) view.data.push_back(matrix.at(r, c));
        view.labels.push_back(matrix.labels[r]);
    }
    return view;
}

double split_accuracy(const SavedModel& model, const SplitView& view, std::size_t n_cols) {
    if (view.n_rows == 0) return 0.0;
    std::size_t hits = 0;
    for (std::size_t r = 0; r < view.n_rows; ++r) {
        const std::span<const double> row(view.data.data() + r * n_cols, n_cols);
        if (model.predict_class(row) == view.labels[r]) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(view.n_rows);
}

SavedModel fit_one(const TrainArgs& args, const PreparedDataset& prepared,
                   const ColumnSubset& subset, const SplitView& train,
                   const std::string& model_kind, SplitCriterion criterion, int max_splits,
                   int learners, int predictors, const std::vector<int>& layers,
                   Activation activation) {
    const std::size_t p = subset.indices.size();
    const int n_classes = static_cast<int>(prepared.matrix.class_names.size());

    SavedModel saved;
    saved.feature_names = subset.names;
    saved.class_names = prepared.matrix.class_names;
    saved.scheme = prepared.info.scheme;
    saved.task = prepared.info.task;

    // leaves from single-class training data still need the full class count
    std::vector<std::size_t> row_ids(train.n_rows);
    std::iota(row_ids.begin(), row_ids.end(), 0);

    if (model_kind == "dt") {
        saved.kind = "tree";
        saved.model = dt_fit_rows(train.data, p, row_ids, train.labels, n_classes, criterion,
                                  max_splits);
    } else if (model_kind == "rf") {
        saved.kind = "forest";
        saved.model = rf_fit(train.data, train.n_rows, p, train.labels, learners, max_splits,
                             predictors, args.seed);
    } else if (model_kind == "mlp") {
        saved.kind = "mlp";
        MlpFitOptions options;
        options.epochs = args.epochs;
        options.learning_rate = args.learning_rate;
        options.batch_size = args.batch_size;
        saved.model = mlp_fit(train.data, train.n_rows, p, train.labels, layers, activation,
                              options, args.seed);
    } else {
        throw CliError("unknown model '" + model_kind + "' (expected dt, rf or mlp)");
    }
    return saved;
}

int cmd_train(const TrainArgs& args) {
    log_info("config: train data=%s model=%s seed=%llu out=%s search=%d", args.data.c_str(),
             args.model.c_str(), (unsigned long long)args.seed, args.out.c_str(),
             args.search ? 1 : 0);
    ensure_writable(args.out, args.force);

    PreparedDataset prepared = load_prepared_dataset(args.data);
    const ColumnSubset subset = resolve_columns(prepared.matrix, args.features, args.data);
    const SplitView train = view_split(prepared.matrix, subset, SplitTag::Train);
    const SplitView val = view_split(prepared.matrix, subset, SplitTag::Val);
    if (train.n_rows == 0) throw CliError("prepared dataset has no training rows");

    const std::size_t p = subset.indices.size();
    const int sqrt_p = std::max(1, static_cast<int>(std::lround(std::sqrt(
                               static_cast<double>(p)))));
    const int default_splits = args.model == "rf" ? 850 : (args.model == "dt" ? 314 : 0);
    const int max_splits = args.max_splits >= 0 ? args.max_splits : default_splits;
    const int predictors =
        args.predictors > 0 ? std::min<int>(args.predictors, static_cast<int>(p)) : sqrt_p;

    SavedModel best;
    double best_val = -1.0;
    std::string best_desc;

    if (!args.search) {
        best = fit_one(args, prepared, subset, train, args.model,
                       parse_split_criterion(args.criterion), max_splits, args.learners,
                       predictors, args.layers, parse_activation(args.activation));
        best_val = split_accuracy(best, val, p);
        best_desc = "as configured";
    } else {
        struct Config {
            SplitCriterion criterion = SplitCriterion::Deviance;
            int max_splits = 314;
            int learners = 10;
            int predictors = 8;
            std::vector<int> layers = {79};
            Activation activation = Activation::Sigmoid;
            std::string describe(const std::string& model) const {
                if (model == "dt")
                    return std::string(to_string(criterion)) + ", splits " +
                           std::to_string(max_splits);
                if (model == "rf")
                    return "learners " + std::to_string(learners) + ", splits " +
                           std::to_string(max_splits) + ", predictors " +
                           std::to_string(predictors);
                return "layers " + std::to_string(layers.size()) + "x" +
                       std::to_string(layers[0]) + ", " + to_string(activation);
            }
        };
        std::vector<Config> grid;
        if (args.model == "dt") {
            for (SplitCriterion crit :
                 {SplitCriterion::Gini, SplitCriterion::Twoing, SplitCriterion::Deviance}) {
                for (int splits : {100, 314, 1000}) {
                    Config config;
                    config.criterion = crit;
                    config.max_splits = splits;
                    grid.push_back(config);
                }
            }
        } else if (args.model == "rf") {
            for (int learners : {10, 54}) {
                for (int splits : {850, 1680}) {
                    for (int preds : {sqrt_p, 8, 17}) {
                        if (preds < 1 || preds > static_cast<int>(p)) continue;
                        Config config;
                        config.learners = learners;
                        config.max_splits = splits;
                        config.predictors = preds;
                        const bool duplicate =
                            std::any_of(grid.begin(), grid.end(), [&](const Config& c) {
                                return c.learners == learners && c.max_splits == splits &&
                                       c.predictors == preds;
                            });
                        if (!duplicate) grid.push_back(config);
                    }
                }
            }
        } else {
            for (int size : {32, 79, 257}) {
                for (Activation act : {Activation::Sigmoid, Activation::Relu}) {
                    Config config;
                    config.layers = {size};
                    config.activation = act;
                    grid.push_back(config);
                }
            }
        }
        for (const Config& config : grid) {
            SavedModel candidate =
                fit_one(args, prepared, subset, train, args.model, config.criterion,
                        config.max_splits, config.learners, config.predictors, config.layers,
                        config.activation);
            const double accuracy = split_accuracy(candidate, val, p);
            log_info("search: %s -> val accuracy %.4f", config.describe(args.model).c_str(),
                     accuracy);
            if (accuracy > best_val) {
                best_val = accuracy;
                best = std::move(candidate);
                best_desc = config.describe(args.model);
            }
        }
    }

    save_model(best, args.out);
    std::cout << "model " << args.model << " (" << best_desc << ") trained on " << train.n_rows
              << " rows, " << p << " features; val accuracy "
              << (val.n_rows > 0 ? best_val : 0.0) << " -> " << args.out << "\n";
    return 0;
}

// ---- evaluate -------------------------------------------------------------

struct EvaluateArgs {
    std::string model;
    std::string data;
    std::string split = "test";
    std::string out;
    bool force = false;
};

SplitTag parse_split_tag(const std::string& text) {
    if (text == "train") return SplitTag::Train;
    if (text == "val") return SplitTag::Val;
    if (text == "test") return SplitTag::Test;
    throw CliError("unknown split '" + text + "' (expected train, val or test)");
}

int cmd_evaluate(const EvaluateArgs& args) {
    log_info("config: evaluate model=%s data=%s split=%s", args.model.c_str(), args.data.c_str(),
             args.split.c_str());
    if (!args.out.empty()) ensure_writable(args.out, args.force);

    const SavedModel model = load_model(args.model);
    PreparedDataset prepared = load_prepared_dataset(args.data);

    ColumnSubset subset;
    subset.names = model.feature_names;
    for (const std::string& name : model.feature_names) {
        const auto it =
            std::find(prepared.matrix.column_names.begin(), prepared.matrix.column_names.end(),
                      name);
        if (it == prepared.matrix.column_names.end())
            throw CliError("model feature '" + name + "' is missing from the dataset");
        subset.indices.push_back(
            static_cast<std::size_t>(it - prepared.matrix.column_names.begin()));
    }

    const SplitView view = view_split(prepared.matrix, subset, parse_split_tag(args.split));
    if (view.n_rows == 0) throw CliError("split '" + args.split + "' has no rows");

    const std::size_t k = model.class_names.size();
    std::vector<int> predicted(view.n_rows);
    for (std::size_t r = 0; r < view.n_rows; ++r) {
        const std::span<const double> row(view.data.data() + r * subset.indices.size(),
                                          subset.indices.size());
        predicted[r] = model.predict_class(row);
    }

    NamedReport report;
    report.model_name = model.kind;
    report.task_name = model.task + "/" + model.scheme + " on " + args.split;
    report.cm = confusion_matrix(view.labels, predicted, k, model.class_names);
    report.metrics = compute_metrics(report.cm);

    const NamedReport reports[] = {report};
    std::cout << render_report_text(reports);
    if (!args.out.empty()) write_file_atomic(args.out, render_report_json(reports));
    return 0;
}

// ---- synth ----------------------------------------------------------------

struct SynthArgs {
    std::string script;
    std::string out;
    std::string manifest;
    std::string attacks;
    bool force = false;
};

int cmd_synth(const SynthArgs& args) {
    log_info("config: synth script=%s out=%s", args.script.c_str(), args.out.c_str());
    const std::string manifest_path =
        args.manifest.empty() ? args.out + ".manifest.json" : args.manifest;
    const std::string attacks_path =
        args.attacks.empty() ? args.out + ".attacks.csv" : args.attacks;
    ensure_writable(args.out, args.force);
    ensure_writable(manifest_path, args.force);
    ensure_writable(attacks_path, args.force);

    const TraceScript script = load_trace_script(args.script);
    const SynthResult result = synth_trace(script);
    write_file_atomic(args.out, result.pcap);
    write_file_atomic(manifest_path, result.manifest.to_json());
    write_file_atomic(attacks_path, synth_attack_log(script));

    std::cout << result.manifest.total_packets << " packets, " << result.manifest.flows.size()
              << " expected flows -> " << args.out << "\n";
    return 0;
}

}  // namespace

int run_command(const std::vector<std::string>& args) {
    CLI::App app{"pcap-to-flow intrusion detection toolkit"};
    app.require_subcommand(1);

    FlowsArgs flows_args;
    auto* flows = app.add_subcommand("flows", "aggregate a pcap capture into flow records");
    flows->add_option("--pcap", flows_args.pcap, "input pcap file")->required();
    flows->add_option("--interval", flows_args.interval, "flow interval in seconds")
        ->capture_default_str();
    flows->add_option("--out", flows_args.out, "output flow CSV")->required();
    flows->add_flag("--force", flows_args.force, "overwrite existing outputs");

    LabelArgs label_args;
    auto* label = app.add_subcommand("label", "apply IT/NST labels from an attack log");
    label->add_option("--flows", label_args.flows, "input flow CSV")->required();
    label->add_option("--attacks", label_args.attacks, "attack log CSV")->required();
    label->add_option("--out", label_args.out, "output labeled CSV")->required();
    label->add_flag("--force", label_args.force, "overwrite existing outputs");

    StatsArgs stats_args;
    auto* stats = app.add_subcommand("stats", "dataset statistics for a flow CSV");
    stats->add_option("--flows", stats_args.flows, "input flow CSV")->required();
    stats->add_option("--out", stats_args.out, "also write a JSON report here");
    stats->add_flag("--force", stats_args.force, "overwrite existing outputs");

    PrepareArgs prepare_args;
    auto* prepare = app.add_subcommand("prepare", "clean, split and normalize a labeled CSV");
    prepare->add_option("--flows", prepare_args.flows, "labeled flow CSV")->required();
    prepare->add_option("--scheme", prepare_args.scheme, "labeling scheme: IT or NST")
        ->capture_default_str();
    prepare->add_option("--task", prepare_args.task, "detect or identify")
        ->capture_default_str();
    prepare->add_option("--seed", prepare_args.seed, "split permutation seed")
        ->capture_default_str();
    prepare->add_option("--fractions", prepare_args.fractions,
                        "train,val,test fractions (three values)")
        ->expected(3);
    prepare->add_flag("--chronological", prepare_args.chronological,
                      "split by file order instead of a seeded permutation");
    prepare->add_option("--pca", prepare_args.pca_out,
                        "also write a 2-D PCA projection CSV here");
    prepare->add_option("--out", prepare_args.out, "output dataset directory")->required();
    prepare->add_flag("--force", prepare_args.force, "overwrite existing outputs");

    SelectArgs select_args;
    auto* select = app.add_subcommand("select", "MRMR feature ranking and selection");
    select->add_option("--data", select_args.data, "prepared dataset directory")->required();
    select->add_option("--tau", select_args.tau, "selection threshold")->capture_default_str();
    select->add_option("--bins", select_args.bins, "discretization bins")->capture_default_str();
    select->add_flag("--force", select_args.force, "overwrite existing outputs");

    TrainArgs train_args;
    auto* train = app.add_subcommand("train", "fit a classifier on the training split");
    train->add_option("--data", train_args.data, "prepared dataset directory")->required();
    train->add_option("--model", train_args.model, "dt, rf or mlp")->capture_default_str();
    train->add_option("--features", train_args.features,
                      "file listing feature names (defaults to the select output if present)");
    train->add_option("--out", train_args.out, "output model file")->required();
    train->add_option("--seed", train_args.seed, "training seed")->capture_default_str();
    train->add_flag("--search", train_args.search,
                    "run the reduced hyper-parameter search on the validation split");
    train->add_option("--criterion", train_args.criterion, "dt: gini, twoing or deviance")
        ->capture_default_str();
    train->add_option("--max-splits", train_args.max_splits,
                      "dt/rf: split budget (default dt 314, rf 850)");
    train->add_option("--learners", train_args.learners, "rf: number of trees")
        ->capture_default_str();
    train->add_option("--predictors", train_args.predictors,
                      "rf: features sampled per split (0 = round(sqrt(p)))");
    train->add_option("--layers", train_args.layers, "mlp: hidden layer sizes");
    train->add_option("--activation", train_args.activation,
                      "mlp: relu, tanh, sigmoid or none")
        ->capture_default_str();
    train->add_option("--epochs", train_args.epochs, "mlp: training epochs")
        ->capture_default_str();
    train->add_option("--lr", train_args.learning_rate, "mlp: learning rate")
        ->capture_default_str();
    train->add_option("--batch", train_args.batch_size, "mlp: mini-batch size")
        ->capture_default_str();
    train->add_flag("--force", train_args.force, "overwrite existing outputs");

    EvaluateArgs evaluate_args;
    auto* evaluate = app.add_subcommand("evaluate", "metrics for a trained model on a split");
    evaluate->add_option("--model", evaluate_args.model, "model file")->required();
    evaluate->add_option("--data", evaluate_args.data, "prepared dataset directory")->required();
    evaluate->add_option("--split", evaluate_args.split, "train, val or test")
        ->capture_default_str();
    evaluate->add_option("--out", evaluate_args.out, "also write a JSON report here");
    evaluate->add_flag("--force", evaluate_args.force, "overwrite existing outputs");

    SynthArgs synth_args;
    auto* synth = app.add_subcommand("synth", "generate a synthetic capture from a script");
    synth->add_option("--script", synth_args.script, "trace script file")->required();
    synth->add_option("--out", synth_args.out, "output pcap path")->required();
    synth->add_option("--manifest", synth_args.manifest,
                      "manifest path (default: <out>.manifest.json)");
    synth->add_option("--attacks", synth_args.attacks,
                      "attack log path (default: <out>.attacks.csv)");
    synth->add_flag("--force", synth_args.force, "overwrite existing outputs");

    std::vector<const char*> argv;
    argv.push_back("flowids");
    for (const std::string& arg : args) argv.push_back(arg.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (flows->parsed()) return cmd_flows(flows_args);
        if (label->parsed()) return cmd_label(label_args);
        if (stats->parsed()) return cmd_stats(stats_args);
        if (prepare->parsed()) return cmd_prepare(prepare_args);
        if (select->parsed()) return cmd_select(select_args);
        if (train->parsed()) return cmd_train(train_args);
        if (evaluate->parsed()) return cmd_evaluate(evaluate_args);
        if (synth->parsed()) return cmd_synth(synth_args);
    } catch (const std::exception& e) {
        log_error("%s", e.what());
        return 1;
    }
    return 0;
}

}  // namespace flowids
