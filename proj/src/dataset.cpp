#include "flowids/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "flowids/csv.hpp"
#include "flowids/flow_schema.hpp"
#include "flowids/rng.hpp"

namespace flowids {

using nlohmann::json;

const char* to_string(LabelScheme scheme) { return scheme == LabelScheme::It ? "IT" : "NST"; }
const char* to_string(TaskKind task) { return task == TaskKind::Detect ? "detect" : "identify"; }

LabelScheme parse_label_scheme(const std::string& text) {
    if (text == "IT" || text == "it") return LabelScheme::It;
    if (text == "NST" || text == "nst") return LabelScheme::Nst;
    throw DatasetError("unknown labeling scheme '" + text + "' (expected IT or NST)");
}

TaskKind parse_task_kind(const std::string& text) {
    if (text == "detect") return TaskKind::Detect;
    if (text == "identify") return TaskKind::Identify;
    throw DatasetError("unknown task '" + text + "' (expected detect or identify)");
}

std::vector<std::size_t> DatasetMatrix::rows_with_tag(SplitTag tag) const {
    std::vector<std::size_t> rows;
    for (std::size_t r = 0; r < split.size(); ++r) {
        if (split[r] == tag) rows.push_back(r);
    }
    return rows;
}

namespace {

// stable ordinal codes for the protocols the flow engine emits; anything else
// is appended in first-appearance order
int protocol_code(const std::string& protocol, std::vector<std::string>& extra) {
    if (protocol == "ARP") return 0;
    if (protocol == "IPV4-TCP") return 1;
    if (protocol == "IPV4-UDP") return 2;
    if (protocol == "IPV4-OTHER") return 3;
    for (std::size_t i = 0; i < extra.size(); ++i) {
        if (extra[i] == protocol) return static_cast<int>(4 + i);
    }
    extra.push_back(protocol);
    return static_cast<int>(3 + extra.size());
}

}  // namespace

DatasetMatrix clean_dataset(std::span<const FlowRecord> flows, TaskKind task, LabelScheme scheme) {
    DatasetMatrix matrix;
    const auto& columns = cleaned_feature_columns();
    const auto& names = flow_column_names();
    for (std::size_t col : columns) matrix.column_names.emplace_back(names[col]);
    matrix.n_cols = columns.size();
    matrix.n_rows = flows.size();
    matrix.data.resize(matrix.n_rows * matrix.n_cols, 0.0);
    matrix.labels.resize(matrix.n_rows, 0);

    bool any_label = false;
    for (const FlowRecord& flow : flows) {
        if (flow.labeled) {
            any_label = true;
            break;
        }
    }
    if (!flows.empty() && !any_label) {
        throw DatasetError(std::string("label column ") + to_string(scheme) +
                           " is entirely empty; label the flows first");
    }

    if (task == TaskKind::Detect) {
        matrix.class_names = {"normal", "attack"};
    } else {
        std::set<std::string> attack_names;
        for (const FlowRecord& flow : flows) {
            const std::string& name = scheme == LabelScheme::It ? flow.it_m : flow.nst_m;
            if (name != "normal" && !name.empty()) attack_names.insert(name);
        }
        matrix.class_names.emplace_back("normal");
        matrix.class_names.insert(matrix.class_names.end(), attack_names.begin(),
                                  attack_names.end());
    }

    std::vector<std::string> extra_protocols;
    for (std::size_t r = 0; r < flows.size(); ++r) {
        const FlowRecord& flow = flows[r];
        for (std::size_t c = 0; c < columns.size(); ++c) {
            const std::size_t col = columns[c];
            double value = 0.0;
            if (col == 2) {
                value = static_cast<double>(protocol_code(flow.protocol, extra_protocols));
            } else if (col < kFirstTcpColumn || flow.has_tcp) {
                value = flow.numeric_cell(col);
            }  // missing TCP cells stay 0
            matrix.at(r, c) = value;
        }
        if (task == TaskKind::Detect) {
            matrix.labels[r] = (scheme == LabelScheme::It ? flow.it_b : flow.nst_b) != 0 ? 1 : 0;
        } else {
            const std::string& name = scheme == LabelScheme::It ? flow.it_m : flow.nst_m;
            const auto it = std::find(matrix.class_names.begin(), matrix.class_names.end(),
                                      name.empty() ? std::string("normal") : name);
            matrix.labels[r] = static_cast<int>(it - matrix.class_names.begin());
        }
    }
    return matrix;
}

std::array<std::size_t, 3> split_sizes_largest_remainder(std::size_t n,
                                                         std::array<double, 3> fractions) {
    const double sum = fractions[0] + fractions[1] + fractions[2];
    if (std::abs(sum - 1.0) > 1e-9)
        throw DatasetError("split fractions must sum to 1, got " + format_float6(sum));

    std::array<std::size_t, 3> sizes{};
    std::array<double, 3> remainders{};
    std::size_t assigned = 0;
    for (int i = 0; i < 3; ++i) {
        const double exact = static_cast<double>(n) * fractions[i];
        sizes[i] = static_cast<std::size_t>(std::floor(exact));
        remainders[i] = exact - std::floor(exact);
        assigned += sizes[i];
    }
    std::array<int, 3> order = {0, 1, 2};
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return remainders[a] > remainders[b]; });
    for (std::size_t left = n - assigned, i = 0; left > 0; --left, ++i)
        ++sizes[order[i % 3]];
    return sizes;
}

namespace {

void assign_split(DatasetMatrix& matrix, const std::vector<std::size_t>& order,
                  std::array<double, 3> fractions) {
    const auto sizes = split_sizes_largest_remainder(matrix.n_rows, fractions);
    matrix.split.assign(matrix.n_rows, SplitTag::None);
    std::size_t pos = 0;
    const SplitTag tags[3] = {SplitTag::Train, SplitTag::Val, SplitTag::Test};
    for (int part = 0; part < 3; ++part) {
        for (std::size_t i = 0; i < sizes[part]; ++i, ++pos) matrix.split[order[pos]] = tags[part];
    }
}

}  // namespace

void split_dataset(DatasetMatrix& matrix, std::array<double, 3> fractions, std::uint64_t seed) {
    if (matrix.n_rows < 3) throw DatasetError("need at least 3 rows to split train/val/test");
    std::vector<std::size_t> order(matrix.n_rows);
    std::iota(order.begin(), order.end(), 0);
    Rng rng(seed);
    rng.shuffle(order);
    assign_split(matrix, order, fractions);
}

void split_dataset_chronological(DatasetMatrix& matrix, std::array<double, 3> fractions) {
    if (matrix.n_rows < 3) throw DatasetError("need at least 3 rows to split train/val/test");
    std::vector<std::size_t> order(matrix.n_rows);
    std::iota(order.begin(), order.end(), 0);
    assign_split(matrix, order, fractions);
}

NormalizationParams minmax_normalize(DatasetMatrix& matrix) {
    if (matrix.split.size() != matrix.n_rows)
        throw DatasetError("split tags must be assigned before normalization");
    NormalizationParams params;
    params.column_names = matrix.column_names;
    params.col_min.assign(matrix.n_cols, 0.0);
    params.col_max.assign(matrix.n_cols, 0.0);

    bool first = true;
    for (std::size_t r = 0; r < matrix.n_rows; ++r) {
        if (matrix.split[r] != SplitTag::Train) continue;
        for (std::size_t c = 0; c < matrix.n_cols; ++c) {
            const double v = matrix.at(r, c);
            if (first) {
                params.col_min[c] = v;
                params.col_max[c] = v;
            } else {
                params.col_min[c] = std::min(params.col_min[c], v);
                params.col_max[c] = std::max(params.col_max[c], v);
            }
        }
        first = false;
    }
    apply_normalization(matrix, params);
    return params;
}

void apply_normalization(DatasetMatrix& matrix, const NormalizationParams& params) {
    if (params.col_min.size() != matrix.n_cols)
        throw DatasetError("normalization params do not match the matrix width");
    for (std::size_t c = 0; c < matrix.n_cols; ++c) {
        const double lo = params.col_min[c];
        const double range = params.col_max[c] - lo;
        for (std::size_t r = 0; r < matrix.n_rows; ++r) {
            matrix.at(r, c) = range > 0.0 ? (matrix.at(r, c) - lo) / range : 0.0;
        }
    }
}

std::string NormalizationParams::to_json() const {
    json doc;
    doc["kind"] = "minmax-normalization";
    doc["columns"] = json::array();
    for (std::size_t i = 0; i < column_names.size(); ++i) {
        doc["columns"].push_back(
            {{"name", column_names[i]}, {"min", col_min[i]}, {"max", col_max[i]}});
    }
    return doc.dump(2);
}

NormalizationParams NormalizationParams::from_json(const std::string& text) {
    const json doc = json::parse(text);
    NormalizationParams params;
    for (const auto& col : doc.at("columns")) {
        params.column_names.push_back(col.at("name").get<std::string>());
        params.col_min.push_back(col.at("min").get<double>());
        params.col_max.push_back(col.at("max").get<double>());
    }
    return params;
}

DatasetStatsReport dataset_stats(std::span<const FlowRecord> flows) {
    DatasetStatsReport report;
    report.total_flows = flows.size();

    const auto& names = flow_column_names();
    std::vector<double> sums(kFirstLabelColumn, 0.0);
    std::vector<double> mins(kFirstLabelColumn, 0.0);
    std::vector<double> maxs(kFirstLabelColumn, 0.0);
    std::vector<std::uint64_t> present(kFirstLabelColumn, 0);

    for (const FlowRecord& flow : flows) {
        ++report.protocol_counts[flow.protocol];
        ++report.it.class_counts[flow.labeled ? flow.it_m : "unlabeled"];
        ++report.nst.class_counts[flow.labeled ? flow.nst_m : "unlabeled"];
        if (flow.labeled && flow.it_b != 0) ++report.it.attack_flows;
        if (flow.labeled && flow.nst_b != 0) ++report.nst.attack_flows;

        for (std::size_t col = kFirstGeneralColumn; col < kFirstLabelColumn; ++col) {
            if (col >= kFirstTcpColumn && !flow.has_tcp) continue;
            const double v = flow.numeric_cell(col);
            if (present[col] == 0) {
                mins[col] = v;
                maxs[col] = v;
            } else {
                mins[col] = std::min(mins[col], v);
                maxs[col] = std::max(maxs[col], v);
            }
            sums[col] += v;
            ++present[col];
        }
    }

    for (std::size_t col = kFirstGeneralColumn; col < kFirstLabelColumn; ++col) {
        FeatureStats fs;
        fs.name = std::string(names[col]);
        fs.present = present[col];
        if (present[col] > 0) {
            fs.min = mins[col];
            fs.max = maxs[col];
            fs.mean = sums[col] / static_cast<double>(present[col]);
        }
        report.features.push_back(std::move(fs));
    }
    return report;
}

namespace {

void append_scheme(std::ostringstream& out, const char* title, const SchemeStats& stats,
                   std::uint64_t total) {
    out << title << " labeling:\n";
    for (const auto& [name, count] : stats.class_counts) {
        out << "  " << name << ": " << count << "\n";
    }
    out << "  attack flows: " << stats.attack_flows << " of " << total << "\n";
}

}  // namespace

std::string DatasetStatsReport::to_text() const {
    std::ostringstream out;
    out << "Total flows: " << total_flows << "\n\n";
    out << "Protocols:\n";
    for (const auto& [name, count] : protocol_counts) out << "  " << name << ": " << count << "\n";
    out << "\n";
    append_scheme(out, "IT", it, total_flows);
    out << "\n";
    append_scheme(out, "NST", nst, total_flows);
    out << "\nFeatures (over non-empty cells):\n";
    out << "  feature            min           max           mean\n";
    for (const FeatureStats& fs : features) {
        out << "  " << fs.name;
        for (std::size_t pad = fs.name.size(); pad < 16; ++pad) out << ' ';
        out << "  " << format_float6(fs.min) << "  " << format_float6(fs.max) << "  "
            << format_float6(fs.mean) << "\n";
    }
    return out.str();
}

std::string DatasetStatsReport::to_json() const {
    json doc;
    doc["total_flows"] = total_flows;
    doc["protocols"] = protocol_counts;
    doc["it"] = {{"classes", it.class_counts}, {"attack_flows", it.attack_flows}};
    doc["nst"] = {{"classes", nst.class_counts}, {"attack_flows", nst.attack_flows}};
    doc["features"] = json::array();
    for (const FeatureStats& fs : features) {
        doc["features"].push_back({{"name", fs.name},
                                   {"min", fs.min},
                                   {"max", fs.max},
                                   {"mean", fs.mean},
                                   {"present", fs.present}});
    }
    return doc.dump(2);
}

}  // namespace flowids
