#pragma once

// Labeled flow CSV -> model-ready matrices: missing-value policy, column
// drops, label selection, seeded train/val/test split, min-max normalization,
// and dataset statistics.

#include <array>
#include <cstdint>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "flowids/flow.hpp"

namespace flowids {

struct DatasetError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class LabelScheme { It, Nst };
enum class TaskKind { Detect, Identify };

const char* to_string(LabelScheme scheme);
const char* to_string(TaskKind task);
LabelScheme parse_label_scheme(const std::string& text);  // "IT" | "NST"
TaskKind parse_task_kind(const std::string& text);        // "detect" | "identify"

enum class SplitTag : std::uint8_t { None = 0, Train = 1, Val = 2, Test = 3 };

struct DatasetMatrix {
    std::vector<std::string> column_names;  // p feature columns
    std::size_t n_rows = 0;
    std::size_t n_cols = 0;
    std::vector<double> data;  // row-major, n_rows * n_cols
    std::vector<int> labels;
    std::vector<std::string> class_names;  // class id -> display name
    std::vector<SplitTag> split;           // empty until split_dataset runs

    double& at(std::size_t row, std::size_t col) { return data[row * n_cols + col]; }
    double at(std::size_t row, std::size_t col) const { return data[row * n_cols + col]; }
    std::span<const double> row(std::size_t r) const {
        return std::span<const double>(data.data() + r * n_cols, n_cols);
    }
    std::vector<std::size_t> rows_with_tag(SplitTag tag) const;
};

// Missing TCP cells become 0; sAddress/rAddress/start/end/startOffset/endOffset
// are dropped; protocol is ordinal-encoded; the label column follows the
// scheme (IT/NST) and task (binary detect / multi-class identify). Class ids:
// detect -> {0: normal, 1: attack}; identify -> normal is 0, attack names
// sorted lexicographically from 1.
DatasetMatrix clean_dataset(std::span<const FlowRecord> flows, TaskKind task, LabelScheme scheme);

// Seeded uniform permutation, then contiguous train/val/test assignment with
// largest-remainder rounding.
void split_dataset(DatasetMatrix& matrix, std::array<double, 3> fractions, std::uint64_t seed);

// Rows stay in file (chronological) order; the first fraction becomes train.
void split_dataset_chronological(DatasetMatrix& matrix, std::array<double, 3> fractions);

std::array<std::size_t, 3> split_sizes_largest_remainder(std::size_t n,
                                                         std::array<double, 3> fractions);

struct NormalizationParams {
    std::vector<std::string> column_names;
    std::vector<double> col_min;
    std::vector<double> col_max;

    std::string to_json() const;
    static NormalizationParams from_json(const std::string& text);
};

// Min/Max learned from training rows only; every row is transformed by
// (v - min) / (max - min); constant columns map to 0; no clamping.
NormalizationParams minmax_normalize(DatasetMatrix& matrix);
void apply_normalization(DatasetMatrix& matrix, const NormalizationParams& params);

struct SchemeStats {
    std::map<std::string, std::uint64_t> class_counts;  // multi-class label -> flows
    std::uint64_t attack_flows = 0;
};

struct FeatureStats {
    std::string name;
    double min = 0.0, max = 0.0, mean = 0.0;
    std::uint64_t present = 0;  // cells that were not empty
};

struct DatasetStatsReport {
    std::uint64_t total_flows = 0;
    SchemeStats it;
    SchemeStats nst;
    std::map<std::string, std::uint64_t> protocol_counts;
    std::vector<FeatureStats> features;

    std::string to_text() const;
    std::string to_json() const;
};

DatasetStatsReport dataset_stats(std::span<const FlowRecord> flows);

}  // namespace flowids
