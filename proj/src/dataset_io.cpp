#include "flowids/dataset_io.hpp"

#include <charconv>
#include <filesystem>

#include <nlohmann/json.hpp>

#include "flowids/csv.hpp"
#include "flowids/io_util.hpp"

namespace flowids {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

const char* split_name(SplitTag tag) {
    switch (tag) {
        case SplitTag::Train: return "train";
        case SplitTag::Val: return "val";
        case SplitTag::Test: return "test";
        case SplitTag::None: return "none";
    }
    return "none";
}

SplitTag split_from_name(const std::string& name) {
    if (name == "train") return SplitTag::Train;
    if (name == "val") return SplitTag::Val;
    if (name == "test") return SplitTag::Test;
    return SplitTag::None;
}

std::string format_exact(double value) {
    // shortest round-trip form, locale-independent
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    if (ec != std::errc()) return "0";
    return std::string(buf, ptr);
}

}  // namespace

void save_prepared_dataset(const std::string& dir, const DatasetMatrix& matrix,
                           const NormalizationParams& params, const PreparedDatasetInfo& info) {
    fs::create_directories(dir);

    std::string csv = "split,label";
    for (const std::string& name : matrix.column_names) {
        csv.push_back(',');
        csv += csv_escape(name);
    }
    csv.push_back('\n');
    for (std::size_t r = 0; r < matrix.n_rows; ++r) {
        csv += split_name(matrix.split.empty() ? SplitTag::None : matrix.split[r]);
        csv.push_back(',');
        csv += format_int(matrix.labels[r]);
        for (std::size_t c = 0; c < matrix.n_cols; ++c) {
            csv.push_back(',');
            csv += format_exact(matrix.at(r, c));
        }
        csv.push_back('\n');
    }
    write_file_atomic((fs::path(dir) / "dataset.csv").string(), csv);

    json meta;
    meta["format"] = "flowids-dataset";
    meta["version"] = 1;
    meta["scheme"] = info.scheme;
    meta["task"] = info.task;
    meta["seed"] = info.seed;
    meta["fractions"] = info.fractions;
    meta["chronological"] = info.chronological;
    meta["columns"] = matrix.column_names;
    meta["class_names"] = matrix.class_names;
    meta["rows"] = matrix.n_rows;
    write_file_atomic((fs::path(dir) / "meta.json").string(), meta.dump(2));
    write_file_atomic((fs::path(dir) / "normalization.json").string(), params.to_json());
}

PreparedDataset load_prepared_dataset(const std::string& dir) {
    PreparedDataset prepared;

    const json meta = json::parse(read_text_file((fs::path(dir) / "meta.json").string()));
    if (meta.value("format", "") != "flowids-dataset")
        throw DatasetError(dir + "/meta.json is not a flowids dataset descriptor");
    prepared.info.scheme = meta.at("scheme").get<std::string>();
    prepared.info.task = meta.at("task").get<std::string>();
    prepared.info.seed = meta.at("seed").get<std::uint64_t>();
    const auto fractions = meta.at("fractions").get<std::vector<double>>();
    for (std::size_t i = 0; i < 3 && i < fractions.size(); ++i)
        prepared.info.fractions[i] = fractions[i];
    prepared.info.chronological = meta.value("chronological", false);

    DatasetMatrix& matrix = prepared.matrix;
    matrix.column_names = meta.at("columns").get<std::vector<std::string>>();
    matrix.class_names = meta.at("class_names").get<std::vector<std::string>>();
    matrix.n_cols = matrix.column_names.size();

    const auto lines = split_lines(read_text_file((fs::path(dir) / "dataset.csv").string()));
    if (lines.empty()) throw DatasetError(dir + "/dataset.csv is empty");
    const auto header = csv_split(lines[0]);
    if (header.size() != matrix.n_cols + 2)
        throw DatasetError(dir + "/dataset.csv header does not match meta.json columns");

    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (lines[i].empty()) continue;
        const auto cells = csv_split(lines[i]);
        if (cells.size() != matrix.n_cols + 2)
            throw DatasetError(dir + "/dataset.csv row " + std::to_string(i + 1) +
                               " has the wrong cell count");
        matrix.split.push_back(split_from_name(cells[0]));
        matrix.labels.push_back(static_cast<int>(parse_int(cells[1]).value_or(0)));
        for (std::size_t c = 0; c < matrix.n_cols; ++c)
            matrix.data.push_back(parse_double(cells[c + 2]).value_or(0.0));
        ++matrix.n_rows;
    }

    prepared.normalization = NormalizationParams::from_json(
        read_text_file((fs::path(dir) / "normalization.json").string()));
    return prepared;
}

}  // namespace flowids
