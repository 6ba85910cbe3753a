#include "flowids/model_io.hpp"

#include <nlohmann/json.hpp>

#include "flowids/io_util.hpp"

namespace flowids {

using nlohmann::json;

namespace {

constexpr int kFormatVersion = 1;

json tree_to_json(const TreeModel& tree) {
    json doc;
    doc["criterion"] = to_string(tree.criterion);
    doc["max_splits"] = tree.max_splits;
    doc["n_classes"] = tree.n_classes;
    doc["n_features"] = tree.n_features;
    json nodes = json::array();
    for (const TreeNode& node : tree.nodes) {
        if (node.feature >= 0) {
            nodes.push_back({{"f", node.feature},
                             {"t", node.threshold},
                             {"l", node.left},
                             {"r", node.right}});
        } else {
            nodes.push_back({{"p", node.probs}});
        }
    }
    doc["nodes"] = std::move(nodes);
    return doc;
}

TreeModel tree_from_json(const json& doc) {
    TreeModel tree;
    tree.criterion = parse_split_criterion(doc.at("criterion").get<std::string>());
    tree.max_splits = doc.at("max_splits").get<int>();
    tree.n_classes = doc.at("n_classes").get<int>();
    tree.n_features = doc.at("n_features").get<int>();
    for (const json& item : doc.at("nodes")) {
        TreeNode node;
        if (item.contains("f")) {
            node.feature = item.at("f").get<int>();
            node.threshold = item.at("t").get<double>();
            node.left = item.at("l").get<int>();
            node.right = item.at("r").get<int>();
        } else {
            node.probs = item.at("p").get<std::vector<double>>();
        }
        tree.nodes.push_back(std::move(node));
    }
    return tree;
}

json forest_to_json(const ForestModel& forest) {
    json doc;
    doc["n_classes"] = forest.n_classes;
    doc["n_features"] = forest.n_features;
    doc["predictors_to_sample"] = forest.predictors_to_sample;
    doc["seed"] = forest.seed;
    doc["bootstrap"] = forest.bootstrap;
    doc["trees"] = json::array();
    for (const TreeModel& tree : forest.trees) doc["trees"].push_back(tree_to_json(tree));
    return doc;
}

ForestModel forest_from_json(const json& doc) {
    ForestModel forest;
    forest.n_classes = doc.at("n_classes").get<int>();
    forest.n_features = doc.at("n_features").get<int>();
    forest.predictors_to_sample = doc.at("predictors_to_sample").get<int>();
    forest.seed = doc.at("seed").get<std::uint64_t>();
    forest.bootstrap = doc.at("bootstrap").get<bool>();
    for (const json& item : doc.at("trees")) forest.trees.push_back(tree_from_json(item));
    return forest;
}

json mlp_to_json(const MlpModel& mlp) {
    json doc;
    doc["activation"] = to_string(mlp.activation);
    doc["n_classes"] = mlp.n_classes;
    doc["n_features"] = mlp.n_features;
    doc["seed"] = mlp.seed;
    doc["epoch_losses"] = mlp.epoch_losses;
    doc["layers"] = json::array();
    for (const MlpLayer& layer : mlp.layers) {
        doc["layers"].push_back({{"in", layer.in},
                                 {"out", layer.out},
                                 {"weights", layer.weights},
                                 {"biases", layer.biases}});
    }
    return doc;
}

MlpModel mlp_from_json(const json& doc) {
    MlpModel mlp;
    mlp.activation = parse_activation(doc.at("activation").get<std::string>());
    mlp.n_classes = doc.at("n_classes").get<int>();
    mlp.n_features = doc.at("n_features").get<int>();
    mlp.seed = doc.at("seed").get<std::uint64_t>();
    mlp.epoch_losses = doc.at("epoch_losses").get<std::vector<double>>();
    for (const json& item : doc.at("layers")) {
        MlpLayer layer;
        layer.in = item.at("in").get<int>();
        layer.out = item.at("out").get<int>();
        layer.weights = item.at("weights").get<std::vector<double>>();
        layer.biases = item.at("biases").get<std::vector<double>>();
        mlp.layers.push_back(std::move(layer));
    }
    return mlp;
}

}  // namespace

std::vector<double> SavedModel::probabilities(std::span<const double> row) const {
    if (const auto* tree = std::get_if<TreeModel>(&model)) return tree->probabilities(row);
    if (const auto* forest = std::get_if<ForestModel>(&model)) return forest->probabilities(row);
    return std::get<MlpModel>(model).probabilities(row);
}

int SavedModel::predict_class(std::span<const double> row) const {
    const std::vector<double> probs = probabilities(row);
    return argmax_class(probs);
}

std::string model_to_json(const SavedModel& model) {
    json doc;
    doc["format"] = "flowids-model";
    doc["version"] = kFormatVersion;
    doc["kind"] = model.kind;
    doc["feature_names"] = model.feature_names;
    doc["class_names"] = model.class_names;
    doc["scheme"] = model.scheme;
    doc["task"] = model.task;
    if (model.kind == "tree") {
        doc["model"] = tree_to_json(std::get<TreeModel>(model.model));
    } else if (model.kind == "forest") {
        doc["model"] = forest_to_json(std::get<ForestModel>(model.model));
    } else if (model.kind == "mlp") {
        doc["model"] = mlp_to_json(std::get<MlpModel>(model.model));
    } else {
        throw ModelIoError("unknown model kind '" + model.kind + "'");
    }
    return doc.dump();
}

SavedModel model_from_json(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw ModelIoError(std::string("model file is not valid JSON: ") + e.what());
    }
    if (doc.value("format", "") != "flowids-model")
        throw ModelIoError("not a flowids model file (missing format tag)");
    if (doc.value("version", 0) != kFormatVersion)
        throw ModelIoError("unsupported model format version " +
                           std::to_string(doc.value("version", 0)));

    SavedModel model;
    model.kind = doc.at("kind").get<std::string>();
    model.feature_names = doc.at("feature_names").get<std::vector<std::string>>();
    model.class_names = doc.at("class_names").get<std::vector<std::string>>();
    model.scheme = doc.value("scheme", "");
    model.task = doc.value("task", "");
    if (model.kind == "tree") {
        model.model = tree_from_json(doc.at("model"));
    } else if (model.kind == "forest") {
        model.model = forest_from_json(doc.at("model"));
    } else if (model.kind == "mlp") {
        model.model = mlp_from_json(doc.at("model"));
    } else {
        throw ModelIoError("unknown model kind '" + model.kind + "'");
    }
    return model;
}

void save_model(const SavedModel& model, const std::string& path) {
    write_file_atomic(path, model_to_json(model));
}

SavedModel load_model(const std::string& path) {
    try {
        return model_from_json(read_text_file(path));
    } catch (const ModelIoError& e) {
        throw ModelIoError(path + ": " + e.what());
    }
}

}  // namespace flowids
