#pragma once

// Versioned JSON model artifacts. Doubles round-trip exactly, so a reloaded
// model predicts bit-identically.

#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "flowids/forest.hpp"
#include "flowids/mlp.hpp"
#include "flowids/tree.hpp"

namespace flowids {

struct ModelIoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SavedModel {
    std::string kind;  // "tree" | "forest" | "mlp"
    std::vector<std::string> feature_names;  // columns the model was trained on
    std::vector<std::string> class_names;
    std::string scheme;  // IT | NST (informational)
    std::string task;    // detect | identify (informational)
    std::variant<TreeModel, ForestModel, MlpModel> model;

    std::vector<double> probabilities(std::span<const double> row) const;
    int predict_class(std::span<const double> row) const;
};

std::string model_to_json(const SavedModel& model);
SavedModel model_from_json(const std::string& text);

void save_model(const SavedModel& model, const std::string& path);
SavedModel load_model(const std::string& path);

}  // namespace flowids
