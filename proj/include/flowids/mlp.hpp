#pragma once

// Fully connected classifier: 1-3 hidden layers, softmax output, cross-entropy
// loss minimized by plain mini-batch gradient descent with seeded shuffling.
// Glorot-uniform init. Training loss is recorded per epoch.

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "flowids/rng.hpp"

namespace flowids {

enum class Activation { Relu, Tanh, Sigmoid, None };

const char* to_string(Activation activation);
Activation parse_activation(const std::string& text);

struct MlpDivergedError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct MlpLayer {
    int in = 0;
    int out = 0;
    std::vector<double> weights;  // out x in, row-major
    std::vector<double> biases;   // out
};

struct MlpModel {
    std::vector<MlpLayer> layers;  // hidden layers, then the output layer
    Activation activation = Activation::Sigmoid;
    int n_features = 0;
    int n_classes = 0;
    std::uint64_t seed = 0;
    std::vector<double> epoch_losses;

    std::vector<double> probabilities(std::span<const double> row) const;

    // flat parameter view for persistence and the finite-difference oracle:
    // per layer, weights row-major, then biases
    std::size_t param_count() const;
    double get_param(std::size_t index) const;
    void set_param(std::size_t index, double value);
};

MlpModel mlp_init(int n_features, int n_classes, const std::vector<int>& hidden_sizes,
                  Activation activation, std::uint64_t seed);

// Mean cross-entropy over the given rows.
double mlp_loss(const MlpModel& model, std::span<const double> data, std::size_t n_cols,
                std::span<const std::size_t> rows, std::span<const int> labels);

// Loss and its gradient (flat, aligned with get_param indexing) over a batch.
double mlp_loss_and_gradient(const MlpModel& model, std::span<const double> data,
                             std::size_t n_cols, std::span<const std::size_t> rows,
                             std::span<const int> labels, std::vector<double>& gradient);

struct MlpFitOptions {
    int epochs = 40;
    double learning_rate = 0.05;
    int batch_size = 32;
};

MlpModel mlp_fit(std::span<const double> data, std::size_t n_rows, std::size_t n_cols,
                 std::span<const int> labels, const std::vector<int>& hidden_sizes,
                 Activation activation, const MlpFitOptions& options, std::uint64_t seed);

}  // namespace flowids
