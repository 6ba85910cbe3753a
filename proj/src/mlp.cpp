#include "flowids/mlp.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace flowids {

const char* to_string(Activation activation) {
    switch (activation) {
        case Activation::Relu: return "relu";
        case Activation::Tanh: return "tanh";
        case Activation::Sigmoid: return "sigmoid";
        case Activation::None: return "none";
    }
    return "?";
}

Activation parse_activation(const std::string& text) {
    if (text == "relu") return Activation::Relu;
    if (text == "tanh") return Activation::Tanh;
    if (text == "sigmoid") return Activation::Sigmoid;
    if (text == "none") return Activation::None;
    throw std::invalid_argument("unknown activation '" + text +
                                "' (expected relu, tanh, sigmoid or none)");
}

namespace {

double activate(Activation activation, double z) {
    switch (activation) {
        case Activation::Relu: return z > 0.0 ? z : 0.0;
        case Activation::Tanh: return std::tanh(z);
        case Activation::Sigmoid: return 1.0 / (1.0 + std::exp(-z));
        case Activation::None: return z;
    }
    return z;
}

// derivative expressed through the activation output
double activate_grad(Activation activation, double a) {
    switch (activation) {
        case Activation::Relu: return a > 0.0 ? 1.0 : 0.0;
        case Activation::Tanh: return 1.0 - a * a;
        case Activation::Sigmoid: return a * (1.0 - a);
        case Activation::None: return 1.0;
    }
    return 1.0;
}

void softmax_inplace(std::vector<double>& z) {
    const double peak = *std::max_element(z.begin(), z.end());
    double sum = 0.0;
    for (double& v : z) {
        v = std::exp(v - peak);
        sum += v;
    }
    for (double& v : z) v /= sum;
}

// forward pass keeping every layer's activation output
void forward(const MlpModel& model, std::span<const double> input,
             std::vector<std::vector<double>>& activations) {
    activations.resize(model.layers.size() + 1);
    activations[0].assign(input.begin(), input.end());
    for (std::size_t l = 0; l < model.layers.size(); ++l) {
        const MlpLayer& layer = model.layers[l];
        auto& out = activations[l + 1];
        out.assign(static_cast<std::size_t>(layer.out), 0.0);
        const auto& in = activations[l];
        for (int o = 0; o < layer.out; ++o) {
            double z = layer.biases[static_cast<std::size_t>(o)];
            const double* w = layer.weights.data() + static_cast<std::size_t>(o) * in.size();
            for (std::size_t i = 0; i < in.size(); ++i) z += w[i] * in[i];
            out[static_cast<std::size_t>(o)] = z;
        }
        if (l + 1 < model.layers.size()) {
            for (double& v : out) v = activate(model.activation, v);
        } else {
            softmax_inplace(out);
        }
    }
}

}  // namespace

std::vector<double> MlpModel::probabilities(std::span<const double> row) const {
    if (row.size() != static_cast<std::size_t>(n_features))
        throw std::invalid_argument("mlp predict: row width " + std::to_string(row.size()) +
                                    " does not match trained feature count " +
                                    std::to_string(n_features));
    std::vector<std::vector<double>> activations;
    forward(*this, row, activations);
    return activations.back();
}

std::size_t MlpModel::param_count() const {
    std::size_t count = 0;
    for (const MlpLayer& layer : layers) count += layer.weights.size() + layer.biases.size();
    return count;
}

double MlpModel::get_param(std::size_t index) const {
    for (const MlpLayer& layer : layers) {
        if (index < layer.weights.size()) return layer.weights[index];
        index -= layer.weights.size();
        if (index < layer.biases.size()) return layer.biases[index];
        index -= layer.biases.size();
    }
    throw std::out_of_range("mlp parameter index out of range");
}

void MlpModel::set_param(std::size_t index, double value) {
    for (MlpLayer& layer : layers) {
        if (index < layer.weights.size()) {
            layer.weights[index] = value;
            return;
        }
        index -= layer.weights.size();
        if (index < layer.biases.size()) {
            layer.biases[index] = value;
            return;
        }
        index -= layer.biases.size();
    }
    throw std::out_of_range("mlp parameter index out of range");
}

MlpModel mlp_init(int n_features, int n_classes, const std::vector<int>& hidden_sizes,
                  Activation activation, std::uint64_t seed) {
    if (hidden_sizes.empty() || hidden_sizes.size() > 3)
        throw std::invalid_argument("mlp: 1 to 3 hidden layers expected");
    for (int size : hidden_sizes) {
        if (size < 1 || size > 300)
            throw std::invalid_argument("mlp: layer sizes must be within 1..300");
    }
    if (n_features < 1 || n_classes < 2)
        throw std::invalid_argument("mlp: need at least 1 feature and 2 classes");

    MlpModel model;
    model.activation = activation;
    model.n_features = n_features;
    model.n_classes = n_classes;
    model.seed = seed;

    Rng rng(seed);
    int fan_in = n_features;
    auto add_layer = [&](int fan_out) {
        MlpLayer layer;
        layer.in = fan_in;
        layer.out = fan_out;
        const double bound = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
        layer.weights.resize(static_cast<std::size_t>(fan_in) * static_cast<std::size_t>(fan_out));
        for (double& w : layer.weights) w = rng.uniform(-bound, bound);
        layer.biases.assign(static_cast<std::size_t>(fan_out), 0.0);
        model.layers.push_back(std::move(layer));
        fan_in = fan_out;
    };
    for (int size : hidden_sizes) add_layer(size);
    add_layer(n_classes);
    return model;
}

double mlp_loss(const MlpModel& model, std::span<const double> data, std::size_t n_cols,
                std::span<const std::size_t> rows, std::span<const int> labels) {
    double loss = 0.0;
    std::vector<std::vector<double>> activations;
    for (std::size_t r : rows) {
        forward(model, data.subspan(r * n_cols, n_cols), activations);
        const double p = activations.back()[static_cast<std::size_t>(labels[r])];
        loss -= std::log(std::max(p, 1e-300));
    }
    return rows.empty() ? 0.0 : loss / static_cast<double>(rows.size());
}

double mlp_loss_and_gradient(const MlpModel& model, std::span<const double> data,
                             std::size_t n_cols, std::span<const std::size_t> rows,
                             std::span<const int> labels, std::vector<double>& gradient) {
    gradient.assign(model.param_count(), 0.0);
    if (rows.empty()) return 0.0;

    // per-layer views into the flat gradient
    std::vector<std::size_t> weight_offsets;
    std::vector<std::size_t> bias_offsets;
    std::size_t offset = 0;
    for (const MlpLayer& layer : model.layers) {
        weight_offsets.push_back(offset);
        offset += layer.weights.size();
        bias_offsets.push_back(offset);
        offset += layer.biases.size();
    }

    const double inv_batch = 1.0 / static_cast<double>(rows.size());
    double loss = 0.0;
    std::vector<std::vector<double>> activations;
    std::vector<double> delta;
    std::vector<double> delta_prev;

    for (std::size_t r : rows) {
        forward(model, data.subspan(r * n_cols, n_cols), activations);
        const auto& probs = activations.back();
        loss -= std::log(std::max(probs[static_cast<std::size_t>(labels[r])], 1e-300));

        // softmax + cross-entropy: delta at the output is (p - onehot)
        delta.assign(probs.begin(), probs.end());
        delta[static_cast<std::size_t>(labels[r])] -= 1.0;

        for (std::size_t l = model.layers.size(); l-- > 0;) {
            const MlpLayer& layer = model.layers[l];
            const auto& in = activations[l];
            double* wgrad = gradient.data() + weight_offsets[l];
            double* bgrad = gradient.data() + bias_offsets[l];
            for (int o = 0; o < layer.out; ++o) {
                const double d = delta[static_cast<std::size_t>(o)] * inv_batch;
                bgrad[o] += d;
                double* wrow = wgrad + static_cast<std::size_t>(o) * in.size();
                for (std::size_t i = 0; i < in.size(); ++i) wrow[i] += d * in[i];
            }
            if (l == 0) break;
            delta_prev.assign(in.size(), 0.0);
            for (int o = 0; o < layer.out; ++o) {
                const double d = delta[static_cast<std::size_t>(o)];
                const double* wrow =
                    layer.weights.data() + static_cast<std::size_t>(o) * in.size();
                for (std::size_t i = 0; i < in.size(); ++i) delta_prev[i] += d * wrow[i];
            }
            for (std::size_t i = 0; i < in.size(); ++i)
                delta_prev[i] *= activate_grad(model.activation, in[i]);
            delta.swap(delta_prev);
        }
    }
    return loss * inv_batch;
}

MlpModel mlp_fit(std::span<const double> data, std::size_t n_rows, std::size_t n_cols,
                 std::span<const int> labels, const std::vector<int>& hidden_sizes,
                 Activation activation, const MlpFitOptions& options, std::uint64_t seed) {
    if (n_rows == 0) throw std::invalid_argument("mlp_fit: empty training data");
    int n_classes = 0;
    for (int label : labels) n_classes = std::max(n_classes, label + 1);
    n_classes = std::max(n_classes, 2);

    MlpModel model = mlp_init(static_cast<int>(n_cols), n_classes, hidden_sizes, activation, seed);
    Rng rng(stream_seed(seed, 1));  // shuffling stream, decoupled from init draws

    std::vector<std::size_t> order(n_rows);
    std::iota(order.begin(), order.end(), 0);
    const std::size_t batch_size = static_cast<std::size_t>(std::max(options.batch_size, 1));
    std::vector<double> gradient;

    for (int epoch = 0; epoch < options.epochs; ++epoch) {
        rng.shuffle(order);
        for (std::size_t begin = 0; begin < n_rows; begin += batch_size) {
            const std::size_t count = std::min(batch_size, n_rows - begin);
            const std::span<const std::size_t> batch(order.data() + begin, count);
            const double batch_loss =
                mlp_loss_and_gradient(model, data, n_cols, batch, labels, gradient);
            if (!std::isfinite(batch_loss))
                throw MlpDivergedError(
                    "mlp training loss is not finite at epoch " + std::to_string(epoch + 1) +
                    "; lower the learning rate (current " + std::to_string(options.learning_rate) +
                    ") or normalize the inputs");
            std::size_t g = 0;
            for (MlpLayer& layer : model.layers) {
                for (double& w : layer.weights) w -= options.learning_rate * gradient[g++];
                for (double& b : layer.biases) b -= options.learning_rate * gradient[g++];
            }
        }
        const double epoch_loss = mlp_loss(model, data, n_cols, order, labels);
        if (!std::isfinite(epoch_loss))
            throw MlpDivergedError("mlp training loss diverged after epoch " +
                                   std::to_string(epoch + 1) + "; lower the learning rate (current " +
                                   std::to_string(options.learning_rate) + ")");
        model.epoch_losses.push_back(epoch_loss);
    }
    return model;
}

}  // namespace flowids
