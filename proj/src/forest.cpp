#include "flowids/forest.hpp"

#include <numeric>
#include <stdexcept>

namespace flowids {

int argmax_class(std::span<const double> probs) {
    int best = 0;
    for (int k = 1; k < static_cast<int>(probs.size()); ++k) {
        if (probs[static_cast<std::size_t>(k)] > probs[static_cast<std::size_t>(best)]) best = k;
    }
    return best;
}

std::vector<double> ForestModel::probabilities(std::span<const double> row) const {
    std::vector<double> sum(static_cast<std::size_t>(n_classes), 0.0);
    for (const TreeModel& tree : trees) {
        const std::vector<double>& probs = tree.probabilities(row);
        for (std::size_t k = 0; k < sum.size(); ++k) sum[k] += probs[k];
    }
    if (!trees.empty()) {
        for (double& v : sum) v /= static_cast<double>(trees.size());
    }
    return sum;
}

ForestModel rf_fit(std::span<const double> data, std::size_t n_rows, std::size_t n_cols,
                   std::span<const int> labels, int n_learners, int max_splits,
                   int predictors_to_sample, std::uint64_t seed,
                   const ForestFitOptions& options) {
    if (n_rows == 0) throw std::invalid_argument("rf_fit: empty training data");
    if (n_learners < 1) throw std::invalid_argument("rf_fit: need at least one learner");
    if (predictors_to_sample < 1)
        throw std::invalid_argument("rf_fit: predictors_to_sample must be >= 1");
    if (static_cast<std::size_t>(predictors_to_sample) > n_cols)
        throw std::invalid_argument("rf_fit: predictors_to_sample exceeds feature count " +
                                    std::to_string(n_cols));

    int n_classes = 0;
    for (int label : labels) n_classes = std::max(n_classes, label + 1);

    ForestModel forest;
    forest.n_classes = n_classes;
    forest.n_features = static_cast<int>(n_cols);
    forest.predictors_to_sample = predictors_to_sample;
    forest.seed = seed;
    forest.bootstrap = options.bootstrap;
    forest.trees.reserve(static_cast<std::size_t>(n_learners));

    for (int t = 0; t < n_learners; ++t) {
        Rng rng(stream_seed(seed, static_cast<std::uint64_t>(t)));
        std::vector<std::size_t> rows(n_rows);
        if (options.bootstrap) {
            for (std::size_t i = 0; i < n_rows; ++i)
                rows[i] = static_cast<std::size_t>(rng.bounded(n_rows));
        } else {
            std::iota(rows.begin(), rows.end(), 0);
        }
        TreeFitOptions tree_options;
        tree_options.features_per_node = predictors_to_sample;
        tree_options.rng = &rng;
        forest.trees.push_back(dt_fit_rows(data, n_cols, rows, labels, n_classes,
                                           SplitCriterion::Gini, max_splits, tree_options));
    }
    return forest;
}

}  // namespace flowids
