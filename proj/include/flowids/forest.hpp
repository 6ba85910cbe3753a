#pragma once

// Random forest over the best-first trees: seeded n-sized bootstrap per tree,
// per-node feature subsampling, prediction by averaging leaf distributions.
// Per-tree seeds derive from (seed, tree index), so training is
// schedule-independent and bit-deterministic.

#include <cstdint>
#include <span>
#include <vector>

#include "flowids/tree.hpp"

namespace flowids {

struct ForestModel {
    std::vector<TreeModel> trees;
    int n_classes = 0;
    int n_features = 0;
    int predictors_to_sample = 0;
    std::uint64_t seed = 0;
    bool bootstrap = true;

    std::vector<double> probabilities(std::span<const double> row) const;
};

struct ForestFitOptions {
    bool bootstrap = true;  // the degenerate single-tree check turns this off
};

ForestModel rf_fit(std::span<const double> data, std::size_t n_rows, std::size_t n_cols,
                   std::span<const int> labels, int n_learners, int max_splits,
                   int predictors_to_sample, std::uint64_t seed,
                   const ForestFitOptions& options = {});

// argmax with lowest-class-id tie-break
int argmax_class(std::span<const double> probs);

}  // namespace flowids
