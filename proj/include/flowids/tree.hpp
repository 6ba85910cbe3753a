#pragma once

// Classification tree grown best-first: at every step the frontier node whose
// best split gives the largest count-weighted impurity decrease is split,
// until the max_splits budget is spent or no impure node can be split.
// Positive-gain splits always come first; a zero-gain split of an impure node
// is still taken (the second level may separate what the first cannot).

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "flowids/rng.hpp"

namespace flowids {

enum class SplitCriterion { Gini, Twoing, Deviance };

const char* to_string(SplitCriterion criterion);
SplitCriterion parse_split_criterion(const std::string& text);

struct TreeNode {
    int feature = -1;  // -1 marks a leaf
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    std::vector<double> probs;  // leaf class distribution, sums to 1
};

struct TreeModel {
    std::vector<TreeNode> nodes;  // node 0 is the root
    int n_classes = 0;
    int n_features = 0;
    SplitCriterion criterion = SplitCriterion::Gini;
    int max_splits = 0;

    int internal_node_count() const;
    // class probabilities for one row (x <= threshold goes left)
    const std::vector<double>& probabilities(std::span<const double> row) const;
};

struct TreeFitOptions {
    // Random forests sample this many candidate features per node (0 = all);
    // rng must outlive the fit.
    int features_per_node = 0;
    Rng* rng = nullptr;
};

TreeModel dt_fit(std::span<const double> data, std::size_t n_rows, std::size_t n_cols,
                 std::span<const int> labels, SplitCriterion criterion, int max_splits,
                 const TreeFitOptions& options = {});

// Variant over an explicit row subset (bootstrap samples reuse the matrix).
TreeModel dt_fit_rows(std::span<const double> data, std::size_t n_cols,
                      std::span<const std::size_t> rows, std::span<const int> labels,
                      int n_classes, SplitCriterion criterion, int max_splits,
                      const TreeFitOptions& options = {});

}  // namespace flowids
