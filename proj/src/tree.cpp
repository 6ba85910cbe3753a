#include "flowids/tree.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace flowids {

const char* to_string(SplitCriterion criterion) {
    switch (criterion) {
        case SplitCriterion::Gini: return "gini";
        case SplitCriterion::Twoing: return "twoing";
        case SplitCriterion::Deviance: return "deviance";
    }
    return "?";
}

SplitCriterion parse_split_criterion(const std::string& text) {
    if (text == "gini") return SplitCriterion::Gini;
    if (text == "twoing") return SplitCriterion::Twoing;
    if (text == "deviance") return SplitCriterion::Deviance;
    throw std::invalid_argument("unknown split criterion '" + text +
                                "' (expected gini, twoing or deviance)");
}

int TreeModel::internal_node_count() const {
    int count = 0;
    for (const TreeNode& node : nodes)
        if (node.feature >= 0) ++count;
    return count;
}

const std::vector<double>& TreeModel::probabilities(std::span<const double> row) const {
    if (row.size() != static_cast<std::size_t>(n_features))
        throw std::invalid_argument("tree predict: row width " + std::to_string(row.size()) +
                                    " does not match trained feature count " +
                                    std::to_string(n_features));
    int index = 0;
    while (nodes[static_cast<std::size_t>(index)].feature >= 0) {
        const TreeNode& node = nodes[static_cast<std::size_t>(index)];
        index = row[static_cast<std::size_t>(node.feature)] <= node.threshold ? node.left
                                                                              : node.right;
    }
    return nodes[static_cast<std::size_t>(index)].probs;
}

namespace {

double impurity(const std::vector<std::int64_t>& counts, std::int64_t n,
                SplitCriterion criterion) {
    if (n <= 0) return 0.0;
    const double dn = static_cast<double>(n);
    double value = 0.0;
    if (criterion == SplitCriterion::Deviance) {
        for (std::int64_t c : counts) {
            if (c == 0) continue;
            const double p = static_cast<double>(c) / dn;
            value -= p * std::log(p);
        }
    } else {  // gini; twoing never asks for a node impurity
        double sq = 0.0;
        for (std::int64_t c : counts) {
            const double p = static_cast<double>(c) / dn;
            sq += p * p;
        }
        value = 1.0 - sq;
    }
    return value;
}

struct GrowNode {
    std::vector<std::size_t> rows;
    std::vector<std::int64_t> class_counts;
    bool impure = false;
    // best split over this node's candidate features
    bool has_split = false;
    int best_feature = -1;
    double best_threshold = 0.0;
    double best_gain = 0.0;  // count-weighted impurity decrease
    int left_child = -1;
    int right_child = -1;
    std::uint64_t creation_id = 0;
};

class TreeGrower {
public:
    TreeGrower(std::span<const double> data, std::size_t n_cols, std::span<const int> labels,
               int n_classes, SplitCriterion criterion, const TreeFitOptions& options)
        : data_(data),
          n_cols_(n_cols),
          labels_(labels),
          n_classes_(n_classes),
          criterion_(criterion),
          options_(options) {}

    TreeModel grow(std::vector<std::size_t> root_rows, int max_splits) {
        make_node(std::move(root_rows));
        int splits_done = 0;
        while (splits_done < max_splits) {
            const int target = pick_frontier();
            if (target < 0) break;
            split_node(target);
            ++splits_done;
        }
        return emit(max_splits);
    }

private:
    int make_node(std::vector<std::size_t> rows) {
        GrowNode node;
        node.creation_id = next_id_++;
        node.class_counts.assign(static_cast<std::size_t>(n_classes_), 0);
        for (std::size_t r : rows) ++node.class_counts[static_cast<std::size_t>(labels_[r])];
        int nonzero = 0;
        for (std::int64_t c : node.class_counts)
            if (c > 0) ++nonzero;
        node.impure = nonzero > 1;
        node.rows = std::move(rows);
        if (node.impure) find_best_split(node);
        arena_.push_back(std::move(node));
        const int index = static_cast<int>(arena_.size()) - 1;
        if (arena_.back().has_split) frontier_.push_back(index);
        return index;
    }

    void find_best_split(GrowNode& node) {
        const std::int64_t n = static_cast<std::int64_t>(node.rows.size());
        const double parent_weighted =
            criterion_ == SplitCriterion::Twoing
                ? 0.0
                : static_cast<double>(n) * impurity(node.class_counts, n, criterion_);

        std::vector<int> features = candidate_features();
        std::vector<std::pair<double, int>> sorted;  // (value, label)
        std::vector<std::int64_t> left_counts(static_cast<std::size_t>(n_classes_));

        for (int f : features) {
            sorted.clear();
            sorted.reserve(node.rows.size());
            for (std::size_t r : node.rows) {
                sorted.emplace_back(data_[r * n_cols_ + static_cast<std::size_t>(f)], labels_[r]);
            }
            std::sort(sorted.begin(), sorted.end(),
                      [](const auto& a, const auto& b) { return a.first < b.first; });

            std::fill(left_counts.begin(), left_counts.end(), 0);
            std::int64_t n_left = 0;
            for (std::size_t i = 0; i + 1 < sorted.size(); ++i) {
                ++left_counts[static_cast<std::size_t>(sorted[i].second)];
                ++n_left;
                if (sorted[i].first == sorted[i + 1].first) continue;  // not a boundary

                const std::int64_t n_right = n - n_left;
                double gain = 0.0;
                if (criterion_ == SplitCriterion::Twoing) {
                    double diff_sum = 0.0;
                    for (std::size_t k = 0; k < left_counts.size(); ++k) {
                        const double pl =
                            static_cast<double>(left_counts[k]) / static_cast<double>(n_left);
                        const double pr =
                            static_cast<double>(node.class_counts[k] - left_counts[k]) /
                            static_cast<double>(n_right);
                        diff_sum += std::abs(pl - pr);
                    }
                    gain = static_cast<double>(n_left) * static_cast<double>(n_right) /
                           static_cast<double>(n) * diff_sum * diff_sum / 4.0;
                } else {
                    std::vector<std::int64_t> right_counts(left_counts.size());
                    for (std::size_t k = 0; k < left_counts.size(); ++k)
                        right_counts[k] = node.class_counts[k] - left_counts[k];
                    gain = parent_weighted -
                           static_cast<double>(n_left) * impurity(left_counts, n_left, criterion_) -
                           static_cast<double>(n_right) *
                               impurity(right_counts, n_right, criterion_);
                }

                const double lo = sorted[i].first;
                const double hi = sorted[i + 1].first;
                double threshold = lo + (hi - lo) / 2.0;
                if (threshold >= hi) threshold = lo;  // keep the partition exactly at this boundary

                if (!node.has_split || gain > node.best_gain) {
                    node.has_split = true;
                    node.best_gain = gain;
                    node.best_feature = f;
                    node.best_threshold = threshold;
                }
            }
        }
    }

    std::vector<int> candidate_features() {
        std::vector<int> features(n_cols_);
        std::iota(features.begin(), features.end(), 0);
        const int m = options_.features_per_node;
        if (m <= 0 || static_cast<std::size_t>(m) >= n_cols_ || options_.rng == nullptr)
            return features;
        for (int i = 0; i < m; ++i) {
            const std::size_t j =
                static_cast<std::size_t>(i) +
                static_cast<std::size_t>(options_.rng->bounded(n_cols_ - static_cast<std::size_t>(i)));
            std::swap(features[static_cast<std::size_t>(i)], features[j]);
        }
        features.resize(static_cast<std::size_t>(m));
        std::sort(features.begin(), features.end());  // canonical tie-breaking order
        return features;
    }

    int pick_frontier() {
        int best = -1;
        std::size_t best_pos = 0;
        for (std::size_t i = 0; i < frontier_.size(); ++i) {
            const GrowNode& node = arena_[static_cast<std::size_t>(frontier_[i])];
            if (best < 0 || node.best_gain > arena_[static_cast<std::size_t>(best)].best_gain) {
                best = frontier_[i];
                best_pos = i;
            }
        }
        if (best >= 0) frontier_.erase(frontier_.begin() + static_cast<std::ptrdiff_t>(best_pos));
        return best;
    }

    void split_node(int index) {
        std::vector<std::size_t> left_rows;
        std::vector<std::size_t> right_rows;
        {
            const GrowNode& node = arena_[static_cast<std::size_t>(index)];
            const std::size_t f = static_cast<std::size_t>(node.best_feature);
            for (std::size_t r : node.rows) {
                if (data_[r * n_cols_ + f] <= node.best_threshold)
                    left_rows.push_back(r);
                else
                    right_rows.push_back(r);
            }
        }
        // children may reallocate the arena; take them first, then link
        const int left = make_node(std::move(left_rows));
        const int right = make_node(std::move(right_rows));
        GrowNode& node = arena_[static_cast<std::size_t>(index)];
        node.left_child = left;
        node.right_child = right;
        node.rows.clear();
        node.rows.shrink_to_fit();
    }

    TreeModel emit(int max_splits) const {
        TreeModel model;
        model.n_classes = n_classes_;
        model.n_features = static_cast<int>(n_cols_);
        model.criterion = criterion_;
        model.max_splits = max_splits;
        model.nodes.reserve(arena_.size());

        // depth-first copy, children resolved after parents
        struct Pending {
            int arena_index;
            int emit_index;
            bool right;
        };
        std::vector<Pending> stack;
        model.nodes.emplace_back();
        emit_node(model, 0, 0, stack);
        while (!stack.empty()) {
            const Pending todo = stack.back();
            stack.pop_back();
            model.nodes.emplace_back();
            const int emitted = static_cast<int>(model.nodes.size()) - 1;
            if (todo.right)
                model.nodes[static_cast<std::size_t>(todo.emit_index)].right = emitted;
            else
                model.nodes[static_cast<std::size_t>(todo.emit_index)].left = emitted;
            emit_node(model, todo.arena_index, emitted, stack);
        }
        return model;
    }

    template <typename Stack>
    void emit_node(TreeModel& model, int arena_index, int emit_index, Stack& stack) const {
        const GrowNode& grown = arena_[static_cast<std::size_t>(arena_index)];
        TreeNode& node = model.nodes[static_cast<std::size_t>(emit_index)];
        if (grown.left_child >= 0) {
            node.feature = grown.best_feature;
            node.threshold = grown.best_threshold;
            stack.push_back({grown.right_child, emit_index, true});
            stack.push_back({grown.left_child, emit_index, false});
        } else {
            std::int64_t n = 0;
            for (std::int64_t c : grown.class_counts) n += c;
            node.probs.resize(grown.class_counts.size());
            for (std::size_t k = 0; k < grown.class_counts.size(); ++k)
                node.probs[k] = n > 0 ? static_cast<double>(grown.class_counts[k]) /
                                            static_cast<double>(n)
                                      : 0.0;
        }
    }

    std::span<const double> data_;
    std::size_t n_cols_;
    std::span<const int> labels_;
    int n_classes_;
    SplitCriterion criterion_;
    TreeFitOptions options_;
    std::vector<GrowNode> arena_;
    std::vector<int> frontier_;
    std::uint64_t next_id_ = 0;
};

}  // namespace

TreeModel dt_fit_rows(std::span<const double> data, std::size_t n_cols,
                      std::span<const std::size_t> rows, std::span<const int> labels,
                      int n_classes, SplitCriterion criterion, int max_splits,
                      const TreeFitOptions& options) {
    if (rows.empty()) throw std::invalid_argument("dt_fit: empty training data");
    if (max_splits < 0) throw std::invalid_argument("dt_fit: max_splits must be >= 0");
    TreeGrower grower(data, n_cols, labels, n_classes, criterion, options);
    return grower.grow(std::vector<std::size_t>(rows.begin(), rows.end()), max_splits);
}

TreeModel dt_fit(std::span<const double> data, std::size_t n_rows, std::size_t n_cols,
                 std::span<const int> labels, SplitCriterion criterion, int max_splits,
                 const TreeFitOptions& options) {
    if (n_rows == 0) throw std::invalid_argument("dt_fit: empty training data");
    if (labels.size() != n_rows)
        throw std::invalid_argument("dt_fit: label count does not match row count");
    int n_classes = 0;
    for (int label : labels) {
        if (label < 0) throw std::invalid_argument("dt_fit: labels must be in 0..K-1");
        n_classes = std::max(n_classes, label + 1);
    }
    std::vector<std::size_t> rows(n_rows);
    std::iota(rows.begin(), rows.end(), 0);
    return dt_fit_rows(data, n_cols, rows, labels, n_classes, criterion, max_splits, options);
}

}  // namespace flowids
