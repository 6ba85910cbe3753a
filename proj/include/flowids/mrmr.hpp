#pragma once

// MRMR feature ranking (MID variant): greedy forward selection where a
// candidate's score is its mutual information with the label minus its mean
// mutual information with the already-selected features. Continuous features
// are discretized into equal-width bins first.

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "flowids/dataset.hpp"

namespace flowids {

// Empirical mutual information in bits over two discrete columns.
double mutual_information(std::span<const int> x, std::span<const int> y);

// Equal-width binning over [min, max] of the given values; constant columns
// land in bin 0.
std::vector<int> discretize_equal_width(std::span<const double> values, int bins);

struct MrmrEntry {
    std::string feature;
    std::size_t column = 0;   // index into the matrix the ranking was built from
    double score = 0.0;       // score at selection time
    double relevance = 0.0;   // MI(feature; label)
};

struct MrmrRanking {
    std::vector<MrmrEntry> order;  // greedy selection order
    std::vector<std::pair<std::string, std::string>> dual_pairs;
    int bins = 16;

    // Rows for the ranking CSV: greedy rank kept per feature, but dual pairs
    // listed adjacently.
    std::vector<std::size_t> paired_view() const;
    std::string to_csv() const;
};

// Ranks features on the matrix's training rows (all rows when no split is
// assigned). Deterministic; ties broken by schema column order.
MrmrRanking mrmr_rank(const DatasetMatrix& matrix, int bins = 16);

// Features with score > tau, closed under dual pairing. Throws DatasetError
// when nothing clears the threshold.
std::vector<std::string> select_by_threshold(const MrmrRanking& ranking, double tau);

}  // namespace flowids
