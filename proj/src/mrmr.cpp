#include "flowids/mrmr.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "flowids/csv.hpp"
#include "flowids/flow_schema.hpp"

namespace flowids {

double mutual_information(std::span<const int> x, std::span<const int> y) {
    if (x.size() != y.size())
        throw std::invalid_argument("mutual_information: column lengths differ");
    const std::size_t n = x.size();
    if (n == 0) return 0.0;

    int max_x = 0;
    int max_y = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (x[i] < 0 || y[i] < 0)
            throw std::invalid_argument("mutual_information: values must be non-negative codes");
        max_x = std::max(max_x, x[i]);
        max_y = std::max(max_y, y[i]);
    }
    const std::size_t nx = static_cast<std::size_t>(max_x) + 1;
    const std::size_t ny = static_cast<std::size_t>(max_y) + 1;

    std::vector<std::uint64_t> joint(nx * ny, 0);
    std::vector<std::uint64_t> margin_x(nx, 0);
    std::vector<std::uint64_t> margin_y(ny, 0);
    for (std::size_t i = 0; i < n; ++i) {
        ++joint[static_cast<std::size_t>(x[i]) * ny + static_cast<std::size_t>(y[i])];
        ++margin_x[static_cast<std::size_t>(x[i])];
        ++margin_y[static_cast<std::size_t>(y[i])];
    }

    const double dn = static_cast<double>(n);
    double mi = 0.0;
    for (std::size_t a = 0; a < nx; ++a) {
        if (margin_x[a] == 0) continue;
        for (std::size_t b = 0; b < ny; ++b) {
            const std::uint64_t c = joint[a * ny + b];
            if (c == 0) continue;  // 0 * log 0 = 0
            const double pxy = static_cast<double>(c) / dn;
            const double px = static_cast<double>(margin_x[a]) / dn;
            const double py = static_cast<double>(margin_y[b]) / dn;
            mi += pxy * std::log2(pxy / (px * py));
        }
    }
    return mi;
}

std::vector<int> discretize_equal_width(std::span<const double> values, int bins) {
    if (bins < 1) throw std::invalid_argument("discretize_equal_width: bins must be >= 1");
    std::vector<int> codes(values.size(), 0);
    if (values.empty()) return codes;
    double lo = values[0];
    double hi = values[0];
    for (double v : values) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    const double range = hi - lo;
    if (range <= 0.0) return codes;
    for (std::size_t i = 0; i < values.size(); ++i) {
        int code = static_cast<int>(std::floor((values[i] - lo) / range * bins));
        code = std::clamp(code, 0, bins - 1);
        codes[i] = code;
    }
    return codes;
}

MrmrRanking mrmr_rank(const DatasetMatrix& matrix, int bins) {
    MrmrRanking ranking;
    ranking.bins = bins;
    ranking.dual_pairs = dual_feature_pairs(matrix.column_names);

    std::vector<std::size_t> rows;
    if (matrix.split.size() == matrix.n_rows) {
        rows = matrix.rows_with_tag(SplitTag::Train);
    }
    if (rows.empty()) {
        rows.resize(matrix.n_rows);
        for (std::size_t r = 0; r < matrix.n_rows; ++r) rows[r] = r;
    }

    const std::size_t p = matrix.n_cols;
    std::vector<std::vector<int>> codes(p);
    std::vector<double> column(rows.size());
    for (std::size_t c = 0; c < p; ++c) {
        for (std::size_t i = 0; i < rows.size(); ++i) column[i] = matrix.at(rows[i], c);
        codes[c] = discretize_equal_width(column, bins);
    }
    std::vector<int> labels(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) labels[i] = matrix.labels[rows[i]];

    std::vector<double> relevance(p, 0.0);
    for (std::size_t c = 0; c < p; ++c) relevance[c] = mutual_information(codes[c], labels);

    // pairwise MI is looked up repeatedly by the greedy loop; memoize
    std::vector<double> pair_mi(p * p, -1.0);
    auto feature_mi = [&](std::size_t a, std::size_t b) {
        double& slot = pair_mi[a * p + b];
        if (slot < 0.0) {
            slot = mutual_information(codes[a], codes[b]);
            pair_mi[b * p + a] = slot;
        }
        return slot;
    };

    std::vector<bool> taken(p, false);
    std::vector<std::size_t> selected;
    std::vector<double> redundancy_sum(p, 0.0);
    for (std::size_t step = 0; step < p; ++step) {
        std::size_t best = p;
        double best_score = 0.0;
        for (std::size_t c = 0; c < p; ++c) {
            if (taken[c]) continue;
            const double red = selected.empty()
                                   ? 0.0
                                   : redundancy_sum[c] / static_cast<double>(selected.size());
            const double score = relevance[c] - red;
            if (best == p || score > best_score) {
                best = c;
                best_score = score;
            }
        }
        taken[best] = true;
        selected.push_back(best);
        MrmrEntry entry;
        entry.feature = matrix.column_names[best];
        entry.column = best;
        entry.score = best_score;
        entry.relevance = relevance[best];
        ranking.order.push_back(std::move(entry));
        for (std::size_t c = 0; c < p; ++c) {
            if (!taken[c]) redundancy_sum[c] += feature_mi(c, best);
        }
    }
    return ranking;
}

std::vector<std::size_t> MrmrRanking::paired_view() const {
    std::vector<std::size_t> view;
    std::vector<bool> emitted(order.size(), false);
    auto counterpart_of = [&](const std::string& name) -> std::string {
        for (const auto& [a, b] : dual_pairs) {
            if (a == name) return b;
            if (b == name) return a;
        }
        return {};
    };
    for (std::size_t i = 0; i < order.size(); ++i) {
        if (emitted[i]) continue;
        view.push_back(i);
        emitted[i] = true;
        const std::string dual = counterpart_of(order[i].feature);
        if (dual.empty()) continue;
        for (std::size_t j = i + 1; j < order.size(); ++j) {
            if (!emitted[j] && order[j].feature == dual) {
                view.push_back(j);
                emitted[j] = true;
                break;
            }
        }
    }
    return view;
}

std::string MrmrRanking::to_csv() const {
    std::ostringstream out;
    out << "rank,feature,score\n";
    for (std::size_t idx : paired_view()) {
        out << (idx + 1) << ',' << csv_escape(order[idx].feature) << ','
            << format_float6(order[idx].score) << '\n';
    }
    return out.str();
}

std::vector<std::string> select_by_threshold(const MrmrRanking& ranking, double tau) {
    std::vector<std::string> selected;
    auto contains = [&](const std::string& name) {
        return std::find(selected.begin(), selected.end(), name) != selected.end();
    };
    for (const MrmrEntry& entry : ranking.order) {
        if (entry.score > tau && !contains(entry.feature)) selected.push_back(entry.feature);
    }
    if (selected.empty())
        throw DatasetError("no feature scored above tau = " + format_float6(tau) +
                           "; lower the threshold");

    // dual closure: a selected feature pulls in its counterpart
    for (std::size_t i = 0; i < selected.size(); ++i) {
        for (const auto& [a, b] : ranking.dual_pairs) {
            if (selected[i] == a && !contains(b)) selected.push_back(b);
            else if (selected[i] == b && !contains(a)) selected.push_back(a);
        }
    }

    // schema order keeps the selection deterministic and readable
    std::vector<std::string> ordered;
    std::vector<std::pair<std::size_t, std::string>> with_column;
    for (const std::string& name : selected) {
        for (const MrmrEntry& entry : ranking.order) {
            if (entry.feature == name) {
                with_column.emplace_back(entry.column, name);
                break;
            }
        }
    }
    std::sort(with_column.begin(), with_column.end());
    for (auto& [column, name] : with_column) ordered.push_back(std::move(name));
    return ordered;
}

}  // namespace flowids
