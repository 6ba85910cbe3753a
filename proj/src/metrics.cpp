#include "flowids/metrics.hpp"

#include <charconv>
#include <cstdio>
#include <numeric>
#include <sstream>

#include <nlohmann/json.hpp>

namespace flowids {

using nlohmann::json;

std::int64_t ConfusionMatrix::total() const {
    return std::accumulate(counts.begin(), counts.end(), std::int64_t{0});
}

std::int64_t ConfusionMatrix::trace() const {
    std::int64_t sum = 0;
    for (std::size_t i = 0; i < k; ++i) sum += at(i, i);
    return sum;
}

ConfusionMatrix confusion_matrix(std::span<const int> truth, std::span<const int> predicted,
                                 std::size_t k, std::vector<std::string> class_names) {
    if (truth.size() != predicted.size())
        throw MetricsError("confusion_matrix: label vectors differ in length");
    ConfusionMatrix cm;
    cm.k = k;
    cm.counts.assign(k * k, 0);
    if (class_names.empty()) {
        for (std::size_t i = 0; i < k; ++i) class_names.push_back("class " + std::to_string(i));
    }
    cm.class_names = std::move(class_names);
    for (std::size_t i = 0; i < truth.size(); ++i) {
        const int t = truth[i];
        const int p = predicted[i];
        if (t < 0 || p < 0 || static_cast<std::size_t>(t) >= k || static_cast<std::size_t>(p) >= k)
            throw MetricsError("confusion_matrix: label outside 0.." + std::to_string(k - 1) +
                               " at row " + std::to_string(i));
        ++cm.at(static_cast<std::size_t>(t), static_cast<std::size_t>(p));
    }
    return cm;
}

MetricsReport compute_metrics(const ConfusionMatrix& cm) {
    const std::int64_t total = cm.total();
    if (cm.k == 0 || total == 0) throw MetricsError("compute_metrics: empty confusion matrix");

    MetricsReport report;
    report.overall_accuracy =
        static_cast<double>(cm.trace()) / static_cast<double>(total);

    for (std::size_t c = 0; c < cm.k; ++c) {
        ClassMetrics m;
        m.name = cm.class_names[c];
        std::int64_t tp = cm.at(c, c);
        std::int64_t row_sum = 0;
        std::int64_t col_sum = 0;
        for (std::size_t j = 0; j < cm.k; ++j) {
            row_sum += cm.at(c, j);
            col_sum += cm.at(j, c);
        }
        const std::int64_t fn = row_sum - tp;
        const std::int64_t fp = col_sum - tp;
        const std::int64_t tn = total - tp - fn - fp;
        m.support = row_sum;

        m.accuracy = static_cast<double>(tp + tn) / static_cast<double>(total);
        if (tp + fp > 0) {
            m.precision = static_cast<double>(tp) / static_cast<double>(tp + fp);
        } else {
            m.precision = 0.0;
            m.precision_undefined = true;
        }
        if (tp + fn > 0) {
            m.recall = static_cast<double>(tp) / static_cast<double>(tp + fn);
        } else {
            m.recall = 0.0;
            m.recall_undefined = true;
        }
        if (m.precision + m.recall > 0.0) {
            m.f1 = 2.0 * m.precision * m.recall / (m.precision + m.recall);
        } else {
            m.f1 = 0.0;
            m.f1_undefined = true;
        }
        report.per_class.push_back(std::move(m));
    }

    const double k = static_cast<double>(cm.k);
    for (const ClassMetrics& m : report.per_class) {
        report.macro_precision += m.precision / k;
        report.macro_recall += m.recall / k;
        report.macro_f1 += m.f1 / k;
    }
    return report;
}

namespace {

std::string fixed_digits(double value, int precision) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::fixed,
                                   precision);
    if (ec != std::errc()) return "0";
    return std::string(buf, ptr);
}

std::string pct(double value) { return fixed_digits(value * 100.0, 1); }

std::string f1fmt(double value) { return fixed_digits(value, 4); }

void pad_to(std::string& line, std::size_t width) {
    while (line.size() < width) line.push_back(' ');
}

}  // namespace

std::string render_report_text(std::span<const NamedReport> reports) {
    std::ostringstream out;
    for (const NamedReport& entry : reports) {
        out << "== " << entry.model_name;
        if (!entry.task_name.empty()) out << " (" << entry.task_name << ")";
        out << " ==\n";
        out << "Overall accuracy: " << pct(entry.metrics.overall_accuracy) << "%\n";
        out << "class            precision  recall   F1-score\n";
        bool empty_class_footnote = false;
        for (const ClassMetrics& m : entry.metrics.per_class) {
            std::string line = "  " + m.name;
            pad_to(line, 17);
            if (m.recall_undefined && m.support == 0) {
                line += "-          -        -       *";
                empty_class_footnote = true;
            } else {
                std::string p = m.precision_undefined ? "0.0!" : pct(m.precision);
                pad_to(p, 9);
                std::string r = pct(m.recall);
                pad_to(r, 7);
                line += p + "  " + r + "  " + f1fmt(m.f1);
                if (m.f1_undefined) line += " (undefined: no positives)";
            }
            out << line << "\n";
        }
        if (empty_class_footnote) out << "  * class has no true instances in this split\n";

        out << "confusion matrix (rows = truth, cols = predicted):\n";
        for (std::size_t i = 0; i < entry.cm.k; ++i) {
            std::string line = "  " + entry.cm.class_names[i];
            pad_to(line, 17);
            for (std::size_t j = 0; j < entry.cm.k; ++j) {
                std::string cell = std::to_string(entry.cm.at(i, j));
                while (cell.size() < 8) cell.insert(cell.begin(), ' ');
                line += cell;
            }
            out << line << "\n";
        }
        out << "\n";
    }
    return out.str();
}

std::string render_report_json(std::span<const NamedReport> reports) {
    json doc = json::array();
    for (const NamedReport& entry : reports) {
        json item;
        item["model"] = entry.model_name;
        item["task"] = entry.task_name;
        item["overall_accuracy"] = entry.metrics.overall_accuracy;
        item["macro"] = {{"precision", entry.metrics.macro_precision},
                         {"recall", entry.metrics.macro_recall},
                         {"f1", entry.metrics.macro_f1}};
        item["classes"] = json::array();
        for (const ClassMetrics& m : entry.metrics.per_class) {
            item["classes"].push_back({{"name", m.name},
                                       {"support", m.support},
                                       {"accuracy", m.accuracy},
                                       {"precision", m.precision},
                                       {"recall", m.recall},
                                       {"f1", m.f1},
                                       {"precision_undefined", m.precision_undefined},
                                       {"recall_undefined", m.recall_undefined},
                                       {"f1_undefined", m.f1_undefined}});
        }
        item["confusion"] = {{"classes", entry.cm.class_names}, {"counts", json::array()}};
        for (std::size_t i = 0; i < entry.cm.k; ++i) {
            json row = json::array();
            for (std::size_t j = 0; j < entry.cm.k; ++j) row.push_back(entry.cm.at(i, j));
            item["confusion"]["counts"].push_back(row);
        }
        doc.push_back(std::move(item));
    }
    return doc.dump(2);
}

}  // namespace flowids
