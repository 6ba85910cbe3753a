#pragma once

// Confusion matrices and the metric suite: overall accuracy plus per-class
// one-vs-rest accuracy, precision, recall and F1. Divisions by zero yield 0
// with an explicit flag, never NaN.

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace flowids {

struct MetricsError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ConfusionMatrix {
    std::size_t k = 0;
    std::vector<std::int64_t> counts;  // k x k, rows = true class, cols = predicted
    std::vector<std::string> class_names;

    std::int64_t& at(std::size_t truth, std::size_t predicted) {
        return counts[truth * k + predicted];
    }
    std::int64_t at(std::size_t truth, std::size_t predicted) const {
        return counts[truth * k + predicted];
    }
    std::int64_t total() const;
    std::int64_t trace() const;
};

ConfusionMatrix confusion_matrix(std::span<const int> truth, std::span<const int> predicted,
                                 std::size_t k, std::vector<std::string> class_names = {});

struct ClassMetrics {
    std::string name;
    std::int64_t support = 0;  // true instances
    double accuracy = 0.0;     // one-vs-rest
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    bool precision_undefined = false;  // no predicted positives
    bool recall_undefined = false;     // no true instances
    bool f1_undefined = false;         // precision + recall == 0
};

struct MetricsReport {
    double overall_accuracy = 0.0;
    std::vector<ClassMetrics> per_class;
    double macro_precision = 0.0;
    double macro_recall = 0.0;
    double macro_f1 = 0.0;
};

MetricsReport compute_metrics(const ConfusionMatrix& cm);

struct NamedReport {
    std::string model_name;
    std::string task_name;
    ConfusionMatrix cm;
    MetricsReport metrics;
};

// Per-model per-class table (percentages to one decimal, F1 to four decimals)
// plus confusion matrices.
std::string render_report_text(std::span<const NamedReport> reports);
std::string render_report_json(std::span<const NamedReport> reports);

}  // namespace flowids
