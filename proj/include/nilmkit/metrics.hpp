#pragma once

// Confusion-matrix construction and the scalar metrics derived from it:
// per-class precision/recall via one-vs-rest counts, F-measure (harmonic
// mean), G-mean (geometric mean), overall accuracy/error rate, and the
// unweighted macro averages.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "nilmkit/error.hpp"

namespace nilmkit {

// n x n counts, actual class by row, predicted class by column.
struct ConfusionMatrix {
    std::vector<std::string> class_names;
    std::vector<std::int64_t> counts;  // row-major, size n*n

    std::size_t n() const { return class_names.size(); }

    std::int64_t at(std::size_t actual, std::size_t predicted) const {
        return counts[actual * n() + predicted];
    }
    std::int64_t& at(std::size_t actual, std::size_t predicted) {
        return counts[actual * n() + predicted];
    }

    std::int64_t row_sum(std::size_t i) const {
        std::int64_t sum = 0;
        for (std::size_t j = 0; j < n(); ++j) sum += at(i, j);
        return sum;
    }
    std::int64_t col_sum(std::size_t j) const {
        std::int64_t sum = 0;
        for (std::size_t i = 0; i < n(); ++i) sum += at(i, j);
        return sum;
    }
    std::int64_t total() const { return std::accumulate(counts.begin(), counts.end(), std::int64_t{0}); }
    std::int64_t diagonal() const {
        std::int64_t sum = 0;
        for (std::size_t i = 0; i < n(); ++i) sum += at(i, i);
        return sum;
    }

    bool operator==(const ConfusionMatrix&) const = default;
};

struct OneVsRestCounts {
    std::int64_t tp = 0, fp = 0, fn = 0, tn = 0;

    std::int64_t total() const { return tp + fp + fn + tn; }

    bool operator==(const OneVsRestCounts&) const = default;
};

struct ClassMetrics {
    double precision = 0.0;
    double recall = 0.0;
    double f_measure = 0.0;
    double g_mean = 0.0;
    // Cleared when the corresponding denominator was zero; the value is then
    // reported as 0 rather than hidden.
    bool precision_defined = true;
    bool recall_defined = true;
};

struct OverallAccuracy {
    double accuracy = 0.0;
    double error_rate = 0.0;
};

struct MetricsReport {
    ConfusionMatrix confusion;
    std::vector<double> normalized_confusion;  // row-major
    std::vector<ClassMetrics> per_class;       // aligned with class_names
    double overall_accuracy = 0.0;
    double error_rate = 0.0;
    double macro_f = 0.0;
    double macro_g = 0.0;
};

inline ConfusionMatrix build_confusion(const std::vector<int>& y_true,
                                       const std::vector<int>& y_pred,
                                       std::vector<std::string> class_names) {
    if (y_true.size() != y_pred.size())
        throw ConfigError("y_true and y_pred differ in length: " +
                          std::to_string(y_true.size()) + " vs " +
                          std::to_string(y_pred.size()));
    ConfusionMatrix c;
    c.class_names = std::move(class_names);
    std::size_t n = c.n();
    if (n == 0) throw ConfigError("confusion matrix needs at least one class");
    c.counts.assign(n * n, 0);
    for (std::size_t t = 0; t < y_true.size(); ++t) {
        int actual = y_true[t];
        int predicted = y_pred[t];
        if (actual < 0 || static_cast<std::size_t>(actual) >= n ||
            predicted < 0 || static_cast<std::size_t>(predicted) >= n)
            throw ConfigError("class index out of range at position " + std::to_string(t));
        ++c.at(static_cast<std::size_t>(actual), static_cast<std::size_t>(predicted));
    }
    return c;
}

// Each nonzero row divided by its sum; an all-zero row stays all zeros.
inline std::vector<double> row_normalize(const ConfusionMatrix& c) {
    std::size_t n = c.n();
    std::vector<double> normalized(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        std::int64_t sum = c.row_sum(i);
        if (sum == 0) continue;
        for (std::size_t j = 0; j < n; ++j)
            normalized[i * n + j] =
                static_cast<double>(c.at(i, j)) / static_cast<double>(sum);
    }
    return normalized;
}

inline OneVsRestCounts one_vs_rest(const ConfusionMatrix& c, std::size_t cls) {
    if (cls >= c.n()) throw ConfigError("class index out of range");
    OneVsRestCounts counts;
    counts.tp = c.at(cls, cls);
    counts.fp = c.col_sum(cls) - counts.tp;
    counts.fn = c.row_sum(cls) - counts.tp;
    counts.tn = c.total() - counts.tp - counts.fp - counts.fn;
    return counts;
}

// Harmonic mean of precision and recall; 0 when both are 0.
inline double f_measure(double precision, double recall) {
    double sum = precision + recall;
    if (sum == 0.0) return 0.0;
    return 2.0 * precision * recall / sum;
}

// Geometric mean of precision and recall.
inline double g_mean(double precision, double recall) {
    return std::sqrt(precision * recall);
}

inline ClassMetrics per_class_metrics(const OneVsRestCounts& counts) {
    if (counts.tp < 0 || counts.fp < 0 || counts.fn < 0 || counts.tn < 0)
        throw ConfigError("one-vs-rest counts must be non-negative");
    ClassMetrics m;
    if (counts.tp + counts.fp > 0)
        m.precision = static_cast<double>(counts.tp) / static_cast<double>(counts.tp + counts.fp);
    else
        m.precision_defined = false;
    if (counts.tp + counts.fn > 0)
        m.recall = static_cast<double>(counts.tp) / static_cast<double>(counts.tp + counts.fn);
    else
        m.recall_defined = false;
    m.f_measure = f_measure(m.precision, m.recall);
    m.g_mean = g_mean(m.precision, m.recall);
    return m;
}

inline OverallAccuracy overall_accuracy(const ConfusionMatrix& c) {
    std::int64_t total = c.total();
    if (total == 0) throw ConfigError("confusion matrix has no samples");
    OverallAccuracy result;
    result.accuracy = static_cast<double>(c.diagonal()) / static_cast<double>(total);
    result.error_rate = 1.0 - result.accuracy;
    return result;
}

// Unweighted arithmetic mean over classes.
inline double macro_average(const std::vector<double>& values) {
    if (values.empty()) throw ConfigError("macro average of an empty list");
    return std::accumulate(values.begin(), values.end(), 0.0) /
           static_cast<double>(values.size());
}

inline MetricsReport aggregate_report(const ConfusionMatrix& c) {
    MetricsReport report;
    report.confusion = c;
    report.normalized_confusion = row_normalize(c);
    OverallAccuracy overall = overall_accuracy(c);
    report.overall_accuracy = overall.accuracy;
    report.error_rate = overall.error_rate;
    std::vector<double> f_values, g_values;
    for (std::size_t i = 0; i < c.n(); ++i) {
        ClassMetrics m = per_class_metrics(one_vs_rest(c, i));
        f_values.push_back(m.f_measure);
        g_values.push_back(m.g_mean);
        report.per_class.push_back(m);
    }
    report.macro_f = macro_average(f_values);
    report.macro_g = macro_average(g_values);
    return report;
}

}  // namespace nilmkit
