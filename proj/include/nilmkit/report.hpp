#pragma once

// Serialization of a MetricsReport. Three formats:
//   json - machine-readable interchange, round-trips exactly
//   csv  - one row per class plus a final "overall" row
//   text - confusion-matrix grid and a per-class metric table

#include <algorithm>
#include <charconv>
#include <cstddef>
#include <cstdint>
#include <iomanip>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "nilmkit/error.hpp"
#include "nilmkit/metrics.hpp"

namespace nilmkit {

enum class ReportFormat { json, csv, text };

inline ReportFormat parse_report_format(std::string_view name) {
    if (name == "json") return ReportFormat::json;
    if (name == "csv") return ReportFormat::csv;
    if (name == "text") return ReportFormat::text;
    throw ConfigError("unknown report format \"" + std::string(name) +
                      "\" (expected json, csv, or text)");
}

inline const char* to_string(ReportFormat format) {
    switch (format) {
        case ReportFormat::json: return "json";
        case ReportFormat::csv: return "csv";
        case ReportFormat::text: return "text";
    }
    return "text";
}

inline nlohmann::json report_to_json(const MetricsReport& report) {
    nlohmann::json j;
    j["class_names"] = report.confusion.class_names;
    nlohmann::json per_class = nlohmann::json::array();
    for (const ClassMetrics& m : report.per_class) {
        per_class.push_back({{"precision", m.precision},
                             {"recall", m.recall},
                             {"f_measure", m.f_measure},
                             {"g_mean", m.g_mean},
                             {"precision_defined", m.precision_defined},
                             {"recall_defined", m.recall_defined}});
    }
    j["per_class"] = per_class;
    j["overall_accuracy"] = report.overall_accuracy;
    j["error_rate"] = report.error_rate;
    j["macro_f"] = report.macro_f;
    j["macro_g"] = report.macro_g;
    j["confusion"] = report.confusion.counts;
    j["normalized_confusion"] = report.normalized_confusion;
    return j;
}

inline MetricsReport report_from_json(const nlohmann::json& j) {
    MetricsReport report;
    try {
        report.confusion.class_names = j.at("class_names").get<std::vector<std::string>>();
        report.confusion.counts = j.at("confusion").get<std::vector<std::int64_t>>();
        report.normalized_confusion =
            j.at("normalized_confusion").get<std::vector<double>>();
        for (const auto& entry : j.at("per_class")) {
            ClassMetrics m;
            m.precision = entry.at("precision").get<double>();
            m.recall = entry.at("recall").get<double>();
            m.f_measure = entry.at("f_measure").get<double>();
            m.g_mean = entry.at("g_mean").get<double>();
            m.precision_defined = entry.at("precision_defined").get<bool>();
            m.recall_defined = entry.at("recall_defined").get<bool>();
            report.per_class.push_back(m);
        }
        report.overall_accuracy = j.at("overall_accuracy").get<double>();
        report.error_rate = j.at("error_rate").get<double>();
        report.macro_f = j.at("macro_f").get<double>();
        report.macro_g = j.at("macro_g").get<double>();
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("bad report json: ") + e.what());
    }
    std::size_t n = report.confusion.n();
    if (report.confusion.counts.size() != n * n ||
        report.normalized_confusion.size() != n * n || report.per_class.size() != n)
        throw DataError("report json has inconsistent dimensions");
    return report;
}

namespace detail {

inline std::string csv_number(double value) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, ptr);
}

inline std::string render_csv(const MetricsReport& report) {
    std::string out = "class,precision,recall,f_measure,g_mean,accuracy\n";
    for (std::size_t i = 0; i < report.per_class.size(); ++i) {
        const ClassMetrics& m = report.per_class[i];
        out += report.confusion.class_names[i];
        out += ',' + csv_number(m.precision);
        out += ',' + csv_number(m.recall);
        out += ',' + csv_number(m.f_measure);
        out += ',' + csv_number(m.g_mean);
        out += '\n';
    }
    out += "overall,,,";
    out += csv_number(report.macro_f);
    out += ',' + csv_number(report.macro_g);
    out += ',' + csv_number(report.overall_accuracy);
    out += '\n';
    return out;
}

inline std::string render_text(const MetricsReport& report) {
    const auto& names = report.confusion.class_names;
    std::size_t n = names.size();

    std::size_t name_width = std::string("Overall (macro)").size();
    for (const auto& name : names) name_width = std::max(name_width, name.size());
    std::size_t cell_width = 1;
    for (const auto& name : names) cell_width = std::max(cell_width, name.size());
    for (std::int64_t v : report.confusion.counts)
        cell_width = std::max(cell_width, std::to_string(v).size());

    std::ostringstream os;
    os << "Confusion matrix (rows actual, columns predicted):\n\n";
    os << std::string(name_width, ' ');
    for (const auto& name : names) os << "  " << std::setw(static_cast<int>(cell_width)) << name;
    os << '\n';
    for (std::size_t i = 0; i < n; ++i) {
        os << std::setw(static_cast<int>(name_width)) << names[i];
        for (std::size_t j = 0; j < n; ++j)
            os << "  " << std::setw(static_cast<int>(cell_width)) << report.confusion.at(i, j);
        os << '\n';
    }

    os << "\nPer-class metrics:\n\n";
    os << std::left << std::setw(static_cast<int>(name_width)) << "Class" << std::right;
    for (const char* col : {"Precision", "Recall", "F-measure", "G-mean"})
        os << "  " << std::setw(9) << col;
    os << '\n';
    os << std::fixed << std::setprecision(3);
    for (std::size_t i = 0; i < n; ++i) {
        const ClassMetrics& m = report.per_class[i];
        os << std::left << std::setw(static_cast<int>(name_width)) << names[i] << std::right;
        os << "  " << std::setw(9) << m.precision << "  " << std::setw(9) << m.recall
           << "  " << std::setw(9) << m.f_measure << "  " << std::setw(9) << m.g_mean;
        if (!m.precision_defined || !m.recall_defined) os << "  (undefined reported as 0)";
        os << '\n';
    }
    os << std::left << std::setw(static_cast<int>(name_width)) << "Overall (macro)"
       << std::right << "  " << std::setw(9) << ' ' << "  " << std::setw(9) << ' ';
    os << "  " << std::setw(9) << report.macro_f << "  " << std::setw(9) << report.macro_g
       << '\n';
    os << "\nAccuracy:   " << report.overall_accuracy << '\n';
    os << "Error rate: " << report.error_rate << '\n';
    return os.str();
}

}  // namespace detail

inline std::string render_report(const MetricsReport& report, ReportFormat format) {
    switch (format) {
        case ReportFormat::json: return report_to_json(report).dump(2) + "\n";
        case ReportFormat::csv: return detail::render_csv(report);
        case ReportFormat::text: return detail::render_text(report);
    }
    throw ConfigError("unknown report format");
}

}  // namespace nilmkit
