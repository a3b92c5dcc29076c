#pragma once

// Turns raw per-appliance power traces into the labeled fixed-length window
// dataset the classifier consumes: find where the appliance is active, slice
// the active stretches into non-overlapping windows, and stack the windows
// of all appliances into one dataset.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "nilmkit/error.hpp"
#include "nilmkit/redd.hpp"

namespace nilmkit {

// Fixed-length vector of power values; the classifier's feature point.
using FeatureWindow = std::vector<double>;

// Inclusive index range into a trace's sample list.
struct ActivitySegment {
    std::size_t start = 0;
    std::size_t end = 0;  // >= start

    std::size_t length() const { return end - start + 1; }

    bool operator==(const ActivitySegment&) const = default;
};

enum class Normalize { none, max, zscore };

inline Normalize parse_normalize(std::string_view name) {
    if (name == "none") return Normalize::none;
    if (name == "max") return Normalize::max;
    if (name == "zscore") return Normalize::zscore;
    throw ConfigError("unknown normalize mode \"" + std::string(name) +
                      "\" (expected none, max, or zscore)");
}

inline const char* to_string(Normalize mode) {
    switch (mode) {
        case Normalize::none: return "none";
        case Normalize::max: return "max";
        case Normalize::zscore: return "zscore";
    }
    return "none";
}

struct LabeledDataset {
    std::vector<FeatureWindow> windows;
    std::vector<int> labels;               // parallel to windows, values < n_classes
    std::vector<std::string> class_names;  // unique, sorted lexicographically
    std::size_t window_len = 0;

    std::size_t size() const { return windows.size(); }
    int n_classes() const { return static_cast<int>(class_names.size()); }

    bool operator==(const LabeledDataset&) const = default;
};

// Throws ConfigError if `ds` violates any LabeledDataset invariant.
inline void validate_dataset(const LabeledDataset& ds) {
    if (ds.windows.size() != ds.labels.size())
        throw ConfigError("dataset windows and labels differ in length");
    if (ds.class_names.empty()) throw ConfigError("dataset has no classes");
    if (ds.window_len == 0) throw ConfigError("dataset window length must be >= 1");
    for (std::size_t i = 1; i < ds.class_names.size(); ++i)
        if (!(ds.class_names[i - 1] < ds.class_names[i]))
            throw ConfigError("dataset class names must be unique and sorted");
    for (int label : ds.labels)
        if (label < 0 || label >= ds.n_classes())
            throw ConfigError("dataset label " + std::to_string(label) + " out of range");
    for (const auto& window : ds.windows) {
        if (window.size() != ds.window_len)
            throw ConfigError("dataset window length mismatch");
        for (double v : window)
            if (!std::isfinite(v)) throw ConfigError("dataset window has non-finite value");
    }
}

// Median of all sample powers; the two middle values are averaged for even
// counts. Used as the activity baseline — robust against long on-periods.
inline double trace_baseline(const PowerTrace& trace) {
    if (trace.samples.empty()) return 0.0;
    std::vector<double> powers;
    powers.reserve(trace.samples.size());
    for (const auto& sample : trace.samples) powers.push_back(sample.watts);
    std::size_t mid = powers.size() / 2;
    std::nth_element(powers.begin(), powers.begin() + mid, powers.end());
    double upper = powers[mid];
    if (powers.size() % 2 != 0) return upper;
    double lower = *std::max_element(powers.begin(), powers.begin() + mid);
    return (lower + upper) / 2.0;
}

// A sample is active iff power - baseline >= threshold_watts. Maximal runs
// of active samples become segments; runs separated by a gap of fewer than
// min_gap samples are merged, gap included.
inline std::vector<ActivitySegment> detect_segments(const PowerTrace& trace,
                                                    double threshold_watts,
                                                    std::size_t min_gap) {
    if (!(threshold_watts > 0.0)) throw ConfigError("threshold_watts must be > 0");
    std::vector<ActivitySegment> segments;
    if (trace.samples.empty()) return segments;

    double baseline = trace_baseline(trace);
    bool in_run = false;
    std::size_t run_start = 0;
    auto close_run = [&](std::size_t run_end) {
        if (!segments.empty() && run_start - segments.back().end - 1 < min_gap)
            segments.back().end = run_end;  // merge across the short gap
        else
            segments.push_back({run_start, run_end});
    };
    for (std::size_t i = 0; i < trace.samples.size(); ++i) {
        bool active = trace.samples[i].watts - baseline >= threshold_watts;
        if (active && !in_run) {
            in_run = true;
            run_start = i;
        } else if (!active && in_run) {
            in_run = false;
            close_run(i - 1);
        }
    }
    if (in_run) close_run(trace.samples.size() - 1);
    return segments;
}

namespace detail {

inline void normalize_window(FeatureWindow& window, Normalize mode) {
    switch (mode) {
        case Normalize::none:
            return;
        case Normalize::max: {
            double max = *std::max_element(window.begin(), window.end());
            if (max == 0.0) return;  // all-zero window left unchanged
            for (double& v : window) v /= max;
            return;
        }
        case Normalize::zscore: {
            double mean = 0.0;
            for (double v : window) mean += v;
            mean /= static_cast<double>(window.size());
            double var = 0.0;
            for (double v : window) var += (v - mean) * (v - mean);
            var /= static_cast<double>(window.size());
            double sd = std::sqrt(var);
            if (sd == 0.0) {
                std::fill(window.begin(), window.end(), 0.0);
                return;
            }
            for (double& v : window) v = (v - mean) / sd;
            return;
        }
    }
}

}  // namespace detail

// Each segment of length m yields floor(m / window_len) consecutive
// non-overlapping windows starting at the segment start; the tail is
// discarded. Normalization is applied per window.
inline std::vector<FeatureWindow> extract_windows(const PowerTrace& trace,
                                                  const std::vector<ActivitySegment>& segments,
                                                  std::size_t window_len,
                                                  Normalize mode = Normalize::none) {
    if (window_len == 0) throw ConfigError("window_len must be >= 1");
    std::vector<FeatureWindow> windows;
    for (const auto& segment : segments) {
        if (segment.end < segment.start || segment.end >= trace.samples.size())
            throw ConfigError("segment out of range for trace");
        std::size_t count = segment.length() / window_len;
        for (std::size_t w = 0; w < count; ++w) {
            FeatureWindow window(window_len);
            std::size_t base = segment.start + w * window_len;
            for (std::size_t i = 0; i < window_len; ++i)
                window[i] = trace.samples[base + i].watts;
            detail::normalize_window(window, mode);
            windows.push_back(std::move(window));
        }
    }
    return windows;
}

// Stacks per-appliance windows into one dataset. Class names are the sorted
// appliance names; windows are concatenated in class order, stable within
// each class.
inline LabeledDataset build_dataset(const std::map<std::string, std::vector<FeatureWindow>>& per_appliance) {
    LabeledDataset ds;
    std::size_t total = 0;
    for (const auto& [name, windows] : per_appliance) {
        if (name.empty()) throw ConfigError("appliance name must be non-empty");
        ds.class_names.push_back(name);
        total += windows.size();
    }
    if (total == 0) throw ConfigError("empty dataset: no windows for any appliance");

    int label = 0;
    for (const auto& [name, windows] : per_appliance) {
        for (const auto& window : windows) {
            if (ds.window_len == 0) ds.window_len = window.size();
            if (window.size() != ds.window_len)
                throw ConfigError("mixed window lengths: expected " +
                                  std::to_string(ds.window_len) + ", got " +
                                  std::to_string(window.size()) + " for \"" + name + "\"");
            ds.windows.push_back(window);
            ds.labels.push_back(label);
        }
        ++label;
    }
    validate_dataset(ds);
    return ds;
}

// --- dataset CSV interchange -------------------------------------------------
//
// Header "label,f0,f1,...,f{L-1}", one window per row with the class index
// first. Class names travel in a side-car text file, one name per line in
// index order.

namespace detail {

inline std::string format_value(double value) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, ptr);
}

inline std::vector<std::string_view> split_csv(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t pos = 0;
    while (true) {
        std::size_t comma = line.find(',', pos);
        if (comma == std::string_view::npos) {
            fields.push_back(line.substr(pos));
            return fields;
        }
        fields.push_back(line.substr(pos, comma - pos));
        pos = comma + 1;
    }
}

}  // namespace detail

inline std::string dataset_to_csv(const LabeledDataset& ds) {
    std::string out = "label";
    for (std::size_t i = 0; i < ds.window_len; ++i) out += ",f" + std::to_string(i);
    out += '\n';
    for (std::size_t row = 0; row < ds.windows.size(); ++row) {
        out += std::to_string(ds.labels[row]);
        for (double v : ds.windows[row]) {
            out += ',';
            out += detail::format_value(v);
        }
        out += '\n';
    }
    return out;
}

inline std::string class_names_to_text(const std::vector<std::string>& names) {
    std::string out;
    for (const auto& name : names) {
        out += name;
        out += '\n';
    }
    return out;
}

inline std::vector<std::string> class_names_from_text(std::string_view text) {
    std::vector<std::string> names;
    detail::for_each_line(text, [&](std::size_t line_no, std::string_view line) {
        auto tokens = detail::tokenize(line);
        if (tokens.empty()) return;
        if (tokens.size() != 1)
            throw DataError("class names line " + std::to_string(line_no) +
                            ": expected a single token");
        names.emplace_back(tokens[0]);
    });
    if (names.empty()) throw DataError("class name list is empty");
    for (std::size_t i = 1; i < names.size(); ++i)
        if (!(names[i - 1] < names[i]))
            throw DataError("class names must be unique and sorted");
    return names;
}

inline LabeledDataset dataset_from_csv(std::string_view csv,
                                       std::vector<std::string> class_names) {
    LabeledDataset ds;
    ds.class_names = std::move(class_names);
    if (ds.class_names.empty()) throw DataError("class name list is empty");
    bool saw_header = false;
    detail::for_each_line(csv, [&](std::size_t line_no, std::string_view line) {
        if (line.empty()) return;
        auto fields = detail::split_csv(line);
        if (!saw_header) {
            if (fields.size() < 2 || fields[0] != "label")
                throw DataError("csv line 1: expected header \"label,f0,...\"");
            for (std::size_t i = 1; i < fields.size(); ++i)
                if (fields[i] != "f" + std::to_string(i - 1))
                    throw DataError("csv line 1: bad header field \"" +
                                    std::string(fields[i]) + "\"");
            ds.window_len = fields.size() - 1;
            saw_header = true;
            return;
        }
        if (fields.size() != ds.window_len + 1)
            throw DataError("csv line " + std::to_string(line_no) + ": expected " +
                            std::to_string(ds.window_len + 1) + " fields, got " +
                            std::to_string(fields.size()));
        std::int64_t label = 0;
        if (!detail::parse_i64(fields[0], label) || label < 0 ||
            label >= static_cast<std::int64_t>(ds.class_names.size()))
            throw DataError("csv line " + std::to_string(line_no) + ": bad label \"" +
                            std::string(fields[0]) + "\"");
        FeatureWindow window(ds.window_len);
        for (std::size_t i = 0; i < ds.window_len; ++i) {
            std::string_view field = fields[i + 1];
            auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(),
                                             window[i]);
            if (ec != std::errc{} || ptr != field.data() + field.size() ||
                !std::isfinite(window[i]))
                throw DataError("csv line " + std::to_string(line_no) + ": bad value \"" +
                                std::string(field) + "\"");
        }
        ds.labels.push_back(static_cast<int>(label));
        ds.windows.push_back(std::move(window));
    });
    if (!saw_header) throw DataError("csv input is empty");
    if (ds.windows.empty()) throw DataError("csv has no data rows");
    validate_dataset(ds);
    return ds;
}

}  // namespace nilmkit
