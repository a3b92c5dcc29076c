#pragma once

// Reader/writer for the REDD low-frequency on-disk layout: a per-house
// directory holding a labels file plus one sample file per channel.
//
//   house_<i>/labels.dat        lines of "<channel> <name>"
//   house_<i>/channel_<N>.dat   lines of "<unix_timestamp> <watts>"
//
// All numbers are base-10 ASCII, one record per line, single space
// separator. Watts may be integer or decimal-point form; scientific
// notation is rejected. A missing trailing newline on the last line is
// tolerated.

#include <cctype>
#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <istream>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "nilmkit/error.hpp"

namespace nilmkit {

struct LabelsTable {
    // channel number -> appliance name (single token, no whitespace)
    std::map<int, std::string> entries;

    bool operator==(const LabelsTable&) const = default;
};

struct PowerTrace {
    struct Sample {
        std::int64_t timestamp = 0;  // seconds since Unix epoch
        double watts = 0.0;

        bool operator==(const Sample&) const = default;
    };

    int channel = 0;
    std::vector<Sample> samples;  // timestamps strictly increasing, watts >= 0

    bool operator==(const PowerTrace&) const = default;
};

struct House {
    LabelsTable labels;
    std::map<int, PowerTrace> traces;  // every key appears in labels
};

namespace detail {

// Splits `line` at whitespace. CR from CRLF endings counts as whitespace.
inline std::vector<std::string_view> tokenize(std::string_view line) {
    std::vector<std::string_view> tokens;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        std::size_t start = i;
        while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        if (i > start) tokens.push_back(line.substr(start, i - start));
    }
    return tokens;
}

// Calls fn(line_number, line) for each line; the final line may lack '\n'.
template <typename Fn>
void for_each_line(std::string_view text, Fn&& fn) {
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t nl = text.find('\n', pos);
        std::size_t end = (nl == std::string_view::npos) ? text.size() : nl;
        ++line_no;
        fn(line_no, text.substr(pos, end - pos));
        pos = (nl == std::string_view::npos) ? text.size() : nl + 1;
    }
}

inline bool parse_i64(std::string_view token, std::int64_t& out) {
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), out);
    return ec == std::errc{} && ptr == token.data() + token.size();
}

// Plain decimal only: optional '-', digits, at most one '.'. No exponent,
// no inf/nan spellings.
inline bool parse_watts(std::string_view token, double& out) {
    std::string_view body = token;
    if (!body.empty() && body.front() == '-') body.remove_prefix(1);
    if (body.empty()) return false;
    int dots = 0, digits = 0;
    for (char c : body) {
        if (c == '.') ++dots;
        else if (c >= '0' && c <= '9') ++digits;
        else return false;
    }
    if (dots > 1 || digits == 0) return false;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), out,
                                     std::chars_format::fixed);
    return ec == std::errc{} && ptr == token.data() + token.size();
}

// Shortest fixed-notation decimal that parses back to exactly `value`.
inline std::string format_watts(double value) {
    char buf[512];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::fixed);
    return std::string(buf, ptr);
}

inline std::string slurp(std::istream& in) {
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open " + path.string());
    return slurp(in);
}

}  // namespace detail

inline LabelsTable parse_labels(std::string_view text) {
    LabelsTable table;
    detail::for_each_line(text, [&](std::size_t line_no, std::string_view line) {
        auto tokens = detail::tokenize(line);
        if (tokens.empty()) return;  // blank line
        if (tokens.size() != 2)
            throw DataError("labels line " + std::to_string(line_no) +
                            ": expected \"<channel> <name>\"");
        std::int64_t channel = 0;
        if (!detail::parse_i64(tokens[0], channel) || channel <= 0 ||
            channel > std::numeric_limits<int>::max())
            throw DataError("labels line " + std::to_string(line_no) +
                            ": bad channel number \"" + std::string(tokens[0]) + "\"");
        auto [it, inserted] = table.entries.emplace(static_cast<int>(channel),
                                                    std::string(tokens[1]));
        if (!inserted)
            throw DataError("labels line " + std::to_string(line_no) +
                            ": duplicate channel " + std::to_string(channel));
    });
    return table;
}

inline LabelsTable parse_labels(std::istream& in) {
    return parse_labels(std::string_view(detail::slurp(in)));
}

inline PowerTrace parse_channel(std::string_view text, int channel) {
    if (channel <= 0) throw ConfigError("channel number must be positive");
    PowerTrace trace;
    trace.channel = channel;
    detail::for_each_line(text, [&](std::size_t line_no, std::string_view line) {
        auto tokens = detail::tokenize(line);
        if (tokens.empty()) return;
        if (tokens.size() != 2)
            throw DataError("channel line " + std::to_string(line_no) +
                            ": expected \"<timestamp> <watts>\"");
        PowerTrace::Sample sample;
        if (!detail::parse_i64(tokens[0], sample.timestamp))
            throw DataError("channel line " + std::to_string(line_no) +
                            ": bad timestamp \"" + std::string(tokens[0]) + "\"");
        if (!detail::parse_watts(tokens[1], sample.watts))
            throw DataError("channel line " + std::to_string(line_no) +
                            ": bad watts \"" + std::string(tokens[1]) + "\"");
        std::size_t index = trace.samples.size();
        if (sample.watts < 0.0)
            throw DataError("channel line " + std::to_string(line_no) +
                            ": negative power at sample " + std::to_string(index));
        if (!trace.samples.empty() && sample.timestamp <= trace.samples.back().timestamp)
            throw DataError("channel line " + std::to_string(line_no) +
                            ": non-increasing timestamp at sample " + std::to_string(index));
        trace.samples.push_back(sample);
    });
    return trace;
}

inline PowerTrace parse_channel(std::istream& in, int channel) {
    return parse_channel(std::string_view(detail::slurp(in)), channel);
}

// Inverse of parse_channel: parse_channel(write_channel(t), t.channel) == t
// with bit-exact samples.
inline std::string write_channel(const PowerTrace& trace) {
    std::string out;
    for (const auto& sample : trace.samples) {
        out += std::to_string(sample.timestamp);
        out += ' ';
        out += detail::format_watts(sample.watts);
        out += '\n';
    }
    return out;
}

inline std::string write_labels(const LabelsTable& labels) {
    std::string out;
    for (const auto& [channel, name] : labels.entries) {
        out += std::to_string(channel);
        out += ' ';
        out += name;
        out += '\n';
    }
    return out;
}

inline std::string channel_filename(int channel) {
    return "channel_" + std::to_string(channel) + ".dat";
}

// Loads a house directory. Every channel listed in labels.dat must have its
// channel_<N>.dat file; channel files not listed in labels are skipped with
// a warning.
inline House load_house(const std::filesystem::path& dir) {
    namespace fs = std::filesystem;
    fs::path labels_path = dir / "labels.dat";
    if (!fs::exists(labels_path))
        throw DataError(dir.string() + ": missing labels file labels.dat");

    House house;
    try {
        house.labels = parse_labels(std::string_view(detail::read_file(labels_path)));
    } catch (const DataError& e) {
        throw DataError(labels_path.string() + ": " + e.what());
    }

    for (const auto& [channel, name] : house.labels.entries) {
        fs::path channel_path = dir / channel_filename(channel);
        if (!fs::exists(channel_path))
            throw DataError(dir.string() + ": channel " + std::to_string(channel) + " (" +
                            name + ") listed in labels but " + channel_filename(channel) +
                            " is missing");
        try {
            house.traces[channel] =
                parse_channel(std::string_view(detail::read_file(channel_path)), channel);
        } catch (const DataError& e) {
            throw DataError(channel_path.string() + ": " + e.what());
        }
    }

    // Surplus channel files are tolerated; deficits above are not.
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (!entry.is_regular_file()) continue;
        std::string name = entry.path().filename().string();
        if (!name.starts_with("channel_") || !name.ends_with(".dat")) continue;
        std::string_view num(name);
        num.remove_prefix(8);
        num.remove_suffix(4);
        std::int64_t channel = 0;
        if (!detail::parse_i64(num, channel)) continue;
        if (!house.labels.entries.contains(static_cast<int>(channel)))
            warn(entry.path().string() + " has no labels entry, skipped");
    }
    return house;
}

}  // namespace nilmkit
