#pragma once

// End-to-end experiment driver: load houses, select channels, window the
// traces, split, fit, predict the test windows, and aggregate the report.
// Everything downstream of the config is deterministic, including the seeded
// split, so identical configs produce byte-identical reports.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "nilmkit/error.hpp"
#include "nilmkit/knn.hpp"
#include "nilmkit/metrics.hpp"
#include "nilmkit/preprocess.hpp"
#include "nilmkit/redd.hpp"
#include "nilmkit/report.hpp"
#include "nilmkit/split.hpp"

namespace nilmkit {

// One sub-metered channel: house is a 0-based index into house_dirs.
struct ChannelRef {
    std::size_t house = 0;
    int channel = 0;
};

struct ExperimentConfig {
    std::vector<std::filesystem::path> house_dirs;
    // appliance name -> channels whose windows feed that class
    std::map<std::string, std::vector<ChannelRef>> channel_selection;
    double threshold_watts = 10.0;
    std::size_t min_gap = 4;
    std::size_t window_len = 50;
    Normalize normalize = Normalize::none;
    std::size_t k = 5;
    double train_frac = 0.9;
    std::uint64_t seed = 0;
    std::filesystem::path out;  // empty means stdout
    ReportFormat format = ReportFormat::text;
};

inline void validate_config(const ExperimentConfig& config) {
    if (!(config.threshold_watts > 0.0)) throw ConfigError("threshold_watts must be > 0");
    if (config.window_len < 1) throw ConfigError("window_len must be >= 1");
    if (config.k < 1) throw ConfigError("k must be >= 1");
    if (!(config.train_frac > 0.0) || !(config.train_frac < 1.0))
        throw ConfigError("train_frac must be strictly between 0 and 1");
    for (const auto& [name, refs] : config.channel_selection) {
        if (name.empty()) throw ConfigError("channel_selection has an empty appliance name");
        for (const ChannelRef& ref : refs) {
            if (ref.house >= config.house_dirs.size())
                throw ConfigError("channel_selection for \"" + name + "\": house index " +
                                  std::to_string(ref.house) + " out of range (have " +
                                  std::to_string(config.house_dirs.size()) + " house dirs)");
            if (ref.channel <= 0)
                throw ConfigError("channel_selection for \"" + name +
                                  "\": channel numbers must be positive");
        }
    }
}

// Reads a config JSON document mirroring the ExperimentConfig field names.
// Unknown keys get a warning so typos do not silently fall back to defaults.
inline ExperimentConfig config_from_json(const nlohmann::json& j) {
    static const char* known_keys[] = {"house_dirs", "channel_selection", "threshold_watts",
                                       "min_gap", "window_len", "normalize", "k",
                                       "train_frac", "seed", "out", "format"};
    ExperimentConfig config;
    auto get_unsigned = [&j](const char* key, auto fallback) {
        using T = decltype(fallback);
        if (!j.contains(key)) return fallback;
        const auto& value = j.at(key);
        if (!value.is_number_integer() ||
            (!value.is_number_unsigned() && value.get<std::int64_t>() < 0))
            throw ConfigError(std::string("config \"") + key +
                              "\" must be a non-negative integer");
        return value.get<T>();
    };
    try {
        if (!j.is_object()) throw ConfigError("config must be a JSON object");
        for (const auto& [key, value] : j.items()) {
            bool known = false;
            for (const char* k : known_keys) known = known || key == k;
            if (!known) warn("config: unknown key \"" + key + "\" ignored");
        }
        if (j.contains("house_dirs")) {
            if (!j.at("house_dirs").is_array())
                throw ConfigError("config \"house_dirs\" must be an array of paths");
            for (const auto& dir : j.at("house_dirs"))
                config.house_dirs.emplace_back(dir.get<std::string>());
        }
        if (j.contains("channel_selection")) {
            if (!j.at("channel_selection").is_object())
                throw ConfigError(
                    "config \"channel_selection\" must map names to [house, channel] lists");
            for (const auto& [name, refs] : j.at("channel_selection").items()) {
                if (!refs.is_array())
                    throw ConfigError("channel_selection for \"" + name +
                                      "\" must hold [house, channel] pairs");
                std::vector<ChannelRef>& out = config.channel_selection[name];
                for (const auto& pair : refs) {
                    if (!pair.is_array() || pair.size() != 2)
                        throw ConfigError("channel_selection for \"" + name +
                                          "\" must hold [house, channel] pairs");
                    out.push_back({pair.at(0).get<std::size_t>(), pair.at(1).get<int>()});
                }
            }
        }
        if (j.contains("threshold_watts")) config.threshold_watts = j.at("threshold_watts").get<double>();
        config.min_gap = get_unsigned("min_gap", config.min_gap);
        config.window_len = get_unsigned("window_len", config.window_len);
        if (j.contains("normalize"))
            config.normalize = parse_normalize(j.at("normalize").get<std::string>());
        config.k = get_unsigned("k", config.k);
        if (j.contains("train_frac")) config.train_frac = j.at("train_frac").get<double>();
        config.seed = get_unsigned("seed", config.seed);
        if (j.contains("out")) config.out = j.at("out").get<std::string>();
        if (j.contains("format"))
            config.format = parse_report_format(j.at("format").get<std::string>());
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("bad config json: ") + e.what());
    }
    return config;
}

inline ExperimentConfig load_config(const std::filesystem::path& path) {
    std::string text = detail::read_file(path);
    nlohmann::json j = nlohmann::json::parse(text, nullptr, false);
    if (j.is_discarded()) throw ConfigError(path.string() + ": invalid JSON");
    try {
        return config_from_json(j);
    } catch (const ConfigError& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
}

// Windows every selected channel and stacks the per-appliance results into
// one dataset. Shared by the eval pipeline and the `windows` CLI command.
inline LabeledDataset build_dataset_from_config(const ExperimentConfig& config) {
    validate_config(config);
    if (config.channel_selection.empty())
        throw ConfigError("empty dataset: channel_selection selects nothing");

    std::vector<House> houses;
    houses.reserve(config.house_dirs.size());
    for (const auto& dir : config.house_dirs) houses.push_back(load_house(dir));

    std::map<std::string, std::vector<FeatureWindow>> per_appliance;
    for (const auto& [name, refs] : config.channel_selection) {
        auto& windows = per_appliance[name];
        for (const ChannelRef& ref : refs) {
            const House& house = houses[ref.house];
            auto it = house.traces.find(ref.channel);
            if (it == house.traces.end())
                throw ConfigError("channel_selection for \"" + name + "\": house " +
                                  config.house_dirs[ref.house].string() +
                                  " has no channel " + std::to_string(ref.channel));
            auto segments = detect_segments(it->second, config.threshold_watts, config.min_gap);
            auto extracted =
                extract_windows(it->second, segments, config.window_len, config.normalize);
            windows.insert(windows.end(), extracted.begin(), extracted.end());
        }
        if (windows.empty())
            throw ConfigError("appliance \"" + name +
                              "\" produced no windows; lower threshold_watts or window_len, "
                              "or check the selected channels");
    }
    return build_dataset(per_appliance);
}

inline MetricsReport run_experiment(const ExperimentConfig& config) {
    LabeledDataset ds = build_dataset_from_config(config);

    SplitIndices split = stratified_split(ds, config.train_frac, config.seed);
    if (split.test.empty())
        throw ConfigError("split left the test set empty; lower train_frac or add data");
    if (config.k > split.train.size())
        throw ConfigError("k = " + std::to_string(config.k) +
                          " exceeds the training set size " + std::to_string(split.train.size()));

    LabeledDataset train = subset(ds, split.train);
    KnnModel model = KnnModel::fit(train);

    std::vector<FeatureWindow> queries;
    std::vector<int> y_true;
    queries.reserve(split.test.size());
    for (std::size_t i : split.test) {
        queries.push_back(ds.windows[i]);
        y_true.push_back(ds.labels[i]);
    }
    std::vector<int> y_pred = model.predict_batch(queries, config.k);

    return aggregate_report(build_confusion(y_true, y_pred, ds.class_names));
}

}  // namespace nilmkit
