// nilmkit command line: ingest / windows / eval / synth.
//
// Exit codes: 0 success, 1 configuration or validation error, 2 data or
// parse error. Warnings go to stderr, never into report payloads.

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "nilmkit/nilmkit.hpp"

namespace fs = std::filesystem;

namespace {

// Every numeric flag tracks whether it was passed so an explicit 0 or
// negative value reaches validation instead of silently keeping the default.
template <typename T>
struct Given {
    T value{};
    bool given = false;
};

struct CliOptions {
    std::string config_path;
    std::vector<std::string> house_dirs;
    Given<double> threshold_watts;
    Given<std::int64_t> min_gap;
    Given<std::int64_t> window_len;
    std::string normalize;
    Given<std::int64_t> k;
    Given<double> train_frac;
    Given<std::uint64_t> seed;
    std::string format;
    std::string out;
};

template <typename T>
void add_given_option(CLI::App* cmd, const std::string& name, Given<T>& slot,
                      const std::string& help) {
    cmd->add_option(name, slot.value, help)->each([&slot](const std::string&) {
        slot.given = true;
    });
}

// Shared flag set; every subcommand takes the same overrides so a single
// config file can drive ingest, windows, and eval alike.
void add_common_flags(CLI::App* cmd, CliOptions& opt) {
    cmd->add_option("--config", opt.config_path, "JSON config file");
    cmd->add_option("--house-dir", opt.house_dirs, "house directory (repeatable)");
    add_given_option(cmd, "--threshold-watts", opt.threshold_watts,
                     "activity threshold above baseline");
    add_given_option(cmd, "--min-gap", opt.min_gap,
                     "merge active runs closer than this many samples");
    add_given_option(cmd, "--window-len", opt.window_len, "feature window length in samples");
    cmd->add_option("--normalize", opt.normalize, "window normalization: none, max, zscore");
    add_given_option(cmd, "--k", opt.k, "number of neighbors");
    add_given_option(cmd, "--train-frac", opt.train_frac, "training fraction in (0,1)");
    add_given_option(cmd, "--seed", opt.seed, "split seed");
    cmd->add_option("--format", opt.format, "report format: json, csv, text");
    cmd->add_option("--out", opt.out, "output path (default stdout)");
}

// Config file first, then CLI flags on top.
nilmkit::ExperimentConfig resolve_config(const CliOptions& opt) {
    nilmkit::ExperimentConfig config;
    if (!opt.config_path.empty()) config = nilmkit::load_config(opt.config_path);
    if (!opt.house_dirs.empty()) {
        config.house_dirs.clear();
        for (const auto& dir : opt.house_dirs) config.house_dirs.emplace_back(dir);
    }
    auto take_nonneg = [](const Given<std::int64_t>& slot, const char* name, std::size_t& out) {
        if (!slot.given) return;
        if (slot.value < 0)
            throw nilmkit::ConfigError(std::string(name) + " must be non-negative");
        out = static_cast<std::size_t>(slot.value);
    };
    if (opt.threshold_watts.given) config.threshold_watts = opt.threshold_watts.value;
    take_nonneg(opt.min_gap, "--min-gap", config.min_gap);
    take_nonneg(opt.window_len, "--window-len", config.window_len);
    if (!opt.normalize.empty()) config.normalize = nilmkit::parse_normalize(opt.normalize);
    take_nonneg(opt.k, "--k", config.k);
    if (opt.train_frac.given) config.train_frac = opt.train_frac.value;
    if (opt.seed.given) config.seed = opt.seed.value;
    if (!opt.format.empty()) config.format = nilmkit::parse_report_format(opt.format);
    if (!opt.out.empty()) config.out = opt.out;
    return config;
}

void write_output(const fs::path& out, const std::string& content) {
    if (out.empty()) {
        std::cout << content;
        return;
    }
    std::ofstream file(out, std::ios::binary);
    if (!file) throw nilmkit::DataError("cannot write " + out.string());
    file << content;
    if (!file) throw nilmkit::DataError("write failed for " + out.string());
}

int cmd_ingest(const CliOptions& opt) {
    nilmkit::ExperimentConfig config = resolve_config(opt);
    if (config.house_dirs.empty())
        throw nilmkit::ConfigError("ingest needs at least one --house-dir (or house_dirs in the config)");
    for (const auto& dir : config.house_dirs) {
        nilmkit::House house = nilmkit::load_house(dir);
        std::cout << dir.string() << ": " << house.traces.size() << " channels\n";
        for (const auto& [channel, trace] : house.traces) {
            const std::string& name = house.labels.entries.at(channel);
            std::cout << "  channel " << channel << " (" << name << "): "
                      << trace.samples.size() << " samples";
            if (!trace.samples.empty()) {
                double min_w = trace.samples.front().watts, max_w = min_w;
                for (const auto& s : trace.samples) {
                    min_w = std::min(min_w, s.watts);
                    max_w = std::max(max_w, s.watts);
                }
                std::cout << ", t = [" << trace.samples.front().timestamp << ", "
                          << trace.samples.back().timestamp << "]"
                          << ", watts = [" << min_w << ", " << max_w << "]";
            }
            std::cout << "\n";
        }
    }
    return 0;
}

int cmd_windows(const CliOptions& opt) {
    nilmkit::ExperimentConfig config = resolve_config(opt);
    if (config.out.empty())
        throw nilmkit::ConfigError("windows needs --out for the dataset csv");
    nilmkit::LabeledDataset ds = nilmkit::build_dataset_from_config(config);
    write_output(config.out, nilmkit::dataset_to_csv(ds));
    fs::path classes_path = config.out;
    classes_path += ".classes";
    write_output(classes_path, nilmkit::class_names_to_text(ds.class_names));
    std::cerr << "wrote " << ds.size() << " windows, " << ds.n_classes() << " classes to "
              << config.out.string() << " (+ " << classes_path.string() << ")\n";
    return 0;
}

int cmd_eval(const CliOptions& opt) {
    nilmkit::ExperimentConfig config = resolve_config(opt);
    nilmkit::MetricsReport report = nilmkit::run_experiment(config);
    write_output(config.out, nilmkit::render_report(report, config.format));
    return 0;
}

int cmd_synth(const std::string& out_dir, std::uint64_t seed, std::int64_t n_samples) {
    if (out_dir.empty()) throw nilmkit::ConfigError("synth needs --out <directory>");
    if (n_samples < 1) throw nilmkit::ConfigError("--n-samples must be >= 1");
    auto profiles = nilmkit::default_profiles();
    nilmkit::House house = nilmkit::generate_corpus(profiles, out_dir,
                                                    static_cast<std::size_t>(n_samples), seed);
    std::cout << "wrote house with " << house.traces.size() << " channels to " << out_dir
              << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Appliance power trace classification toolkit"};
    app.require_subcommand(1);

    CliOptions opt;
    CLI::App* ingest = app.add_subcommand("ingest", "validate and summarize house directories");
    add_common_flags(ingest, opt);
    CLI::App* windows = app.add_subcommand("windows", "emit the labeled window dataset as csv");
    add_common_flags(windows, opt);
    CLI::App* eval = app.add_subcommand("eval", "run the experiment and render a report");
    add_common_flags(eval, opt);

    std::string synth_out;
    std::uint64_t synth_seed = 0;
    std::int64_t synth_samples = 6000;
    CLI::App* synth = app.add_subcommand("synth", "emit a synthetic house in the ingest layout");
    synth->add_option("--out", synth_out, "directory to write the house into")->required();
    synth->add_option("--seed", synth_seed, "generator seed");
    synth->add_option("--n-samples", synth_samples, "samples per channel");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    try {
        if (ingest->parsed()) return cmd_ingest(opt);
        if (windows->parsed()) return cmd_windows(opt);
        if (eval->parsed()) return cmd_eval(opt);
        if (synth->parsed()) return cmd_synth(synth_out, synth_seed, synth_samples);
    } catch (const nilmkit::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const nilmkit::DataError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
