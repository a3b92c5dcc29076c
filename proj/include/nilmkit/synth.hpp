#pragma once

// Seeded synthetic appliance traces in the same on-disk layout the ingest
// code reads. Each appliance is a rectangular on/off wave: durations get a
// multiplicative jitter, amplitudes get additive Gaussian noise clamped at
// zero. Good enough to exercise the full pipeline without the real dataset.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "nilmkit/error.hpp"
#include "nilmkit/redd.hpp"

namespace nilmkit {

struct ApplianceProfile {
    std::string name;               // single token, no whitespace
    double on_power = 0.0;          // watts, > standby_power
    double standby_power = 0.0;     // watts, >= 0
    std::size_t on_duration = 1;    // samples
    std::size_t off_duration = 1;   // samples
    double noise_sigma = 0.0;       // watts
    double jitter = 0.0;            // fractional duration variation, in [0, 1)
};

namespace detail {

inline void validate_profile(const ApplianceProfile& profile) {
    if (profile.name.empty() || tokenize(profile.name).size() != 1)
        throw ConfigError("profile name must be a single non-empty token");
    if (profile.standby_power < 0.0) throw ConfigError("standby_power must be >= 0");
    if (!(profile.on_power > profile.standby_power))
        throw ConfigError("on_power must exceed standby_power for \"" + profile.name + "\"");
    if (profile.on_duration < 1 || profile.off_duration < 1)
        throw ConfigError("durations must be >= 1 sample for \"" + profile.name + "\"");
    if (profile.noise_sigma < 0.0) throw ConfigError("noise_sigma must be >= 0");
    if (profile.jitter < 0.0 || profile.jitter >= 1.0)
        throw ConfigError("jitter must be in [0, 1)");
}

inline std::size_t jittered_duration(std::size_t base, double jitter, std::mt19937_64& rng) {
    if (jitter == 0.0) return base;
    std::uniform_real_distribution<double> u(-jitter, jitter);
    auto scaled = static_cast<std::int64_t>(
        std::lround(static_cast<double>(base) * (1.0 + u(rng))));
    return static_cast<std::size_t>(std::max<std::int64_t>(1, scaled));
}

}  // namespace detail

// Alternating off/on pulses starting with an off period. Deterministic per
// seed: the same call always yields the same trace.
inline PowerTrace generate_trace(const ApplianceProfile& profile, std::size_t n_samples,
                                 std::int64_t start_ts, std::int64_t sample_period,
                                 std::uint64_t seed) {
    detail::validate_profile(profile);
    if (n_samples < 1) throw ConfigError("n_samples must be >= 1");
    if (sample_period < 1) throw ConfigError("sample_period must be >= 1 second");

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> noise(0.0, profile.noise_sigma);

    PowerTrace trace;
    trace.channel = 1;
    trace.samples.reserve(n_samples);
    bool on = false;
    std::size_t remaining = detail::jittered_duration(profile.off_duration, profile.jitter, rng);
    for (std::size_t i = 0; i < n_samples; ++i) {
        while (remaining == 0) {
            on = !on;
            remaining = detail::jittered_duration(
                on ? profile.on_duration : profile.off_duration, profile.jitter, rng);
        }
        --remaining;
        double watts = on ? profile.on_power : profile.standby_power;
        if (profile.noise_sigma > 0.0) watts += noise(rng);
        trace.samples.push_back({start_ts + static_cast<std::int64_t>(i) * sample_period,
                                 std::max(0.0, watts)});
    }
    return trace;
}

// Writes labels.dat plus one channel file per profile, channels numbered
// 1..n in profile order. Returns the house as written; load_house on the
// directory reproduces it exactly.
inline House generate_corpus(const std::vector<ApplianceProfile>& profiles,
                             const std::filesystem::path& dir, std::size_t n_samples,
                             std::uint64_t seed, std::int64_t start_ts = 1300000000,
                             std::int64_t sample_period = 1) {
    namespace fs = std::filesystem;
    std::set<std::string> names;
    for (const auto& profile : profiles)
        if (!names.insert(profile.name).second)
            throw ConfigError("duplicate profile name \"" + profile.name + "\"");

    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw DataError("cannot create directory " + dir.string() + ": " + ec.message());

    House house;
    for (std::size_t i = 0; i < profiles.size(); ++i) {
        int channel = static_cast<int>(i) + 1;
        PowerTrace trace =
            generate_trace(profiles[i], n_samples, start_ts, sample_period, seed + i);
        trace.channel = channel;
        house.labels.entries[channel] = profiles[i].name;
        house.traces[channel] = std::move(trace);
    }

    auto write_file = [&](const fs::path& path, const std::string& content) {
        std::ofstream out(path, std::ios::binary);
        if (!out) throw DataError("cannot write " + path.string());
        out << content;
        if (!out) throw DataError("write failed for " + path.string());
    };
    write_file(dir / "labels.dat", write_labels(house.labels));
    for (const auto& [channel, trace] : house.traces)
        write_file(dir / channel_filename(channel), write_channel(trace));
    return house;
}

// Seven well-separated fixture appliances spanning roughly 80 W to 1.8 kW.
// Duty cycles stay under 50% so the median baseline sits at standby level.
inline std::vector<ApplianceProfile> default_profiles() {
    return {
        {"electronics", 80.0, 2.0, 200, 300, 2.0, 0.2},
        {"furnace", 250.0, 0.0, 220, 280, 3.0, 0.2},
        {"kitchen_outlets", 420.0, 0.0, 180, 320, 3.0, 0.2},
        {"bath_gfi", 700.0, 0.0, 160, 340, 4.0, 0.2},
        {"washer_dryer", 1000.0, 0.0, 240, 360, 5.0, 0.2},
        {"oven", 1400.0, 0.0, 200, 300, 5.0, 0.2},
        {"microwave", 1800.0, 1.0, 120, 380, 5.0, 0.2},
    };
}

}  // namespace nilmkit
