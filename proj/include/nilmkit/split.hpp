#pragma once

// Seeded stratified train/test split. Within each class the indices are
// shuffled by a Fisher-Yates pass over one shared mt19937_64 stream, the
// first round(count * train_frac) go to train, the rest to test. The
// shuffle is hand-rolled so the same seed gives the same split on every
// platform and standard library.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "nilmkit/error.hpp"
#include "nilmkit/preprocess.hpp"

namespace nilmkit {

struct SplitIndices {
    std::vector<std::size_t> train;  // sorted ascending
    std::vector<std::size_t> test;   // sorted ascending, disjoint from train

    bool operator==(const SplitIndices&) const = default;
};

namespace detail {

inline void seeded_shuffle(std::vector<std::size_t>& v, std::mt19937_64& rng) {
    for (std::size_t i = v.size(); i > 1; --i) {
        std::size_t j = static_cast<std::size_t>(rng() % i);  // bias is irrelevant here
        std::swap(v[i - 1], v[j]);
    }
}

}  // namespace detail

inline SplitIndices stratified_split(const LabeledDataset& ds, double train_frac,
                                     std::uint64_t seed) {
    validate_dataset(ds);
    if (ds.size() == 0) throw ConfigError("cannot split an empty dataset");
    if (!(train_frac > 0.0) || !(train_frac < 1.0))
        throw ConfigError("train_frac must be strictly between 0 and 1");

    std::vector<std::vector<std::size_t>> by_class(static_cast<std::size_t>(ds.n_classes()));
    for (std::size_t i = 0; i < ds.labels.size(); ++i)
        by_class[static_cast<std::size_t>(ds.labels[i])].push_back(i);

    std::mt19937_64 rng(seed);
    SplitIndices split;
    for (std::size_t cls = 0; cls < by_class.size(); ++cls) {
        auto& indices = by_class[cls];
        if (indices.empty())
            throw ConfigError("class \"" + ds.class_names[cls] +
                              "\" has no samples; every class must contribute to train");
        if (indices.size() == 1)
            warn("class \"" + ds.class_names[cls] +
                 "\" has a single sample; it goes entirely to train");
        detail::seeded_shuffle(indices, rng);
        std::size_t n_train = static_cast<std::size_t>(
            std::lround(static_cast<double>(indices.size()) * train_frac));
        if (n_train == 0) n_train = 1;  // every class keeps a training sample
        split.train.insert(split.train.end(), indices.begin(), indices.begin() + n_train);
        split.test.insert(split.test.end(), indices.begin() + n_train, indices.end());
    }
    std::sort(split.train.begin(), split.train.end());
    std::sort(split.test.begin(), split.test.end());
    return split;
}

// New dataset holding the picked windows, same classes and window length.
inline LabeledDataset subset(const LabeledDataset& ds, const std::vector<std::size_t>& indices) {
    LabeledDataset out;
    out.class_names = ds.class_names;
    out.window_len = ds.window_len;
    for (std::size_t i : indices) {
        if (i >= ds.size()) throw ConfigError("subset index out of range");
        out.windows.push_back(ds.windows[i]);
        out.labels.push_back(ds.labels[i]);
    }
    return out;
}

}  // namespace nilmkit
