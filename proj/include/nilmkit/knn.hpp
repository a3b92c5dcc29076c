#pragma once

// Exact K-nearest-neighbors classifier. Fitting just stores the training
// windows; every query is an exhaustive scan over all of them. Distances are
// compared as squared values internally, the reported distance is the
// Euclidean root. All tie rules are total and deterministic:
//   - equal distances at the k-boundary break by ascending training index,
//   - tied vote counts break by the tied class holding the best-ranked
//     neighbor.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "nilmkit/error.hpp"
#include "nilmkit/preprocess.hpp"

namespace nilmkit {

struct Neighbor {
    std::size_t index = 0;   // training point index
    double distance = 0.0;

    bool operator==(const Neighbor&) const = default;
};

// k entries, ascending by distance, distance ties by ascending index.
using NeighborSet = std::vector<Neighbor>;

struct ClassDistribution {
    std::vector<double> probs;  // one per class, each a multiple of 1/k, sum 1
};

inline double euclidean_distance(const FeatureWindow& a, const FeatureWindow& b) {
    if (a.size() != b.size())
        throw ConfigError("dimension mismatch: " + std::to_string(a.size()) + " vs " +
                          std::to_string(b.size()));
    double sum = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        double d = a[i] - b[i];
        sum += d * d;
    }
    return std::sqrt(sum);
}

class KnnModel {
public:
    // Stores all training points verbatim; there is nothing to optimize.
    static KnnModel fit(const LabeledDataset& ds) {
        validate_dataset(ds);
        KnnModel model;
        model.points_ = ds.windows;
        model.labels_ = ds.labels;
        model.n_classes_ = ds.n_classes();
        model.dim_ = ds.window_len;
        return model;
    }

    std::size_t size() const { return points_.size(); }
    std::size_t dim() const { return dim_; }
    int n_classes() const { return n_classes_; }
    const std::vector<FeatureWindow>& points() const { return points_; }
    const std::vector<int>& labels() const { return labels_; }

    NeighborSet k_nearest(const FeatureWindow& query, std::size_t k) const {
        check_query(query, k);
        std::vector<std::pair<double, std::size_t>> by_distance;  // (squared, index)
        by_distance.reserve(points_.size());
        for (std::size_t i = 0; i < points_.size(); ++i) {
            double sum = 0.0;
            const FeatureWindow& p = points_[i];
            for (std::size_t d = 0; d < dim_; ++d) {
                double diff = query[d] - p[d];
                sum += diff * diff;
            }
            by_distance.emplace_back(sum, i);
        }
        std::partial_sort(by_distance.begin(), by_distance.begin() + k, by_distance.end());
        NeighborSet neighbors;
        neighbors.reserve(k);
        for (std::size_t i = 0; i < k; ++i)
            neighbors.push_back({by_distance[i].second, std::sqrt(by_distance[i].first)});
        return neighbors;
    }

    // probs[j] = (neighbors with label j) / k
    ClassDistribution class_probabilities(const FeatureWindow& query, std::size_t k) const {
        NeighborSet neighbors = k_nearest(query, k);
        ClassDistribution dist;
        dist.probs.assign(static_cast<std::size_t>(n_classes_), 0.0);
        for (const Neighbor& n : neighbors)
            dist.probs[static_cast<std::size_t>(labels_[n.index])] += 1.0 / static_cast<double>(k);
        return dist;
    }

    int predict(const FeatureWindow& query, std::size_t k) const {
        if (k % 2 == 0)
            warn("k = " + std::to_string(k) + " is even; an odd k avoids most vote ties");
        return predict_impl(query, k);
    }

    // Same per-query results as sequential predict; warns about an even k
    // once instead of per query.
    std::vector<int> predict_batch(const std::vector<FeatureWindow>& queries,
                                   std::size_t k) const {
        if (k % 2 == 0)
            warn("k = " + std::to_string(k) + " is even; an odd k avoids most vote ties");
        std::vector<int> predictions;
        predictions.reserve(queries.size());
        for (const FeatureWindow& query : queries)
            predictions.push_back(predict_impl(query, k));
        return predictions;
    }

private:
    void check_query(const FeatureWindow& query, std::size_t k) const {
        if (query.size() != dim_)
            throw ConfigError("query dimension " + std::to_string(query.size()) +
                              " does not match model dimension " + std::to_string(dim_));
        if (k < 1 || k > points_.size())
            throw ConfigError("k = " + std::to_string(k) + " out of range [1, " +
                              std::to_string(points_.size()) + "]");
    }

    int predict_impl(const FeatureWindow& query, std::size_t k) const {
        NeighborSet neighbors = k_nearest(query, k);
        std::vector<std::size_t> votes(static_cast<std::size_t>(n_classes_), 0);
        for (const Neighbor& n : neighbors) ++votes[static_cast<std::size_t>(labels_[n.index])];
        std::size_t best = *std::max_element(votes.begin(), votes.end());
        // Scanning by rank picks the unique argmax when there is one, and
        // resolves ties toward the class holding the best-ranked neighbor.
        for (const Neighbor& n : neighbors)
            if (votes[static_cast<std::size_t>(labels_[n.index])] == best)
                return labels_[n.index];
        return 0;  // unreachable: some neighbor always carries the max count
    }

    std::vector<FeatureWindow> points_;
    std::vector<int> labels_;
    int n_classes_ = 0;
    std::size_t dim_ = 0;
};

}  // namespace nilmkit
