#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <random>

#include "nilmkit/metrics.hpp"

using namespace nilmkit;

namespace {

ConfusionMatrix make_matrix(const std::vector<std::string>& names,
                            const std::vector<std::int64_t>& counts) {
    ConfusionMatrix c;
    c.class_names = names;
    c.counts = counts;
    return c;
}

ConfusionMatrix random_matrix(std::mt19937_64& rng, std::size_t n) {
    std::vector<std::string> names;
    for (std::size_t i = 0; i < n; ++i) names.push_back("c" + std::to_string(i));
    std::vector<std::int64_t> counts(n * n);
    for (auto& v : counts) v = static_cast<std::int64_t>(rng() % 20);
    return make_matrix(names, counts);
}

}  // namespace

TEST_CASE("confusion building counts actual by predicted") {
    auto c = build_confusion({0, 0, 1}, {0, 1, 1}, {"a", "b"});
    CHECK(c.counts == std::vector<std::int64_t>{1, 1, 0, 1});
    CHECK(c.at(0, 0) == 1);
    CHECK(c.at(0, 1) == 1);
    CHECK(c.at(1, 0) == 0);
    CHECK(c.at(1, 1) == 1);
    CHECK(c.total() == 3);
    CHECK(c.diagonal() == 2);
    CHECK(c.row_sum(0) == 2);
    CHECK(c.col_sum(1) == 2);
}

TEST_CASE("confusion building validates its inputs") {
    CHECK_THROWS_AS(build_confusion({0}, {0, 1}, {"a", "b"}), ConfigError);
    CHECK_THROWS_AS(build_confusion({0, 2}, {0, 0}, {"a", "b"}), ConfigError);
    CHECK_THROWS_AS(build_confusion({0, -1}, {0, 0}, {"a", "b"}), ConfigError);
    CHECK_THROWS_AS(build_confusion({0}, {0}, {}), ConfigError);
    CHECK_NOTHROW(build_confusion({}, {}, {"a"}));
}

TEST_CASE("row normalization turns counts into per-class rates") {
    auto c = make_matrix({"a", "b"}, {1, 1, 0, 1});
    auto norm = row_normalize(c);
    REQUIRE(norm.size() == 4);
    CHECK(norm[0] == 0.5);
    CHECK(norm[1] == 0.5);
    CHECK(norm[2] == 0.0);
    CHECK(norm[3] == 1.0);
}

TEST_CASE("row normalization of a diagonal matrix puts ones on the diagonal") {
    auto c = make_matrix({"a", "b", "c"}, {4, 0, 0, 0, 2, 0, 0, 0, 7});
    auto norm = row_normalize(c);
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j)
            CHECK(norm[i * 3 + j] == (i == j ? 1.0 : 0.0));
}

TEST_CASE("row normalization maps empty rows to zeros") {
    auto c = make_matrix({"a", "b"}, {0, 0, 3, 1});
    auto norm = row_normalize(c);
    CHECK(norm[0] == 0.0);
    CHECK(norm[1] == 0.0);
    CHECK(norm[2] == 0.75);
    CHECK(norm[3] == 0.25);
}

TEST_CASE("row normalization preserves the row argmax and yields simplex rows") {
    std::mt19937_64 rng(43);
    for (int trial = 0; trial < 30; ++trial) {
        auto c = random_matrix(rng, 2 + rng() % 5);
        auto norm = row_normalize(c);
        for (std::size_t i = 0; i < c.n(); ++i) {
            double row_total = 0.0;
            std::int64_t best_count = 0;
            double best_rate = 0.0;
            for (std::size_t j = 0; j < c.n(); ++j) {
                row_total += norm[i * c.n() + j];
                best_count = std::max(best_count, c.at(i, j));
                best_rate = std::max(best_rate, norm[i * c.n() + j]);
            }
            if (c.row_sum(i) == 0) {
                CHECK(row_total == 0.0);
            } else {
                CHECK(row_total == Catch::Approx(1.0));
                CHECK(best_rate == Catch::Approx(static_cast<double>(best_count) /
                                                 static_cast<double>(c.row_sum(i))));
            }
        }
    }
}

TEST_CASE("one-vs-rest counts slice the matrix per class") {
    auto c = make_matrix({"a", "b"}, {1, 1, 0, 1});

    auto counts0 = one_vs_rest(c, 0);
    CHECK(counts0.tp == 1);
    CHECK(counts0.fp == 0);
    CHECK(counts0.fn == 1);
    CHECK(counts0.tn == 1);

    auto counts1 = one_vs_rest(c, 1);
    CHECK(counts1.tp == 1);
    CHECK(counts1.fp == 1);
    CHECK(counts1.fn == 0);
    CHECK(counts1.tn == 1);

    CHECK_THROWS_AS(one_vs_rest(c, 2), ConfigError);
}

TEST_CASE("one-vs-rest counts always sum to the matrix total") {
    std::mt19937_64 rng(47);
    for (int trial = 0; trial < 30; ++trial) {
        auto c = random_matrix(rng, 2 + rng() % 5);
        for (std::size_t cls = 0; cls < c.n(); ++cls) {
            auto counts = one_vs_rest(c, cls);
            CHECK(counts.total() == c.total());
            CHECK(counts.tp == c.at(cls, cls));
            CHECK(counts.tp + counts.fn == c.row_sum(cls));
            CHECK(counts.tp + counts.fp == c.col_sum(cls));
        }
    }
}

TEST_CASE("a diagonal matrix has no false positives or negatives") {
    auto c = make_matrix({"a", "b", "c"}, {4, 0, 0, 0, 2, 0, 0, 0, 7});
    for (std::size_t cls = 0; cls < 3; ++cls) {
        auto counts = one_vs_rest(c, cls);
        CHECK(counts.fp == 0);
        CHECK(counts.fn == 0);
    }
}

TEST_CASE("harmonic and geometric means of precision and recall") {
    CHECK(f_measure(1.0, 1.0) == 1.0);
    CHECK(g_mean(1.0, 1.0) == 1.0);
    CHECK(f_measure(1.0, 0.5) == Catch::Approx(2.0 / 3.0));
    CHECK(g_mean(1.0, 0.5) == Catch::Approx(std::sqrt(0.5)));
    CHECK(f_measure(0.917, 0.917) == Catch::Approx(0.917));
    CHECK(g_mean(0.917, 0.917) == Catch::Approx(0.917));
    CHECK(f_measure(0.9, 0.9) == Catch::Approx(0.9));
    CHECK(g_mean(0.9, 0.9) == Catch::Approx(0.9));
    CHECK(f_measure(0.0, 0.0) == 0.0);
    CHECK(g_mean(0.0, 0.0) == 0.0);
}

TEST_CASE("per-class metrics derive from one-vs-rest counts") {
    OneVsRestCounts counts{11, 1, 1, 40};
    auto m = per_class_metrics(counts);
    CHECK(m.precision == Catch::Approx(11.0 / 12.0));
    CHECK(m.recall == Catch::Approx(11.0 / 12.0));
    CHECK(m.f_measure == Catch::Approx(11.0 / 12.0));
    CHECK(m.g_mean == Catch::Approx(11.0 / 12.0));
    CHECK(m.precision_defined);
    CHECK(m.recall_defined);
}

TEST_CASE("per-class metrics handle the lopsided class") {
    OneVsRestCounts counts{1, 0, 1, 10};
    auto m = per_class_metrics(counts);
    CHECK(m.precision == 1.0);
    CHECK(m.recall == 0.5);
    CHECK(m.f_measure == Catch::Approx(2.0 / 3.0));
    CHECK(m.g_mean == Catch::Approx(std::sqrt(0.5)));
}

TEST_CASE("zero denominators zero the metric and clear its flag") {
    OneVsRestCounts no_predictions{0, 0, 3, 10};  // tp + fp = 0
    auto m = per_class_metrics(no_predictions);
    CHECK(m.precision == 0.0);
    CHECK_FALSE(m.precision_defined);
    CHECK(m.recall == 0.0);
    CHECK(m.recall_defined);
    CHECK(m.f_measure == 0.0);
    CHECK(m.g_mean == 0.0);

    OneVsRestCounts no_actuals{0, 2, 0, 10};  // tp + fn = 0
    auto m2 = per_class_metrics(no_actuals);
    CHECK(m2.recall == 0.0);
    CHECK_FALSE(m2.recall_defined);
    CHECK(m2.precision == 0.0);
    CHECK(m2.precision_defined);
}

TEST_CASE("geometric mean dominates the harmonic mean") {
    std::mt19937_64 rng(53);
    std::uniform_real_distribution<double> dist(0.0, 1.0);
    for (int trial = 0; trial < 1000; ++trial) {
        double p = dist(rng);
        double r = dist(rng);
        double f = f_measure(p, r);
        double g = g_mean(p, r);
        CHECK(g >= f);
    }
    CHECK(g_mean(0.7, 0.7) == Catch::Approx(f_measure(0.7, 0.7)));
    CHECK(g_mean(0.9, 0.1) > f_measure(0.9, 0.1));
}

TEST_CASE("overall accuracy is the diagonal fraction") {
    auto c = make_matrix({"a", "b"}, {1, 1, 0, 1});
    auto acc = overall_accuracy(c);
    CHECK(acc.accuracy == Catch::Approx(2.0 / 3.0));
    CHECK(acc.error_rate == Catch::Approx(1.0 / 3.0));

    auto diag = make_matrix({"a", "b"}, {3, 0, 0, 2});
    CHECK(overall_accuracy(diag).accuracy == 1.0);
    CHECK(overall_accuracy(diag).error_rate == 0.0);

    auto off = make_matrix({"a", "b"}, {0, 4, 1, 0});
    CHECK(overall_accuracy(off).accuracy == 0.0);

    auto empty = make_matrix({"a", "b"}, {0, 0, 0, 0});
    CHECK_THROWS_AS(overall_accuracy(empty), ConfigError);
}

TEST_CASE("binary accuracy equals the two-class one-vs-rest identity") {
    std::mt19937_64 rng(59);
    for (int trial = 0; trial < 50; ++trial) {
        auto c = random_matrix(rng, 2);
        if (c.total() == 0) continue;
        auto counts = one_vs_rest(c, 0);
        double via_counts = static_cast<double>(counts.tp + counts.tn) /
                            static_cast<double>(counts.total());
        CHECK(overall_accuracy(c).accuracy == Catch::Approx(via_counts));
    }
}

TEST_CASE("macro average is the unweighted mean") {
    CHECK(macro_average({1.0, 0.917, 0.9, 0.667, 1.0, 1.0, 1.0}) ==
          Catch::Approx(0.926).margin(0.0005));
    CHECK(macro_average({1.0, 0.917, 0.9, 0.707, 1.0, 1.0, 1.0}) ==
          Catch::Approx(0.932).margin(0.0005));
    CHECK(macro_average({0.5}) == 0.5);
    CHECK_THROWS_AS(macro_average({}), ConfigError);
}

TEST_CASE("aggregate report ties every piece together") {
    auto c = build_confusion({0, 0, 1}, {0, 1, 1}, {"a", "b"});
    auto report = aggregate_report(c);
    CHECK(report.confusion == c);
    REQUIRE(report.per_class.size() == 2);
    CHECK(report.per_class[0].precision == 1.0);
    CHECK(report.per_class[0].recall == 0.5);
    CHECK(report.per_class[1].precision == 0.5);
    CHECK(report.per_class[1].recall == 1.0);
    CHECK(report.overall_accuracy == Catch::Approx(2.0 / 3.0));
    CHECK(report.error_rate == Catch::Approx(1.0 / 3.0));
    CHECK(report.macro_f ==
          Catch::Approx((f_measure(1.0, 0.5) + f_measure(0.5, 1.0)) / 2.0));
    CHECK(report.macro_g ==
          Catch::Approx((g_mean(1.0, 0.5) + g_mean(0.5, 1.0)) / 2.0));
    CHECK(report.normalized_confusion == row_normalize(c));
}

TEST_CASE("a perfect single-class report is all ones") {
    auto c = make_matrix({"only"}, {5});
    auto report = aggregate_report(c);
    CHECK(report.per_class[0].precision == 1.0);
    CHECK(report.per_class[0].recall == 1.0);
    CHECK(report.macro_f == 1.0);
    CHECK(report.macro_g == 1.0);
    CHECK(report.overall_accuracy == 1.0);
}

TEST_CASE("macro averages are invariant under class relabeling") {
    std::mt19937_64 rng(61);
    for (int trial = 0; trial < 20; ++trial) {
        std::size_t n = 3 + rng() % 4;
        auto c = random_matrix(rng, n);
        if (c.total() == 0) continue;

        std::vector<std::size_t> perm(n);
        for (std::size_t i = 0; i < n; ++i) perm[i] = i;
        std::shuffle(perm.begin(), perm.end(), rng);
        ConfusionMatrix permuted;
        for (std::size_t i = 0; i < n; ++i)
            permuted.class_names.push_back(c.class_names[perm[i]]);
        permuted.counts.assign(n * n, 0);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                permuted.at(i, j) = c.at(perm[i], perm[j]);

        auto a = aggregate_report(c);
        auto b = aggregate_report(permuted);
        CHECK(a.macro_f == Catch::Approx(b.macro_f));
        CHECK(a.macro_g == Catch::Approx(b.macro_g));
        CHECK(a.overall_accuracy == Catch::Approx(b.overall_accuracy));
    }
}

TEST_CASE("confusion bookkeeping stays consistent for random predictions") {
    std::mt19937_64 rng(67);
    for (int trial = 0; trial < 30; ++trial) {
        std::size_t n_classes = 2 + rng() % 5;
        std::size_t n = 1 + rng() % 200;
        std::vector<int> y_true, y_pred;
        std::vector<std::string> names;
        for (std::size_t i = 0; i < n_classes; ++i) names.push_back("k" + std::to_string(i));
        for (std::size_t i = 0; i < n; ++i) {
            y_true.push_back(static_cast<int>(rng() % n_classes));
            y_pred.push_back(static_cast<int>(rng() % n_classes));
        }
        auto c = build_confusion(y_true, y_pred, names);
        CHECK(c.total() == static_cast<std::int64_t>(n));
        std::int64_t row_total = 0, col_total = 0, correct = 0;
        for (std::size_t i = 0; i < n_classes; ++i) {
            row_total += c.row_sum(i);
            col_total += c.col_sum(i);
        }
        for (std::size_t i = 0; i < n; ++i)
            if (y_true[i] == y_pred[i]) ++correct;
        CHECK(row_total == c.total());
        CHECK(col_total == c.total());
        CHECK(c.diagonal() == correct);
    }
}
