#include <doctest.h>

#include <algorithm>
#include <set>

#include "clex/binning.hpp"
#include "clex/common.hpp"
#include "helpers.hpp"
#include "oracles.hpp"

using namespace clex;

namespace {

std::vector<std::pair<double, double>> endpoints(const std::vector<Interval>& ivs) {
    std::vector<std::pair<double, double>> out;
    for (const auto& iv : ivs) out.emplace_back(iv.lo, iv.hi);
    return out;
}

std::vector<double> iota_d(int from, int to) {  // inclusive
    std::vector<double> v;
    for (int i = from; i <= to; ++i) v.push_back(i);
    return v;
}

}  // namespace

TEST_CASE("equal width splits the span into k closed intervals") {
    CHECK(endpoints(bin_equal_width(iota_d(0, 10), 2)) ==
          std::vector<std::pair<double, double>>{{0, 5}, {5, 10}});
    CHECK(endpoints(bin_equal_width(iota_d(0, 9), 3)) ==
          std::vector<std::pair<double, double>>{{0, 3}, {3, 6}, {6, 9}});
}

TEST_CASE("equal width bins have equal width on uniform data") {
    Rng rng(11);
    std::vector<double> v;
    for (int i = 0; i < 500; ++i) v.push_back(rng.uniform(16.0, 90.0));
    auto ivs = bin_equal_width(v, 5);
    REQUIRE(ivs.size() == 5);
    double lo = *std::min_element(v.begin(), v.end());
    double hi = *std::max_element(v.begin(), v.end());
    double expected = (hi - lo) / 5.0;
    for (const auto& iv : ivs) CHECK(iv.hi - iv.lo == doctest::Approx(expected).epsilon(1e-12));
    CHECK(ivs.front().lo == lo);
    CHECK(ivs.back().hi == hi);
}

TEST_CASE("equal width rejects degenerate input") {
    CHECK_THROWS_AS(bin_equal_width({}, 3), std::invalid_argument);
    CHECK_THROWS_AS(bin_equal_width({4, 4, 4}, 3), std::invalid_argument);
}

TEST_CASE("equal frequency boundaries sit at inverse-ECDF quantiles") {
    CHECK(endpoints(bin_equal_frequency({1, 2, 3, 4, 5, 6}, 3)) ==
          std::vector<std::pair<double, double>>{{1, 2}, {2, 4}, {4, 6}});
}

TEST_CASE("equal frequency collapses duplicate boundaries") {
    std::vector<double> v{1, 1, 1, 100, 100, 100};
    CHECK(endpoints(bin_equal_frequency(v, 2)) ==
          std::vector<std::pair<double, double>>{{1, 100}});
}

TEST_CASE("equal frequency membership counts on 1..100, k=4") {
    auto ivs = bin_equal_frequency(iota_d(1, 100), 4);
    REQUIRE(ivs.size() == 4);
    CHECK(endpoints(ivs) ==
          std::vector<std::pair<double, double>>{{1, 25}, {25, 50}, {50, 75}, {75, 100}});
    // closed intervals share boundary values, so interior bins count one
    // extra member: 25, then 26 each
    std::vector<int> members;
    for (const auto& iv : ivs) {
        int n = 0;
        for (int x = 1; x <= 100; ++x) n += iv.contains(x);
        members.push_back(n);
    }
    CHECK(members == std::vector<int>{25, 26, 26, 26});
}

TEST_CASE("1-d kmeans separates well-separated groups exactly") {
    CHECK(endpoints(bin_kmeans_1d({1, 2, 100, 101}, 2)) ==
          std::vector<std::pair<double, double>>{{1, 2}, {100, 101}});
}

TEST_CASE("1-d kmeans drops single-point groups") {
    // optimal 3-partition of {0,1,2},{10,11,12},{50}; the {50} group is
    // degenerate and emits no interval
    CHECK(endpoints(bin_kmeans_1d({0, 1, 2, 10, 11, 12, 50}, 3)) ==
          std::vector<std::pair<double, double>>{{0, 2}, {10, 12}});
}

TEST_CASE("1-d kmeans with k=1 spans the whole range") {
    CHECK(endpoints(bin_kmeans_1d({5, 3, 9}, 1)) ==
          std::vector<std::pair<double, double>>{{3, 9}});
}

TEST_CASE("1-d kmeans rejects k above the distinct count") {
    CHECK_THROWS_AS(bin_kmeans_1d({1, 1, 2, 2}, 3), std::invalid_argument);
}

TEST_CASE("1-d kmeans equals exhaustive enumeration on small inputs") {
    Rng rng(97);
    for (int trial = 0; trial < 60; ++trial) {
        int distinct = 3 + static_cast<int>(rng.below(10));  // 3..12
        int k = 2 + static_cast<int>(rng.below(std::min(distinct, 5) - 1));
        std::vector<double> values;
        for (int i = 0; i < distinct; ++i) {
            double v = rng.uniform(-50, 50);
            int copies = 1 + static_cast<int>(rng.below(3));
            for (int c = 0; c < copies; ++c) values.push_back(v);
        }
        // re-derive true distinct count (collisions are measure-zero but cheap to guard)
        std::set<double> ds(values.begin(), values.end());
        if (static_cast<int>(ds.size()) < k) continue;

        auto ivs = bin_kmeans_1d(values, k);
        double dp_sse = testing::kmeans_sse_of(values, ivs);
        double brute = testing::kmeans_sse_brute(values, k);
        CHECK(dp_sse == doctest::Approx(brute).epsilon(1e-9));
    }
}

TEST_CASE("tree binning splits perfectly separable labels at the midpoint") {
    CHECK(endpoints(bin_tree_based({1, 2, 3, 4}, {0, 0, 1, 1}, 8)) ==
          std::vector<std::pair<double, double>>{{1, 2}, {3, 4}});
}

TEST_CASE("tree binning with a single class keeps the full range") {
    CHECK(endpoints(bin_tree_based({1, 2, 3, 4}, {0, 0, 0, 0}, 8)) ==
          std::vector<std::pair<double, double>>{{1, 4}});
}

TEST_CASE("tree binning's first split maximizes the Gini decrease") {
    Rng rng(5);
    std::vector<double> values;
    std::vector<int32_t> labels;
    for (int i = 0; i < 100; ++i) {
        values.push_back(rng.normal(0.0, 1.0));
        labels.push_back(0);
        values.push_back(rng.normal(1.5, 1.0));
        labels.push_back(1);
    }
    auto ivs = bin_tree_based(values, labels, 2);
    REQUIRE(ivs.size() == 2);

    // oracle: scan every midpoint between adjacent distinct values
    std::vector<std::pair<double, int32_t>> sorted;
    for (size_t i = 0; i < values.size(); ++i) sorted.emplace_back(values[i], labels[i]);
    std::sort(sorted.begin(), sorted.end());
    auto gini = [](int pos, int n) {
        if (n == 0) return 0.0;
        double p = double(pos) / n;
        return 2.0 * p * (1 - p);
    };
    int total_pos = 0;
    for (auto& [v, y] : sorted) total_pos += y;
    int n = static_cast<int>(sorted.size());
    double best_gain = -1.0;
    double best_split = 0.0;
    int nl = 0, posl = 0;
    for (int i = 0; i + 1 < n; ++i) {
        ++nl;
        posl += sorted[i].second;
        if (sorted[i].first == sorted[i + 1].first) continue;
        double gain = gini(total_pos, n) * n - gini(posl, nl) * nl -
                      gini(total_pos - posl, n - nl) * (n - nl);
        if (gain > best_gain + 1e-12) {
            best_gain = gain;
            best_split = (sorted[i].first + sorted[i + 1].first) / 2.0;
        }
    }
    // the two leaves meet exactly around the oracle's split point
    CHECK(ivs[0].hi < best_split);
    CHECK(ivs[1].lo > best_split);
}

TEST_CASE("bin_attribute adds the maximal interval and deduplicates") {
    std::vector<std::string> labels(11, "0");
    Dataset d = testing::make_dataset({testing::num_col("x", iota_d(0, 10))}, labels);
    BinningConfig cfg;
    cfg.equal_frequency = cfg.kmeans = cfg.tree = false;
    cfg.bins_per_method = 2;
    auto ivs = bin_attribute(d.column(0), d.labels(), cfg);
    CHECK(endpoints(ivs) ==
          std::vector<std::pair<double, double>>{{0, 10}, {0, 5}, {5, 10}});
}

TEST_CASE("bin_attribute merges methods and keeps one copy of shared intervals") {
    // equal width and equal frequency both produce {1..4} -> [1,2.5],[2.5,4]
    // style duplicates on uniform integers; the union holds each once
    std::vector<double> vals = iota_d(1, 8);
    std::vector<std::string> labels(vals.size(), "0");
    Dataset d = testing::make_dataset({testing::num_col("x", vals)}, labels);
    BinningConfig cfg;
    cfg.kmeans = cfg.tree = false;
    cfg.bins_per_method = 2;
    auto ivs = bin_attribute(d.column(0), d.labels(), cfg);
    std::set<std::pair<double, double>> seen;
    for (const auto& iv : ivs) CHECK(seen.insert({iv.lo, iv.hi}).second);
}

TEST_CASE("bin_attribute invariants hold on random data") {
    Rng rng(31);
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<double> vals;
        std::vector<std::string> labels;
        int n = 30 + static_cast<int>(rng.below(100));
        for (int i = 0; i < n; ++i) {
            vals.push_back(rng.uniform(-10, 10));
            labels.push_back(std::to_string(rng.below(3)));
        }
        Dataset d = testing::make_dataset({testing::num_col("x", vals)}, labels);
        auto ivs = bin_attribute(d.column(0), d.labels(), BinningConfig{});
        REQUIRE(!ivs.empty());
        double lo = *std::min_element(vals.begin(), vals.end());
        double hi = *std::max_element(vals.begin(), vals.end());
        bool has_maximal = false;
        for (const auto& iv : ivs) {
            CHECK(iv.lo < iv.hi);
            CHECK(iv.lo >= lo);
            CHECK(iv.hi <= hi);
            if (iv.lo == lo && iv.hi == hi) has_maximal = true;
        }
        CHECK(has_maximal);

        auto again = bin_attribute(d.column(0), d.labels(), BinningConfig{});
        CHECK(endpoints(ivs) == endpoints(again));
    }
}

TEST_CASE("bin_attribute on a constant column yields nothing") {
    std::vector<std::string> labels(5, "0");
    Dataset d = testing::make_dataset({testing::num_col("x", {7, 7, 7, 7, 7})}, labels);
    CHECK(bin_attribute(d.column(0), d.labels(), BinningConfig{}).empty());
}

TEST_CASE("binning config validation") {
    BinningConfig cfg;
    cfg.equal_width = cfg.equal_frequency = cfg.kmeans = cfg.tree = false;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    BinningConfig cfg2;
    cfg2.bins_per_method = 1;
    CHECK_THROWS_AS(cfg2.validate(), ConfigError);
}

TEST_CASE("round_sig rounds to nine significant digits") {
    CHECK(round_sig(1.0000000006) == 1.0);
    CHECK(round_sig(123456789.123) == 123456789.0);
    CHECK(round_sig(0.0) == 0.0);
    CHECK(round_sig(-2.5e-7) == -2.5e-7);
}
