#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "clex/common.hpp"
#include "clex/dataset.hpp"

namespace clex {

enum class BinMethod : uint8_t { EqualWidth, EqualFrequency, KMeans1D, TreeBased, Maximal };

const char* bin_method_name(BinMethod m);

/// Closed numeric interval with lo < hi. Adjacent bins sharing a boundary
/// both contain the boundary value.
struct Interval {
    double lo = 0.0;
    double hi = 0.0;
    BinMethod source = BinMethod::EqualWidth;

    bool contains(double v) const { return lo <= v && v <= hi; }
    bool operator==(const Interval& o) const { return lo == o.lo && hi == o.hi; }
};

struct BinningConfig {
    bool equal_width = true;
    bool equal_frequency = true;
    bool kmeans = true;
    bool tree = true;
    int bins_per_method = 5;  // k for EqualWidth / EqualFrequency / KMeans1D
    int tree_max_leaves = 8;

    void validate() const;
};

// Each method takes the non-missing values of one column. All throw
// std::invalid_argument on degenerate input (< 2 distinct values, bad k);
// bin_attribute skips methods that fail.

std::vector<Interval> bin_equal_width(const std::vector<double>& values, int k);

// Boundaries at the j/k empirical quantiles (inverse ECDF: the smallest
// sample value whose cumulative frequency reaches j/k). Duplicate
// boundaries collapse, so fewer than k intervals may come back.
std::vector<Interval> bin_equal_frequency(const std::vector<double>& values, int k);

// Exact optimal contiguous partition of the value multiset into k groups
// minimizing within-group sum of squared deviations (dynamic program with
// divide-and-conquer row minimization). Single-point groups emit no
// interval because lo < hi is mandatory.
std::vector<Interval> bin_kmeans_1d(const std::vector<double>& values, int k);

// Single-feature decision tree on (value -> cluster label): Gini splits at
// midpoints of adjacent distinct values, grown best-first until max_leaves
// or purity; one interval per leaf value range.
std::vector<Interval> bin_tree_based(const std::vector<double>& values,
                                     const std::vector<int32_t>& labels, int max_leaves);

/// Union of all configured methods on one column, deduplicated by endpoints
/// rounded to 9 significant digits, plus the maximal interval spanning every
/// other one. Missing cells are dropped before binning. Returns an empty set
/// when every method fails.
std::vector<Interval> bin_attribute(const Column& col, const std::vector<int32_t>& labels,
                                    const BinningConfig& cfg);

/// bin_attribute for every numeric column, parallel across attributes.
/// Result is indexed by column position (empty for categorical columns).
std::vector<std::vector<Interval>> bin_dataset(const Dataset& d, const BinningConfig& cfg,
                                               int threads);

}  // namespace clex
