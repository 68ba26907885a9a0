#pragma once

#include <cstdint>
#include <vector>

#include "clex/dataset.hpp"
#include "clex/explain.hpp"

namespace clex {

/// Binary CART: numeric tests are value <= threshold, categorical tests are
/// value == category (one-vs-rest). Missing values follow the branch that
/// holds the majority of the node's training rows.
struct DecisionTree {
    struct Node {
        int attr = -1;  // -1: leaf
        bool categorical = false;
        double threshold = 0.0;
        int32_t category = -1;
        bool missing_left = true;
        size_t n_rows = 0;
        size_t n_positive = 0;  // rows labeled with the target cluster
        // (n_node / n_total) * Gini decrease of this split
        double weighted_gain = 0.0;
        int left = -1, right = -1;
        int depth = 0;
    };
    std::vector<Node> nodes;  // nodes[0] is the root
    int max_depth = 0;

    int depth() const;
};

/// Row order per attribute sorted by value, missing cells excluded.
/// Computing it once lets every per-cluster tree share the sort.
std::vector<std::vector<uint32_t>> presort_columns(const Dataset& d);

/// Greedy CART predicting membership in `cluster`, choosing at each node the
/// (attribute, test) with the largest weighted Gini decrease; ties go to
/// the lower attribute index, then the smaller threshold/category.
DecisionTree fit_binary_tree(const Dataset& d, int32_t cluster, int max_depth,
                             const std::vector<std::vector<uint32_t>>* presorted = nullptr,
                             int threads = 1);

/// Per-attribute sum of weighted Gini decreases, normalized to 1 across
/// attributes; all zeros for a root-leaf tree.
std::vector<double> gini_importance(const DecisionTree& tree, size_t n_attrs);

struct AttributeScores {
    std::vector<std::vector<double>> per_cluster;  // [cluster][attr]
    std::vector<double> averaged;                  // equal cluster weighting
    std::vector<int> selected;  // attr indices, score desc, ties by column order
};

/// One tree per cluster with max_depth = floor(1/conciseness threshold);
/// per-tree importances averaged with equal cluster weight; top
/// floor(p / conciseness threshold) attributes win (at least one, all of
/// them when the quota covers every attribute).
AttributeScores score_attributes(const Dataset& d, const Thresholds& th, double p,
                                 int threads = 0);

std::vector<int> select_attributes(const Dataset& d, const Thresholds& th, double p,
                                   int threads = 0);

}  // namespace clex
