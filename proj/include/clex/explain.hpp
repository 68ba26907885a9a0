#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "clex/common.hpp"
#include "clex/dataset.hpp"
#include "clex/gfim.hpp"
#include "clex/items.hpp"

namespace clex {

enum class PredicateOp : uint8_t { Eq, Neq, Between };

struct Predicate {
    std::string attribute;
    PredicateOp op = PredicateOp::Eq;
    bool numeric = false;     // Eq only: numeric literal vs category string
    double number = 0.0;      // Eq on a numeric attribute
    std::string literal;      // Eq / Neq on a categorical attribute
    double lo = 0.0, hi = 0.0;  // Between

    std::string render() const;
};

struct ExplanationMetrics {
    double coverage = 0.0;
    double separation_error = 0.0;
    double conciseness = 0.0;
};

struct Explanation {
    int32_t cluster = 0;  // index into Dataset::cluster_names()
    std::vector<Predicate> predicates;
    ExplanationMetrics metrics;
};

struct Thresholds {
    double coverage = 0.8;
    double separation = 0.3;
    double conciseness = 0.2;

    void validate() const;
    int max_predicates() const { return capacity_floor(1.0, conciseness); }
};

/// Conjunction semantics; any predicate on a missing cell is false.
bool holds(const Explanation& e, const Dataset& d, size_t row);

/// Fraction of the explanation's cluster satisfying it.
double coverage(const Explanation& e, const Dataset& d);

/// Fraction of the satisfying points that lie outside the cluster. Rejects
/// explanations satisfied by no row at all (0/0 is undefined, and the
/// mining pipeline can never produce such a candidate).
double separation_error(const Explanation& e, const Dataset& d);

double conciseness(const Explanation& e);

double qse(const ExplanationMetrics& m);

/// One predicate per item: equality for raw values, `between` for interval
/// items, inequality for negation items. Metrics are left unfilled.
Explanation itemset_to_explanation(std::span<const ItemId> items, int32_t cluster,
                                   const ItemCatalog& catalog, const Dataset& d);

/// Pareto filter over (coverage, separation_error, conciseness): keeps the
/// candidates no other candidate strictly dominates; metric-identical ties
/// all survive. Input order is preserved.
std::vector<Explanation> skyline(const std::vector<Explanation>& candidates);

struct ClusterTiming {
    double mine_ms = 0.0;
    double metrics_ms = 0.0;
    double skyline_ms = 0.0;
    size_t mined_itemsets = 0;
    size_t post_filter_candidates = 0;
};

struct ExplainAudit {
    // post-separation-filter candidate metrics per cluster, for soundness
    // auditing; populated only when requested
    std::vector<std::vector<ExplanationMetrics>> candidates;
    std::vector<bool> capped;
};

struct ExplainOptions {
    int threads = 0;  // 0: all cores
    // guardrail for pathological threshold choices
    size_t max_candidates_before_skyline = 50000;
    const std::vector<uint8_t>* attr_enabled = nullptr;  // per-attribute mask
    ExplainAudit* audit = nullptr;
    std::vector<ClusterTiming>* timings = nullptr;
};

/// Algorithm driver: per cluster, mine with minsup = coverage threshold and
/// maxsize = floor(1/conciseness threshold), convert itemsets, compute
/// metrics against the full dataset, drop high separation error, keep the
/// Pareto skyline. Indexed by cluster code.
std::vector<std::vector<Explanation>> explain_all(const Dataset& d, const Taxonomy& taxonomy,
                                                  const ItemCatalog& catalog,
                                                  const std::vector<Transaction>& transactions,
                                                  const Thresholds& th,
                                                  const ExplainOptions& opts = {});

/// Mean over clusters of the best explanation's score; a cluster with no
/// explanations contributes zero.
double qse_aggregate(const std::vector<std::vector<Explanation>>& per_cluster);

}  // namespace clex
