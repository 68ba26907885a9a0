#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "clex/binning.hpp"

namespace clex {

using NodeId = uint32_t;
constexpr NodeId kAllRoot = 0;

/// b strictly contains b2: equal endpoints excluded, b.lo <= b2.lo and
/// b.hi >= b2.hi.
bool precedes(const Interval& b, const Interval& b2);

/// Containment DAG over every attribute's intervals, merged under an
/// artificial ALL root (node 0). Edges run parent (container) -> child
/// (contained) and form the Hasse diagram of `precedes`: transitive edges
/// are absent. Immutable once built; concurrent reads are safe.
class Taxonomy {
public:
    struct Node {
        int attr = -1;  // -1 only for the ALL root
        Interval interval;
    };

    static Taxonomy build(const std::vector<std::vector<Interval>>& intervals_per_attr);

    const std::vector<Node>& nodes() const { return nodes_; }
    const std::vector<NodeId>& children(NodeId id) const { return children_[id]; }

    /// Node ids of one attribute, in canonical (lo asc, hi desc) order.
    const std::vector<NodeId>& attr_nodes(int attr) const;
    /// Sub-DAG roots of one attribute (one node unless the maximal interval
    /// was withheld from a custom interval set).
    const std::vector<NodeId>& attr_roots(int attr) const;

    /// Every interval node of `attr` containing `value`; the ALL root is
    /// never included. Empty when the value lies outside all intervals.
    std::vector<NodeId> ancestors(int attr, double value) const;

    /// Interval nodes strictly containing node `id` (same attribute).
    std::vector<NodeId> strict_containers(NodeId id) const;

    size_t n_interval_nodes() const { return nodes_.size() - 1; }

    std::string to_dot(const std::vector<std::string>& attr_names) const;

private:
    std::vector<Node> nodes_;
    std::vector<std::vector<NodeId>> children_;
    std::vector<std::vector<NodeId>> nodes_by_attr_;
    std::vector<std::vector<NodeId>> roots_by_attr_;
    std::vector<NodeId> empty_;
};

/// Hasse edges of `precedes` over one attribute's intervals, as index pairs
/// (parent, child) into `intervals`. Exposed for tests and DOT export.
std::vector<std::pair<size_t, size_t>> hasse_edges(const std::vector<Interval>& intervals);

}  // namespace clex
