#include "clex/taxonomy.hpp"

#include <algorithm>
#include <sstream>

namespace clex {

bool precedes(const Interval& b, const Interval& b2) {
    return (b.lo != b2.lo || b.hi != b2.hi) && b.lo <= b2.lo && b.hi >= b2.hi;
}

std::vector<std::pair<size_t, size_t>> hasse_edges(const std::vector<Interval>& intervals) {
    std::vector<std::pair<size_t, size_t>> edges;
    size_t n = intervals.size();
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = 0; j < n; ++j) {
            if (i == j || !precedes(intervals[i], intervals[j])) continue;
            bool direct = true;
            for (size_t k = 0; k < n && direct; ++k) {
                if (k == i || k == j) continue;
                if (precedes(intervals[i], intervals[k]) && precedes(intervals[k], intervals[j]))
                    direct = false;
            }
            if (direct) edges.emplace_back(i, j);
        }
    }
    return edges;
}

Taxonomy Taxonomy::build(const std::vector<std::vector<Interval>>& intervals_per_attr) {
    Taxonomy t;
    t.nodes_.push_back({});  // ALL root
    t.children_.emplace_back();
    t.nodes_by_attr_.resize(intervals_per_attr.size());
    t.roots_by_attr_.resize(intervals_per_attr.size());

    for (size_t attr = 0; attr < intervals_per_attr.size(); ++attr) {
        const auto& ivs = intervals_per_attr[attr];
        if (ivs.empty()) continue;

        std::vector<NodeId> ids(ivs.size());
        for (size_t i = 0; i < ivs.size(); ++i) {
            ids[i] = static_cast<NodeId>(t.nodes_.size());
            t.nodes_.push_back({static_cast<int>(attr), ivs[i]});
            t.children_.emplace_back();
            t.nodes_by_attr_[attr].push_back(ids[i]);
        }

        std::vector<bool> has_parent(ivs.size(), false);
        for (auto [p, c] : hasse_edges(ivs)) {
            t.children_[ids[p]].push_back(ids[c]);
            has_parent[c] = true;
        }
        // Normally a single root (the injected maximal interval precedes all
        // others); custom interval sets may leave several maxima, all of
        // which hang off the ALL root.
        for (size_t i = 0; i < ivs.size(); ++i) {
            if (!has_parent[i]) {
                t.roots_by_attr_[attr].push_back(ids[i]);
                t.children_[kAllRoot].push_back(ids[i]);
            }
        }
    }
    return t;
}

const std::vector<NodeId>& Taxonomy::attr_nodes(int attr) const {
    if (attr < 0 || static_cast<size_t>(attr) >= nodes_by_attr_.size()) return empty_;
    return nodes_by_attr_[attr];
}

const std::vector<NodeId>& Taxonomy::attr_roots(int attr) const {
    if (attr < 0 || static_cast<size_t>(attr) >= roots_by_attr_.size()) return empty_;
    return roots_by_attr_[attr];
}

std::vector<NodeId> Taxonomy::ancestors(int attr, double value) const {
    std::vector<NodeId> out;
    for (NodeId id : attr_nodes(attr))
        if (nodes_[id].interval.contains(value)) out.push_back(id);
    return out;
}

std::vector<NodeId> Taxonomy::strict_containers(NodeId id) const {
    std::vector<NodeId> out;
    const Node& node = nodes_[id];
    for (NodeId other : attr_nodes(node.attr))
        if (other != id && precedes(nodes_[other].interval, node.interval)) out.push_back(other);
    return out;
}

std::string Taxonomy::to_dot(const std::vector<std::string>& attr_names) const {
    std::ostringstream os;
    os << "digraph taxonomy {\n  rankdir=TB;\n  n0 [label=\"ALL\", shape=box];\n";
    for (size_t i = 1; i < nodes_.size(); ++i) {
        const Node& n = nodes_[i];
        std::string attr = static_cast<size_t>(n.attr) < attr_names.size()
                               ? attr_names[n.attr]
                               : "attr" + std::to_string(n.attr);
        os << "  n" << i << " [label=\"" << attr << " [" << n.interval.lo << ", "
           << n.interval.hi << "]\"];\n";
    }
    for (size_t i = 0; i < children_.size(); ++i)
        for (NodeId c : children_[i]) os << "  n" << i << " -> n" << c << ";\n";
    os << "}\n";
    return os.str();
}

}  // namespace clex
