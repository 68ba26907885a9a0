#include "clex/attrsel.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace clex {

int DecisionTree::depth() const {
    int deepest = 0;
    for (const Node& n : nodes) deepest = std::max(deepest, n.depth);
    return deepest;
}

std::vector<std::vector<uint32_t>> presort_columns(const Dataset& d) {
    std::vector<std::vector<uint32_t>> out(d.n_attrs());
    for (size_t a = 0; a < d.n_attrs(); ++a) {
        const Column& col = d.column(a);
        if (col.kind != AttributeKind::Numeric) continue;
        auto& order = out[a];
        order.reserve(d.n_rows());
        for (uint32_t r = 0; r < d.n_rows(); ++r)
            if (!is_missing(col.numeric[r])) order.push_back(r);
        std::sort(order.begin(), order.end(), [&](uint32_t x, uint32_t y) {
            if (col.numeric[x] != col.numeric[y]) return col.numeric[x] < col.numeric[y];
            return x < y;
        });
    }
    return out;
}

namespace {

inline double gini2(size_t pos, size_t n) {
    if (n == 0) return 0.0;
    double p = static_cast<double>(pos) / static_cast<double>(n);
    return 2.0 * p * (1.0 - p);  // 1 - p^2 - (1-p)^2
}

struct SplitChoice {
    double gain = 0.0;  // unnormalized: n*G - nL*GL - nR*GR over non-missing rows
    int attr = -1;
    bool categorical = false;
    double threshold = 0.0;
    int32_t category = -1;

    bool better_than(const SplitChoice& o) const {
        if (attr < 0) return false;
        if (o.attr < 0) return true;
        if (gain != o.gain) return gain > o.gain;
        if (attr != o.attr) return attr < o.attr;
        if (categorical != o.categorical) return !categorical;
        if (!categorical) return threshold < o.threshold;
        return category < o.category;
    }
};

// Candidate splits are evaluated on the node's non-missing rows for this
// attribute; missing rows are routed to the majority branch afterwards.
SplitChoice scan_numeric(const Column& col, const std::vector<uint32_t>& presorted,
                         const std::vector<uint8_t>& in_node,
                         const std::vector<uint8_t>& y, int attr) {
    SplitChoice best;
    size_t n = 0, pos = 0;
    for (uint32_t r : presorted) {
        if (!in_node[r]) continue;
        ++n;
        pos += y[r];
    }
    if (n < 2) return best;
    double parent = gini2(pos, n) * static_cast<double>(n);

    size_t nl = 0, posl = 0;
    double prev = 0.0;
    bool have_prev = false;
    for (uint32_t r : presorted) {
        if (!in_node[r]) continue;
        double v = col.numeric[r];
        if (have_prev && v > prev && nl > 0 && nl < n) {
            double gain = parent - gini2(posl, nl) * static_cast<double>(nl) -
                          gini2(pos - posl, n - nl) * static_cast<double>(n - nl);
            SplitChoice cand{gain, attr, false, (prev + v) / 2.0, -1};
            if (cand.better_than(best)) best = cand;
        }
        ++nl;
        posl += y[r];
        prev = v;
        have_prev = true;
    }
    return best;
}

SplitChoice scan_categorical(const Column& col, const std::vector<uint32_t>& rows,
                             const std::vector<uint8_t>& y, int attr) {
    SplitChoice best;
    size_t n_cats = col.categories.size();
    std::vector<size_t> cnt(n_cats, 0), cnt_pos(n_cats, 0);
    size_t n = 0, pos = 0;
    for (uint32_t r : rows) {
        int32_t c = col.codes[r];
        if (c < 0) continue;
        ++cnt[c];
        cnt_pos[c] += y[r];
        ++n;
        pos += y[r];
    }
    if (n < 2) return best;
    double parent = gini2(pos, n) * static_cast<double>(n);

    for (size_t c = 0; c < n_cats; ++c) {
        size_t nl = cnt[c];
        if (nl == 0 || nl == n) continue;
        double gain = parent - gini2(cnt_pos[c], nl) * static_cast<double>(nl) -
                      gini2(pos - cnt_pos[c], n - nl) * static_cast<double>(n - nl);
        SplitChoice cand{gain, attr, true, 0.0, static_cast<int32_t>(c)};
        if (cand.better_than(best)) best = cand;
    }
    return best;
}

}  // namespace

DecisionTree fit_binary_tree(const Dataset& d, int32_t cluster, int max_depth,
                             const std::vector<std::vector<uint32_t>>* presorted_in,
                             int threads) {
    if (d.cluster_size(cluster) == 0) throw DataError("empty cluster");
    if (threads <= 0) threads = omp_get_max_threads();
    std::vector<std::vector<uint32_t>> presorted_local;
    if (!presorted_in) {
        presorted_local = presort_columns(d);
        presorted_in = &presorted_local;
    }
    const auto& presorted = *presorted_in;

    const size_t n_total = d.n_rows();
    const int m = static_cast<int>(d.n_attrs());
    std::vector<uint8_t> y(n_total);
    for (size_t r = 0; r < n_total; ++r) y[r] = d.labels()[r] == cluster;

    DecisionTree tree;
    tree.max_depth = max_depth;

    struct Pending {
        int node;
        std::vector<uint32_t> rows;
    };
    std::vector<Pending> stack;
    {
        std::vector<uint32_t> all(n_total);
        std::iota(all.begin(), all.end(), 0);
        tree.nodes.push_back({});
        tree.nodes[0].depth = 0;
        stack.push_back({0, std::move(all)});
    }

    std::vector<uint8_t> in_node(n_total, 0);
    const size_t min_samples_split = 2;

    while (!stack.empty()) {
        Pending task = std::move(stack.back());
        stack.pop_back();
        DecisionTree::Node& node = tree.nodes[task.node];
        node.n_rows = task.rows.size();
        node.n_positive = 0;
        for (uint32_t r : task.rows) node.n_positive += y[r];

        bool pure = node.n_positive == 0 || node.n_positive == node.n_rows;
        if (pure || node.n_rows < min_samples_split || node.depth >= max_depth) continue;

        for (uint32_t r : task.rows) in_node[r] = 1;
        std::vector<SplitChoice> per_attr(m);
#pragma omp parallel for schedule(dynamic) num_threads(threads) if (task.rows.size() >= 4096)
        for (int a = 0; a < m; ++a) {
            const Column& col = d.column(a);
            per_attr[a] = col.kind == AttributeKind::Numeric
                              ? scan_numeric(col, presorted[a], in_node, y, a)
                              : scan_categorical(col, task.rows, y, a);
        }
        for (uint32_t r : task.rows) in_node[r] = 0;

        SplitChoice best;
        for (const SplitChoice& s : per_attr)
            if (s.better_than(best)) best = s;
        if (best.attr < 0 || best.gain <= 1e-12) continue;

        const Column& col = d.column(best.attr);
        std::vector<uint32_t> left_rows, right_rows, missing_rows;
        for (uint32_t r : task.rows) {
            if (col.missing(r)) {
                missing_rows.push_back(r);
            } else if (best.categorical ? col.codes[r] == best.category
                                        : col.numeric[r] <= best.threshold) {
                left_rows.push_back(r);
            } else {
                right_rows.push_back(r);
            }
        }
        bool missing_left = left_rows.size() >= right_rows.size();
        auto& receiver = missing_left ? left_rows : right_rows;
        // keep row lists sorted so the build order is deterministic
        if (!missing_rows.empty()) {
            receiver.insert(receiver.end(), missing_rows.begin(), missing_rows.end());
            std::sort(receiver.begin(), receiver.end());
        }
        if (left_rows.empty() || right_rows.empty()) continue;  // degenerate after routing

        node.attr = best.attr;
        node.categorical = best.categorical;
        node.threshold = best.threshold;
        node.category = best.category;
        node.missing_left = missing_left;
        node.weighted_gain = best.gain / static_cast<double>(n_total);

        int left_id = static_cast<int>(tree.nodes.size());
        int node_depth = node.depth;
        tree.nodes.push_back({});
        tree.nodes.push_back({});
        // re-reference: push_back may have invalidated `node`
        tree.nodes[task.node].left = left_id;
        tree.nodes[task.node].right = left_id + 1;
        tree.nodes[left_id].depth = node_depth + 1;
        tree.nodes[left_id + 1].depth = node_depth + 1;
        stack.push_back({left_id + 1, std::move(right_rows)});
        stack.push_back({left_id, std::move(left_rows)});
    }
    return tree;
}

std::vector<double> gini_importance(const DecisionTree& tree, size_t n_attrs) {
    std::vector<double> raw(n_attrs, 0.0);
    double total = 0.0;
    for (const auto& node : tree.nodes) {
        if (node.attr < 0) continue;
        raw[node.attr] += node.weighted_gain;
        total += node.weighted_gain;
    }
    if (total > 0.0)
        for (double& v : raw) v /= total;
    return raw;
}

AttributeScores score_attributes(const Dataset& d, const Thresholds& th, double p,
                                 int threads) {
    if (!(p > 0.0)) throw ConfigError("attribute-selection scale p must be positive");
    th.validate();
    const size_t m = d.n_attrs();
    const int max_depth = th.max_predicates();

    AttributeScores scores;
    scores.per_cluster.resize(d.n_clusters());
    scores.averaged.assign(m, 0.0);

    auto presorted = presort_columns(d);
    for (size_t c = 0; c < d.n_clusters(); ++c) {
        DecisionTree tree =
            fit_binary_tree(d, static_cast<int32_t>(c), max_depth, &presorted, threads);
        scores.per_cluster[c] = gini_importance(tree, m);
        for (size_t a = 0; a < m; ++a) scores.averaged[a] += scores.per_cluster[c][a];
    }
    for (double& v : scores.averaged) v /= static_cast<double>(d.n_clusters());

    size_t n_attr = static_cast<size_t>(std::max(1, capacity_floor(p, th.conciseness)));
    std::vector<int> order(m);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return scores.averaged[a] > scores.averaged[b];  // stable: ties keep column order
    });
    if (n_attr < m) order.resize(n_attr);
    scores.selected = std::move(order);
    return scores;
}

std::vector<int> select_attributes(const Dataset& d, const Thresholds& th, double p,
                                   int threads) {
    return score_attributes(d, th, p, threads).selected;
}

}  // namespace clex
