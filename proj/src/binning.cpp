#include "clex/binning.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <queue>
#include <set>

namespace clex {

const char* bin_method_name(BinMethod m) {
    switch (m) {
        case BinMethod::EqualWidth: return "equal_width";
        case BinMethod::EqualFrequency: return "equal_frequency";
        case BinMethod::KMeans1D: return "kmeans_1d";
        case BinMethod::TreeBased: return "tree_based";
        case BinMethod::Maximal: return "maximal";
    }
    return "?";
}

void BinningConfig::validate() const {
    if (!equal_width && !equal_frequency && !kmeans && !tree)
        throw ConfigError("at least one binning method must be enabled");
    if (bins_per_method < 2) throw ConfigError("bins_per_method must be >= 2");
    if (tree_max_leaves < 1) throw ConfigError("tree_max_leaves must be >= 1");
}

namespace {

void require_two_distinct(const std::vector<double>& values) {
    if (values.empty()) throw std::invalid_argument("no non-missing values");
    auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    if (*lo == *hi) throw std::invalid_argument("all values identical");
}

std::vector<Interval> intervals_from_edges(const std::vector<double>& edges, BinMethod src) {
    std::vector<Interval> out;
    for (size_t i = 0; i + 1 < edges.size(); ++i)
        if (edges[i] < edges[i + 1]) out.push_back({edges[i], edges[i + 1], src});
    return out;
}

}  // namespace

std::vector<Interval> bin_equal_width(const std::vector<double>& values, int k) {
    require_two_distinct(values);
    if (k < 1) throw std::invalid_argument("k must be positive");
    auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
    double lo = *lo_it, hi = *hi_it;
    double width = (hi - lo) / k;
    std::vector<double> edges(k + 1);
    for (int i = 0; i <= k; ++i) edges[i] = std::min(lo + width * i, hi);
    edges[k] = hi;
    return intervals_from_edges(edges, BinMethod::EqualWidth);
}

std::vector<Interval> bin_equal_frequency(const std::vector<double>& values, int k) {
    require_two_distinct(values);
    if (k < 1) throw std::invalid_argument("k must be positive");
    std::vector<double> sorted = values;
    std::sort(sorted.begin(), sorted.end());
    size_t n = sorted.size();

    std::vector<double> edges;
    edges.push_back(sorted.front());
    for (int j = 1; j < k; ++j) {
        // inverse ECDF: smallest value with cumulative frequency >= j/k
        size_t idx = (n * static_cast<size_t>(j) + k - 1) / k;  // ceil(n*j/k)
        edges.push_back(sorted[idx - 1]);
    }
    edges.push_back(sorted.back());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    return intervals_from_edges(edges, BinMethod::EqualFrequency);
}

namespace {

// Weighted SSE machinery over sorted distinct values, centered on the mean
// to keep the Q - S^2/W form numerically stable.
struct SseTable {
    std::vector<double> w, wv, wv2;  // prefix sums

    SseTable(const std::vector<double>& vals, const std::vector<double>& weights) {
        double mean = 0.0, total = 0.0;
        for (size_t i = 0; i < vals.size(); ++i) {
            mean += weights[i] * vals[i];
            total += weights[i];
        }
        mean /= total;
        size_t d = vals.size();
        w.assign(d + 1, 0.0);
        wv.assign(d + 1, 0.0);
        wv2.assign(d + 1, 0.0);
        for (size_t i = 0; i < d; ++i) {
            double x = vals[i] - mean;
            w[i + 1] = w[i] + weights[i];
            wv[i + 1] = wv[i] + weights[i] * x;
            wv2[i + 1] = wv2[i] + weights[i] * x * x;
        }
    }

    double cost(size_t i, size_t j) const {  // inclusive range [i, j]
        double W = w[j + 1] - w[i];
        double S = wv[j + 1] - wv[i];
        double Q = wv2[j + 1] - wv2[i];
        return std::max(0.0, Q - S * S / W);
    }
};

struct KmeansDp {
    const SseTable& sse;
    std::vector<double> prev, cur;
    std::vector<std::vector<uint32_t>> back;

    // Fills cur[j] for j in [jlo, jhi] given argmin bounds [ilo, ihi];
    // relies on the monotonicity of optimal split positions.
    void solve(size_t level, size_t jlo, size_t jhi, size_t ilo, size_t ihi) {
        if (jlo > jhi) return;
        size_t jm = jlo + (jhi - jlo) / 2;
        size_t best_i = 0;
        double best = std::numeric_limits<double>::infinity();
        size_t lo = std::max(ilo, level - 1);
        size_t hi = std::min(ihi, jm);
        for (size_t i = lo; i <= hi; ++i) {
            double c = prev[i - 1] + sse.cost(i, jm);
            if (c < best) {  // strict: smallest split index wins ties
                best = c;
                best_i = i;
            }
        }
        cur[jm] = best;
        back[level][jm] = static_cast<uint32_t>(best_i);
        if (jm > jlo) solve(level, jlo, jm - 1, ilo, best_i);
        if (jm < jhi) solve(level, jm + 1, jhi, best_i, ihi);
    }
};

}  // namespace

std::vector<Interval> bin_kmeans_1d(const std::vector<double>& values, int k) {
    require_two_distinct(values);
    if (k < 1) throw std::invalid_argument("k must be positive");

    // compress to distinct values with multiplicities
    std::vector<double> sorted = values;
    std::sort(sorted.begin(), sorted.end());
    std::vector<double> vals;
    std::vector<double> weights;
    for (double v : sorted) {
        if (vals.empty() || vals.back() != v) {
            vals.push_back(v);
            weights.push_back(1.0);
        } else {
            weights.back() += 1.0;
        }
    }
    size_t d = vals.size();
    if (static_cast<size_t>(k) > d)
        throw std::invalid_argument("k exceeds the number of distinct values");

    SseTable sse(vals, weights);
    KmeansDp dp{sse, {}, {}, {}};
    dp.prev.resize(d);
    dp.cur.resize(d);
    dp.back.assign(k + 1, std::vector<uint32_t>(d, 0));
    for (size_t j = 0; j < d; ++j) dp.prev[j] = sse.cost(0, j);

    for (int level = 2; level <= k; ++level) {
        dp.solve(level, level - 1, d - 1, 1, d - 1);
        std::swap(dp.prev, dp.cur);
    }

    // backtrack group boundaries
    std::vector<size_t> starts;  // first distinct-value index of each group
    size_t j = d - 1;
    for (int level = k; level >= 2; --level) {
        size_t i = dp.back[level][j];
        starts.push_back(i);
        j = i - 1;
    }
    starts.push_back(0);
    std::reverse(starts.begin(), starts.end());

    std::vector<Interval> out;
    for (size_t g = 0; g < starts.size(); ++g) {
        size_t first = starts[g];
        size_t last = (g + 1 < starts.size() ? starts[g + 1] : d) - 1;
        if (vals[first] < vals[last])
            out.push_back({vals[first], vals[last], BinMethod::KMeans1D});
    }
    return out;
}

namespace {

struct LabeledValues {
    std::vector<double> vals;     // sorted
    std::vector<int32_t> labels;  // aligned with vals
    int n_classes = 0;
};

double gini_of(const std::vector<int>& counts, int total) {
    if (total == 0) return 0.0;
    double g = 1.0;
    for (int c : counts) {
        double p = static_cast<double>(c) / total;
        g -= p * p;
    }
    return g;
}

struct Segment {
    size_t begin, end;  // half-open over the sorted array
    double gain = -1.0;
    size_t split_at = 0;  // first index of the right part

    bool operator<(const Segment& o) const {
        // priority queue: larger gain first, then leftmost segment
        if (gain != o.gain) return gain < o.gain;
        return begin > o.begin;
    }
};

// Best binary split of [begin, end): maximizes the unnormalized Gini
// decrease n*G - nL*GL - nR*GR, ties to the smaller threshold.
Segment scan_segment(const LabeledValues& lv, size_t begin, size_t end) {
    Segment seg{begin, end};
    int total = static_cast<int>(end - begin);
    std::vector<int> left(lv.n_classes, 0), all(lv.n_classes, 0);
    for (size_t i = begin; i < end; ++i) ++all[lv.labels[i]];
    double g_all = gini_of(all, total) * total;

    std::vector<int> l(lv.n_classes, 0);
    for (size_t i = begin; i + 1 < end; ++i) {
        ++l[lv.labels[i]];
        if (lv.vals[i] == lv.vals[i + 1]) continue;  // split only between distinct values
        int nl = static_cast<int>(i - begin + 1);
        int nr = total - nl;
        std::vector<int> r(lv.n_classes);
        for (int c = 0; c < lv.n_classes; ++c) r[c] = all[c] - l[c];
        double gain = g_all - gini_of(l, nl) * nl - gini_of(r, nr) * nr;
        if (gain > seg.gain + 1e-12) {
            seg.gain = gain;
            seg.split_at = i + 1;
        }
    }
    return seg;
}

}  // namespace

std::vector<Interval> bin_tree_based(const std::vector<double>& values,
                                     const std::vector<int32_t>& labels, int max_leaves) {
    if (values.size() != labels.size())
        throw std::invalid_argument("values and labels must align");
    require_two_distinct(values);
    if (max_leaves < 1) throw std::invalid_argument("max_leaves must be >= 1");

    LabeledValues lv;
    {
        std::vector<size_t> order(values.size());
        for (size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
            if (values[a] != values[b]) return values[a] < values[b];
            return labels[a] < labels[b];
        });
        lv.vals.reserve(values.size());
        lv.labels.reserve(values.size());
        int32_t max_label = 0;
        for (size_t i : order) {
            lv.vals.push_back(values[i]);
            lv.labels.push_back(labels[i]);
            max_label = std::max(max_label, labels[i]);
        }
        lv.n_classes = max_label + 1;
    }

    std::priority_queue<Segment> frontier;
    std::vector<Segment> leaves;
    frontier.push(scan_segment(lv, 0, lv.vals.size()));
    int n_leaves = 1;

    while (!frontier.empty() && n_leaves < max_leaves) {
        Segment seg = frontier.top();
        frontier.pop();
        if (seg.gain <= 0.0) {
            leaves.push_back(seg);
            continue;
        }
        frontier.push(scan_segment(lv, seg.begin, seg.split_at));
        frontier.push(scan_segment(lv, seg.split_at, seg.end));
        ++n_leaves;
    }
    while (!frontier.empty()) {
        leaves.push_back(frontier.top());
        frontier.pop();
    }

    std::sort(leaves.begin(), leaves.end(),
              [](const Segment& a, const Segment& b) { return a.begin < b.begin; });
    std::vector<Interval> out;
    for (const auto& leaf : leaves) {
        double lo = lv.vals[leaf.begin];
        double hi = lv.vals[leaf.end - 1];
        if (lo < hi) out.push_back({lo, hi, BinMethod::TreeBased});
    }
    return out;
}

std::vector<Interval> bin_attribute(const Column& col, const std::vector<int32_t>& labels,
                                    const BinningConfig& cfg) {
    cfg.validate();
    if (col.kind != AttributeKind::Numeric)
        throw std::invalid_argument("bin_attribute expects a numeric column");

    std::vector<double> vals;
    std::vector<int32_t> row_labels;
    vals.reserve(col.numeric.size());
    for (size_t i = 0; i < col.numeric.size(); ++i) {
        if (is_missing(col.numeric[i])) continue;
        vals.push_back(col.numeric[i]);
        row_labels.push_back(labels[i]);
    }

    std::vector<Interval> pool;
    auto run = [&](bool enabled, auto&& fn) {
        if (!enabled) return;
        try {
            auto part = fn();
            pool.insert(pool.end(), part.begin(), part.end());
        } catch (const std::invalid_argument&) {
            // a method that cannot bin this column contributes nothing
        }
    };
    run(cfg.equal_width, [&] { return bin_equal_width(vals, cfg.bins_per_method); });
    run(cfg.equal_frequency, [&] { return bin_equal_frequency(vals, cfg.bins_per_method); });
    run(cfg.kmeans, [&] { return bin_kmeans_1d(vals, cfg.bins_per_method); });
    run(cfg.tree, [&] { return bin_tree_based(vals, row_labels, cfg.tree_max_leaves); });
    if (pool.empty()) return {};

    // dedup on endpoints rounded to 9 significant digits; first method wins
    std::set<std::pair<double, double>> seen;
    std::vector<Interval> dedup;
    double lo_m = pool.front().lo, hi_m = pool.front().hi;
    for (const auto& iv : pool) {
        lo_m = std::min(lo_m, iv.lo);
        hi_m = std::max(hi_m, iv.hi);
        if (seen.insert({round_sig(iv.lo), round_sig(iv.hi)}).second) dedup.push_back(iv);
    }
    if (!seen.count({round_sig(lo_m), round_sig(hi_m)}))
        dedup.push_back({lo_m, hi_m, BinMethod::Maximal});

    std::sort(dedup.begin(), dedup.end(), [](const Interval& a, const Interval& b) {
        if (a.lo != b.lo) return a.lo < b.lo;
        return a.hi > b.hi;
    });
    return dedup;
}

std::vector<std::vector<Interval>> bin_dataset(const Dataset& d, const BinningConfig& cfg,
                                               int threads) {
    cfg.validate();
    if (threads <= 0) threads = omp_get_max_threads();
    int m = static_cast<int>(d.n_attrs());
    std::vector<std::vector<Interval>> out(m);
#pragma omp parallel for schedule(dynamic) num_threads(threads)
    for (int a = 0; a < m; ++a) {
        if (d.column(a).kind == AttributeKind::Numeric)
            out[a] = bin_attribute(d.column(a), d.labels(), cfg);
    }
    return out;
}

}  // namespace clex
