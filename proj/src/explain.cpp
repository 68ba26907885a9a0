#include "clex/explain.hpp"

#include <omp.h>

#include <algorithm>
#include <cassert>
#include <chrono>
#include <cstdio>
#include <numeric>
#include <unordered_map>

#include "clex/kernels.hpp"

namespace clex {

namespace {

double ms_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
        .count();
}

std::string trim_number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

}  // namespace

std::string Predicate::render() const {
    switch (op) {
        case PredicateOp::Eq:
            return attribute + " == " + (numeric ? trim_number(number) : literal);
        case PredicateOp::Neq:
            return attribute + " != " + literal;
        case PredicateOp::Between:
            return attribute + " between " + trim_number(lo) + " and " + trim_number(hi);
    }
    return "?";
}

void Thresholds::validate() const {
    if (!(coverage > 0.0) || coverage > 1.0)
        throw ConfigError("coverage threshold must be in (0, 1]");
    if (separation < 0.0 || separation > 1.0)
        throw ConfigError("separation threshold must be in [0, 1]");
    if (!(conciseness > 0.0) || conciseness > 1.0)
        throw ConfigError("conciseness threshold must be in (0, 1]");
}

namespace {

// Predicate with the column resolved, for row scans.
struct BoundPredicate {
    const Column* col;
    PredicateOp op;
    bool numeric;
    double number;
    int32_t code;  // resolved categorical literal; -1 when absent from data
    double lo, hi;

    bool eval(size_t row) const {
        if (col->kind == AttributeKind::Numeric) {
            double v = col->numeric[row];
            if (is_missing(v)) return false;
            switch (op) {
                case PredicateOp::Eq: return v == number;
                case PredicateOp::Neq: return v != number;
                case PredicateOp::Between: return lo <= v && v <= hi;
            }
        }
        int32_t c = col->codes[row];
        if (c < 0) return false;
        switch (op) {
            case PredicateOp::Eq: return c == code;
            case PredicateOp::Neq: return c != code;
            case PredicateOp::Between:
                throw DataError("'between' predicate on categorical attribute " + col->name);
        }
        return false;
    }
};

std::vector<BoundPredicate> bind(const Explanation& e, const Dataset& d) {
    std::vector<BoundPredicate> out;
    out.reserve(e.predicates.size());
    for (const Predicate& p : e.predicates) {
        const Column& col = d.column(p.attribute);  // throws on unknown attribute
        BoundPredicate bp{&col, p.op, p.numeric, p.number, -1, p.lo, p.hi};
        if (col.kind == AttributeKind::Categorical &&
            (p.op == PredicateOp::Eq || p.op == PredicateOp::Neq)) {
            auto it = std::lower_bound(col.categories.begin(), col.categories.end(), p.literal);
            if (it != col.categories.end() && *it == p.literal)
                bp.code = static_cast<int32_t>(it - col.categories.begin());
        } else if (col.kind == AttributeKind::Numeric && p.op == PredicateOp::Eq && !p.numeric) {
            throw DataError("equality on numeric attribute " + col.name +
                            " needs a numeric literal");
        }
        out.push_back(bp);
    }
    return out;
}

bool eval_all(const std::vector<BoundPredicate>& ps, size_t row) {
    for (const auto& p : ps)
        if (!p.eval(row)) return false;
    return true;
}

}  // namespace

bool holds(const Explanation& e, const Dataset& d, size_t row) {
    auto bound = bind(e, d);
    return eval_all(bound, row);
}

double coverage(const Explanation& e, const Dataset& d) {
    if (e.cluster < 0 || static_cast<size_t>(e.cluster) >= d.n_clusters())
        throw DataError("explanation references an unknown cluster");
    size_t cluster_n = d.cluster_size(e.cluster);
    if (cluster_n == 0) throw DataError("empty cluster");
    auto bound = bind(e, d);
    size_t n = 0;
    for (size_t r = 0; r < d.n_rows(); ++r)
        if (d.labels()[r] == e.cluster && eval_all(bound, r)) ++n;
    return static_cast<double>(n) / static_cast<double>(cluster_n);
}

double separation_error(const Explanation& e, const Dataset& d) {
    auto bound = bind(e, d);
    size_t n_hold = 0, n_out = 0;
    for (size_t r = 0; r < d.n_rows(); ++r) {
        if (!eval_all(bound, r)) continue;
        ++n_hold;
        if (d.labels()[r] != e.cluster) ++n_out;
    }
    if (n_hold == 0) throw DataError("separation error undefined: explanation holds nowhere");
    return static_cast<double>(n_out) / static_cast<double>(n_hold);
}

double conciseness(const Explanation& e) {
    if (e.predicates.empty()) throw DataError("explanation without predicates");
    return 1.0 / static_cast<double>(e.predicates.size());
}

double qse(const ExplanationMetrics& m) {
    return (m.coverage + (1.0 - m.separation_error) + m.conciseness) / 3.0;
}

Explanation itemset_to_explanation(std::span<const ItemId> items, int32_t cluster,
                                   const ItemCatalog& catalog, const Dataset& d) {
    Explanation e;
    e.cluster = cluster;
    for (ItemId item : items) {
        const Column& col = d.column(catalog.attr(item));
        Predicate p;
        p.attribute = col.name;
        switch (catalog.kind(item)) {
            case ItemKind::NumericEq:
                p.op = PredicateOp::Eq;
                p.numeric = true;
                p.number = catalog.numeric_value(item);
                break;
            case ItemKind::IntervalItem: {
                const Interval& iv = catalog.interval(item);
                p.op = PredicateOp::Between;
                p.numeric = true;
                p.lo = iv.lo;
                p.hi = iv.hi;
                break;
            }
            case ItemKind::CatEq:
                p.op = PredicateOp::Eq;
                p.literal = col.categories[catalog.category(item)];
                break;
            case ItemKind::CatNeg:
                p.op = PredicateOp::Neq;
                p.literal = col.categories[catalog.category(item)];
                break;
        }
        e.predicates.push_back(std::move(p));
    }
    return e;
}

namespace {

bool dominates(const ExplanationMetrics& a, const ExplanationMetrics& b) {
    return a.coverage >= b.coverage && a.separation_error <= b.separation_error &&
           a.conciseness >= b.conciseness &&
           (a.coverage > b.coverage || a.separation_error < b.separation_error ||
            a.conciseness > b.conciseness);
}

}  // namespace

std::vector<Explanation> skyline(const std::vector<Explanation>& candidates) {
    const size_t n = candidates.size();
    // Presorted block-nested-loop: after sorting by (coverage desc, sep asc,
    // conciseness desc), a point can only be dominated by one before it, so
    // each candidate is tested against the running skyline only.
    std::vector<uint32_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](uint32_t x, uint32_t y) {
        const auto& a = candidates[x].metrics;
        const auto& b = candidates[y].metrics;
        if (a.coverage != b.coverage) return a.coverage > b.coverage;
        if (a.separation_error != b.separation_error)
            return a.separation_error < b.separation_error;
        if (a.conciseness != b.conciseness) return a.conciseness > b.conciseness;
        return x < y;
    });

    std::vector<uint32_t> front;
    std::vector<bool> keep(n, false);
    for (uint32_t idx : order) {
        bool dominated = false;
        for (uint32_t f : front) {
            if (dominates(candidates[f].metrics, candidates[idx].metrics)) {
                dominated = true;
                break;
            }
        }
        if (!dominated) {
            front.push_back(idx);
            keep[idx] = true;
        }
    }

    std::vector<Explanation> out;
    out.reserve(front.size());
    for (size_t i = 0; i < n; ++i)
        if (keep[i]) out.push_back(candidates[i]);
    return out;
}

namespace {

struct SlotListKey {
    const uint32_t* data;
    uint32_t len;
    bool operator==(const SlotListKey& o) const {
        return len == o.len && std::equal(data, data + len, o.data);
    }
};

struct SlotListHash {
    size_t operator()(const SlotListKey& k) const {
        uint64_t h = 1469598103934665603ull;
        for (uint32_t i = 0; i < k.len; ++i) {
            h ^= k.data[i];
            h *= 1099511628211ull;
        }
        return static_cast<size_t>(h);
    }
};

// AND-popcount per candidate, counting each distinct slot list once.
std::vector<uint32_t> deduplicated_counts(const kernels::BitmapPool& pool,
                                          const std::vector<uint32_t>& items,
                                          const std::vector<uint32_t>& offsets, int threads) {
    const size_t n = offsets.size() - 1;
    std::unordered_map<SlotListKey, uint32_t, SlotListHash> memo;
    memo.reserve(n / 4 + 16);
    std::vector<uint32_t> uniq_items, uniq_offsets{0};
    std::vector<uint32_t> to_uniq(n);
    for (size_t c = 0; c < n; ++c) {
        SlotListKey key{items.data() + offsets[c], offsets[c + 1] - offsets[c]};
        auto [it, inserted] = memo.try_emplace(key, static_cast<uint32_t>(memo.size()));
        if (inserted) {
            uniq_items.insert(uniq_items.end(), key.data, key.data + key.len);
            uniq_offsets.push_back(static_cast<uint32_t>(uniq_items.size()));
        }
        to_uniq[c] = it->second;
    }
    std::vector<uint32_t> uniq_counts(memo.size());
    kernels::count_supports(pool, uniq_items, uniq_offsets, uniq_counts.data(), threads);
    std::vector<uint32_t> counts(n);
    for (size_t c = 0; c < n; ++c) counts[c] = uniq_counts[to_uniq[c]];
    return counts;
}

// Lazily built full-dataset row bitmaps, one slot per item, shared across
// clusters.
class FullBitmaps {
public:
    FullBitmaps(const Dataset& d, const ItemCatalog& catalog)
        : d_(d), catalog_(catalog), pool_(0, d.n_rows()) {}

    uint32_t slot_for(ItemId item) {
        auto it = slot_of_.find(item);
        if (it != slot_of_.end()) return it->second;
        uint32_t s = static_cast<uint32_t>(pool_.add_slot());
        fill(item, s);
        counts_.push_back(kernels::popcount_words(pool_.slot(s), pool_.n_words()));
        slot_of_.emplace(item, s);
        return s;
    }

    bool universal(uint32_t slot) const { return counts_[slot] == d_.n_rows(); }
    const kernels::BitmapPool& pool() const { return pool_; }

private:
    void fill(ItemId item, uint32_t s) {
        const Column& col = d_.column(catalog_.attr(item));
        size_t n = d_.n_rows();
        switch (catalog_.kind(item)) {
            case ItemKind::NumericEq: {
                double v = catalog_.numeric_value(item);
                for (size_t r = 0; r < n; ++r)
                    if (col.numeric[r] == v) pool_.set_bit(s, r);
                break;
            }
            case ItemKind::IntervalItem: {
                Interval iv = catalog_.interval(item);
                for (size_t r = 0; r < n; ++r)
                    if (!is_missing(col.numeric[r]) && iv.contains(col.numeric[r]))
                        pool_.set_bit(s, r);
                break;
            }
            case ItemKind::CatEq: {
                int32_t c = catalog_.category(item);
                for (size_t r = 0; r < n; ++r)
                    if (col.codes[r] == c) pool_.set_bit(s, r);
                break;
            }
            case ItemKind::CatNeg: {
                int32_t c = catalog_.category(item);
                for (size_t r = 0; r < n; ++r)
                    if (col.codes[r] >= 0 && col.codes[r] != c) pool_.set_bit(s, r);
                break;
            }
        }
    }

    const Dataset& d_;
    const ItemCatalog& catalog_;
    kernels::BitmapPool pool_;
    std::vector<uint32_t> counts_;
    std::unordered_map<ItemId, uint32_t> slot_of_;
};

}  // namespace

std::vector<std::vector<Explanation>> explain_all(const Dataset& d, const Taxonomy& taxonomy,
                                                  const ItemCatalog& catalog,
                                                  const std::vector<Transaction>& transactions,
                                                  const Thresholds& th,
                                                  const ExplainOptions& opts) {
    th.validate();
    int threads = opts.threads > 0 ? opts.threads : omp_get_max_threads();
    const int maxsize = th.max_predicates();
    const size_t n_clusters = d.n_clusters();

    std::vector<std::vector<Explanation>> result(n_clusters);
    if (opts.audit) {
        opts.audit->candidates.assign(n_clusters, {});
        opts.audit->capped.assign(n_clusters, false);
    }
    if (opts.timings) opts.timings->assign(n_clusters, {});

    FullBitmaps full(d, catalog);

    for (size_t c = 0; c < n_clusters; ++c) {
        ClusterTiming timing;
        std::vector<uint32_t> subset = d.cluster_rows(static_cast<int32_t>(c));
        if (subset.empty()) {
            std::fprintf(stderr, "warning: cluster %s has no rows, skipped\n",
                         d.cluster_names()[c].c_str());
            continue;
        }
        const size_t cluster_n = subset.size();

        auto t0 = std::chrono::steady_clock::now();
        gfim::MineResult mined =
            gfim::mine(transactions, subset, taxonomy, catalog, th.coverage, maxsize, threads,
                       opts.attr_enabled);
        timing.mine_ms = ms_since(t0);
        timing.mined_itemsets = mined.size();

        // metrics: in-cluster count comes from the miner; the full-dataset
        // satisfying count is an AND over full row bitmaps. Itemsets that
        // differ only in universally-true items share the count, so each
        // distinct selective slot list is counted once.
        t0 = std::chrono::steady_clock::now();
        std::vector<uint32_t> count_items;
        std::vector<uint32_t> count_offsets{0};
        for (size_t i = 0; i < mined.size(); ++i) {
            for (ItemId item : mined.items(i)) {
                uint32_t s = full.slot_for(item);
                if (!full.universal(s)) count_items.push_back(s);
            }
            count_offsets.push_back(static_cast<uint32_t>(count_items.size()));
        }
        std::vector<uint32_t> hold_counts =
            deduplicated_counts(full.pool(), count_items, count_offsets, threads);

        struct Candidate {
            uint32_t itemset;
            ExplanationMetrics m;
        };
        std::vector<Candidate> survivors;
        for (size_t i = 0; i < mined.size(); ++i) {
            uint32_t n_in = mined.count(i);
            uint32_t n_hold = hold_counts[i];
            // in-cluster supporters are a subset of all supporters
            assert(n_hold >= n_in && n_hold > 0);
            double sep = static_cast<double>(n_hold - n_in) / static_cast<double>(n_hold);
            if (sep > th.separation) continue;
            ExplanationMetrics m;
            m.coverage = static_cast<double>(n_in) / static_cast<double>(cluster_n);
            m.separation_error = sep;
            m.conciseness = 1.0 / static_cast<double>(mined.items(i).size());
            survivors.push_back({static_cast<uint32_t>(i), m});
        }
        timing.metrics_ms = ms_since(t0);

        if (survivors.size() > opts.max_candidates_before_skyline) {
            std::fprintf(stderr,
                         "warning: cluster %s has %zu candidates, keeping top %zu by score\n",
                         d.cluster_names()[c].c_str(), survivors.size(),
                         opts.max_candidates_before_skyline);
            const size_t cap = opts.max_candidates_before_skyline;
            // score threshold via value selection, then a stable scan: keeps
            // the candidates above the threshold plus earliest ties, all in
            // itemset order
            std::vector<double> scores(survivors.size());
            for (size_t i = 0; i < survivors.size(); ++i) scores[i] = qse(survivors[i].m);
            std::vector<double> sel = scores;
            std::nth_element(sel.begin(), sel.begin() + (cap - 1), sel.end(),
                             std::greater<double>());
            double threshold = sel[cap - 1];
            std::vector<Candidate> kept;
            kept.reserve(cap);
            for (size_t i = 0; i < survivors.size(); ++i)
                if (scores[i] > threshold) kept.push_back(survivors[i]);
            for (size_t i = 0; i < survivors.size() && kept.size() < cap; ++i)
                if (scores[i] == threshold) kept.push_back(survivors[i]);
            std::sort(kept.begin(), kept.end(),
                      [](const Candidate& a, const Candidate& b) { return a.itemset < b.itemset; });
            survivors = std::move(kept);
            if (opts.audit) opts.audit->capped[c] = true;
        }
        timing.post_filter_candidates = survivors.size();
        if (opts.audit) {
            auto& rec = opts.audit->candidates[c];
            rec.reserve(survivors.size());
            for (const Candidate& s : survivors) rec.push_back(s.m);
        }

        t0 = std::chrono::steady_clock::now();
        std::vector<Explanation> candidates;
        candidates.reserve(survivors.size());
        for (const Candidate& s : survivors) {
            Explanation e = itemset_to_explanation(mined.items(s.itemset),
                                                   static_cast<int32_t>(c), catalog, d);
            e.metrics = s.m;
            candidates.push_back(std::move(e));
        }
        std::vector<Explanation> front = skyline(candidates);
        // canonical output order; stable so itemset order breaks exact ties
        std::stable_sort(front.begin(), front.end(),
                         [](const Explanation& a, const Explanation& b) {
                             if (a.metrics.coverage != b.metrics.coverage)
                                 return a.metrics.coverage > b.metrics.coverage;
                             if (a.metrics.separation_error != b.metrics.separation_error)
                                 return a.metrics.separation_error < b.metrics.separation_error;
                             return a.metrics.conciseness > b.metrics.conciseness;
                         });
        timing.skyline_ms = ms_since(t0);

        result[c] = std::move(front);
        if (opts.timings) (*opts.timings)[c] = timing;
    }
    return result;
}

double qse_aggregate(const std::vector<std::vector<Explanation>>& per_cluster) {
    if (per_cluster.empty()) return 0.0;
    double total = 0.0;
    for (const auto& explanations : per_cluster) {
        double best = 0.0;
        for (const auto& e : explanations) best = std::max(best, qse(e.metrics));
        total += best;
    }
    return total / static_cast<double>(per_cluster.size());
}

}  // namespace clex
