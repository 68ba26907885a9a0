#include "clex/gfim.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_map>

#include "clex/common.hpp"

namespace clex::gfim {

bool CandidateSpace::compatible(uint32_t a, uint32_t b) const {
    int32_t ga = conflict_group[a], gb = conflict_group[b];
    if (ga >= 0 && ga == gb && !(coexist[a] && coexist[b])) return false;
    if (std::binary_search(closure[a].begin(), closure[a].end(), b)) return false;
    if (std::binary_search(closure[b].begin(), closure[b].end(), a)) return false;
    return true;
}

void MineResult::push(std::span<const ItemId> items, uint32_t count) {
    item_buf_.insert(item_buf_.end(), items.begin(), items.end());
    offsets_.push_back(static_cast<uint32_t>(item_buf_.size()));
    counts_.push_back(count);
}

namespace {

// One Apriori level: flat k-tuples of slot indices, lexicographically
// sorted, with their support counts.
struct Level {
    size_t k = 1;
    std::vector<uint32_t> ids;
    std::vector<uint32_t> counts;

    size_t size() const { return counts.size(); }
    const uint32_t* entry(size_t i) const { return ids.data() + i * k; }
};

bool tuple_less(const uint32_t* a, const uint32_t* b, size_t k) {
    return std::lexicographical_compare(a, a + k, b, b + k);
}

bool level_contains(const Level& lv, const uint32_t* tuple) {
    size_t lo = 0, hi = lv.size();
    while (lo < hi) {
        size_t mid = lo + (hi - lo) / 2;
        if (tuple_less(lv.entry(mid), tuple, lv.k))
            lo = mid + 1;
        else
            hi = mid;
    }
    return lo < lv.size() && std::equal(tuple, tuple + lv.k, lv.entry(lo));
}

bool frequent(uint32_t count, size_t n, double minsup) {
    return static_cast<double>(count) / static_cast<double>(n) >= minsup;
}

// Candidates that differ only in universally-supported items share their
// selective slot list and therefore their count. Counting each distinct
// list once collapses the kernel work by orders of magnitude on datasets
// with many always-true items (e.g. full-range intervals of noise columns).
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

}  // namespace

MineResult mine_core(const CandidateSpace& space, size_t n_transactions, double minsup,
                     int maxsize, int threads) {
    if (!(minsup > 0.0) || minsup > 1.0) throw ConfigError("minsup must be in (0, 1]");
    if (maxsize < 1) throw ConfigError("maxsize must be >= 1");
    if (n_transactions == 0) throw DataError("cannot mine an empty transaction set");
    if (threads <= 0) threads = omp_get_max_threads();

    const size_t n_slots = space.ids.size();
    const size_t N = n_transactions;

    // Slots supported by every transaction contribute nothing to an AND;
    // dropping them keeps candidate counting proportional to the selective
    // items only.
    std::vector<uint32_t> slot_count(n_slots);
    std::vector<uint8_t> universal(n_slots, 0);
    for (size_t s = 0; s < n_slots; ++s) {
        slot_count[s] = kernels::popcount_words(space.bitmaps.slot(s), space.bitmaps.n_words());
        universal[s] = slot_count[s] == N;
    }

    std::vector<Level> levels;
    {
        Level l1;
        l1.k = 1;
        for (uint32_t s = 0; s < n_slots; ++s) {
            if (frequent(slot_count[s], N, minsup)) {
                l1.ids.push_back(s);
                l1.counts.push_back(slot_count[s]);
            }
        }
        levels.push_back(std::move(l1));
    }

    while (static_cast<int>(levels.back().k) < maxsize && levels.back().size() >= 2) {
        const Level& cur = levels.back();
        const size_t k = cur.k;

        Level next;
        next.k = k + 1;
        std::vector<uint32_t> cand_ids;          // flat (k+1)-tuples
        std::vector<uint32_t> count_items;       // selective slots per candidate
        std::vector<uint32_t> count_offsets{0};

        std::vector<uint32_t> tuple(k + 1), sub(k);
        size_t group_begin = 0;
        while (group_begin < cur.size()) {
            size_t group_end = group_begin + 1;
            while (group_end < cur.size() &&
                   std::equal(cur.entry(group_begin), cur.entry(group_begin) + k - 1,
                              cur.entry(group_end)))
                ++group_end;

            for (size_t i = group_begin; i < group_end; ++i) {
                for (size_t j = i + 1; j < group_end; ++j) {
                    uint32_t a = cur.entry(i)[k - 1];
                    uint32_t b = cur.entry(j)[k - 1];
                    if (!space.compatible(a, b)) continue;

                    std::copy(cur.entry(i), cur.entry(i) + k, tuple.begin());
                    tuple[k] = b;

                    // Apriori pruning: every k-subset must be frequent. The
                    // two parents cover dropping positions k-1 and k.
                    bool ok = true;
                    for (size_t drop = 0; ok && drop + 1 < k; ++drop) {
                        size_t w = 0;
                        for (size_t p = 0; p <= k; ++p)
                            if (p != drop) sub[w++] = tuple[p];
                        ok = level_contains(cur, sub.data());
                    }
                    if (!ok) continue;

                    cand_ids.insert(cand_ids.end(), tuple.begin(), tuple.end());
                    for (uint32_t s : tuple)
                        if (!universal[s]) count_items.push_back(s);
                    count_offsets.push_back(static_cast<uint32_t>(count_items.size()));
                }
            }
            group_begin = group_end;
        }

        size_t n_cand = count_offsets.size() - 1;
        if (n_cand == 0) break;

        // count each distinct selective slot list once
        std::unordered_map<SlotListKey, uint32_t, SlotListHash> memo;
        memo.reserve(n_cand / 4 + 16);
        std::vector<uint32_t> uniq_items, uniq_offsets{0};
        std::vector<uint32_t> cand_to_uniq(n_cand);
        for (size_t c = 0; c < n_cand; ++c) {
            SlotListKey key{count_items.data() + count_offsets[c],
                            count_offsets[c + 1] - count_offsets[c]};
            auto [it, inserted] = memo.try_emplace(key, static_cast<uint32_t>(memo.size()));
            if (inserted) {
                uniq_items.insert(uniq_items.end(), key.data, key.data + key.len);
                uniq_offsets.push_back(static_cast<uint32_t>(uniq_items.size()));
            }
            cand_to_uniq[c] = it->second;
        }
        std::vector<uint32_t> uniq_counts(memo.size());
        kernels::count_supports(space.bitmaps, uniq_items, uniq_offsets, uniq_counts.data(),
                                threads);
        std::vector<uint32_t> counts(n_cand);
        for (size_t c = 0; c < n_cand; ++c) counts[c] = uniq_counts[cand_to_uniq[c]];

        for (size_t c = 0; c < n_cand; ++c) {
            if (frequent(counts[c], N, minsup)) {
                const uint32_t* t = cand_ids.data() + c * (k + 1);
                next.ids.insert(next.ids.end(), t, t + k + 1);
                next.counts.push_back(counts[c]);
            }
        }
        if (next.size() == 0) break;
        levels.push_back(std::move(next));
    }

    // Output order: size asc, support desc, item ids asc. Entries within a
    // level are already lexicographic, so a stable bucket pass per count
    // value finishes the ordering without a comparison sort.
    MineResult result(N);
    std::vector<ItemId> translated;
    for (const Level& lv : levels) {
        std::vector<uint32_t> bucket_size(N + 1, 0);
        for (uint32_t cnt : lv.counts) ++bucket_size[N - cnt];
        std::vector<uint32_t> bucket_pos(N + 2, 0);
        for (size_t b = 0; b <= N; ++b) bucket_pos[b + 1] = bucket_pos[b] + bucket_size[b];
        std::vector<uint32_t> order(lv.size());
        for (uint32_t e = 0; e < static_cast<uint32_t>(lv.size()); ++e)
            order[bucket_pos[N - lv.counts[e]]++] = e;

        for (uint32_t e : order) {
            translated.clear();
            const uint32_t* t = lv.entry(e);
            for (size_t p = 0; p < lv.k; ++p) translated.push_back(space.ids[t[p]]);
            result.push(translated, lv.counts[e]);
        }
    }
    return result;
}

namespace {

struct AttrIntervals {
    std::vector<uint32_t> slots;
    std::vector<Interval> intervals;
};

}  // namespace

MineResult mine(const std::vector<Transaction>& transactions,
                const std::vector<uint32_t>& subset, const Taxonomy& taxonomy,
                const ItemCatalog& catalog, double minsup, int maxsize, int threads,
                const std::vector<uint8_t>* attr_enabled) {
    (void)taxonomy;  // interval geometry is reached through the catalog
    if (subset.empty()) throw DataError("cannot mine an empty transaction set");
    const size_t N = subset.size();
    const size_t n_attrs = catalog.n_attrs();

    auto enabled = [&](int a) {
        return !attr_enabled || (*attr_enabled)[static_cast<size_t>(a)] != 0;
    };

    // pass 1: raw item counts and attribute presence
    std::vector<uint32_t> raw_count(catalog.n_items(), 0);
    std::vector<ItemId> touched;
    std::vector<uint8_t> attr_present(n_attrs, 0);
    for (uint32_t idx : subset) {
        for (ItemId item : transactions[idx].items) {
            if (raw_count[item]++ == 0) touched.push_back(item);
        }
    }

    // candidate universe: frequent raw items + all intervals of the present
    // (enabled) numeric attributes
    std::vector<ItemId> cand;
    std::sort(touched.begin(), touched.end());
    for (ItemId item : touched) {
        int a = catalog.attr(item);
        if (!enabled(a)) continue;
        attr_present[a] = 1;
        double sup = static_cast<double>(raw_count[item]) / static_cast<double>(N);
        if (sup >= minsup) cand.push_back(item);
    }
    for (size_t a = 0; a < n_attrs; ++a) {
        if (!attr_present[a] || !enabled(static_cast<int>(a))) continue;
        for (size_t i = 0; i < catalog.n_intervals(static_cast<int>(a)); ++i)
            cand.push_back(catalog.interval_item(static_cast<int>(a), i));
    }
    std::sort(cand.begin(), cand.end());

    CandidateSpace space(cand.size(), N);
    space.ids = cand;
    space.conflict_group.resize(cand.size());
    space.coexist.resize(cand.size());
    space.closure.resize(cand.size());

    std::vector<int32_t> slot_of(catalog.n_items(), -1);
    std::vector<AttrIntervals> per_attr(n_attrs);
    for (uint32_t s = 0; s < cand.size(); ++s) {
        ItemId id = cand[s];
        int a = catalog.attr(id);
        slot_of[id] = static_cast<int32_t>(s);
        space.conflict_group[s] = a;
        space.coexist[s] = catalog.kind(id) == ItemKind::CatNeg;
        if (catalog.kind(id) == ItemKind::IntervalItem) {
            per_attr[a].slots.push_back(s);
            per_attr[a].intervals.push_back(catalog.interval(id));
        }
    }

    // interval-over-interval ancestors within each attribute
    for (const AttrIntervals& ai : per_attr) {
        for (size_t i = 0; i < ai.slots.size(); ++i) {
            for (size_t j = 0; j < ai.slots.size(); ++j) {
                if (i != j && precedes(ai.intervals[j], ai.intervals[i]))
                    space.closure[ai.slots[i]].push_back(ai.slots[j]);
            }
            std::sort(space.closure[ai.slots[i]].begin(), space.closure[ai.slots[i]].end());
        }
    }

    // pass 2: fill bitmaps (raw membership + interval containment)
    for (uint32_t local = 0; local < N; ++local) {
        const Transaction& t = transactions[subset[local]];
        for (ItemId item : t.items) {
            int32_t s = slot_of[item];
            if (s >= 0) space.bitmaps.set_bit(static_cast<size_t>(s), local);
            if (catalog.kind(item) == ItemKind::NumericEq) {
                int a = catalog.attr(item);
                const AttrIntervals& ai = per_attr[a];
                if (ai.slots.empty()) continue;
                double v = catalog.numeric_value(item);
                for (size_t i = 0; i < ai.slots.size(); ++i)
                    if (ai.intervals[i].contains(v)) space.bitmaps.set_bit(ai.slots[i], local);
            }
        }
    }

    return mine_core(space, N, minsup, maxsize, threads);
}

MineResult mine(const std::vector<Transaction>& transactions, const Taxonomy& taxonomy,
                const ItemCatalog& catalog, double minsup, int maxsize, int threads) {
    std::vector<uint32_t> all(transactions.size());
    std::iota(all.begin(), all.end(), 0);
    return mine(transactions, all, taxonomy, catalog, minsup, maxsize, threads, nullptr);
}

bool item_supported_by(ItemId item, const Transaction& t, const Taxonomy& taxonomy,
                       const ItemCatalog& catalog) {
    (void)taxonomy;
    if (catalog.kind(item) != ItemKind::IntervalItem)
        return std::binary_search(t.items.begin(), t.items.end(), item);
    int a = catalog.attr(item);
    auto [lo, hi] = catalog.numeric_eq_range(a);
    auto it = std::lower_bound(t.items.begin(), t.items.end(), lo);
    if (it == t.items.end() || *it >= hi) return false;
    return catalog.interval(item).contains(catalog.numeric_value(*it));
}

double support(std::span<const ItemId> items, const std::vector<Transaction>& transactions,
               const Taxonomy& taxonomy, const ItemCatalog& catalog) {
    if (transactions.empty()) throw DataError("support over an empty transaction set");
    size_t n = 0;
    for (const Transaction& t : transactions) {
        bool all = true;
        for (ItemId item : items) {
            if (!item_supported_by(item, t, taxonomy, catalog)) {
                all = false;
                break;
            }
        }
        n += all;
    }
    return static_cast<double>(n) / static_cast<double>(transactions.size());
}

}  // namespace clex::gfim
