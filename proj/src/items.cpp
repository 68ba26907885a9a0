#include "clex/items.hpp"

#include <algorithm>
#include <cassert>

namespace clex {

ItemCatalog::ItemCatalog(const Dataset& d, const Taxonomy& taxonomy, const NegationConfig& neg)
    : taxonomy_(&taxonomy) {
    segments_.resize(d.n_attrs());
    attr_begin_.resize(d.n_attrs());

    ItemId next = 0;
    for (size_t a = 0; a < d.n_attrs(); ++a) {
        const Column& col = d.column(a);
        AttrSegments& s = segments_[a];
        attr_begin_[a] = next;

        if (col.kind == AttributeKind::Numeric) {
            s.distinct_values.reserve(col.numeric.size());
            for (double v : col.numeric)
                if (!is_missing(v)) s.distinct_values.push_back(v);
            std::sort(s.distinct_values.begin(), s.distinct_values.end());
            s.distinct_values.erase(
                std::unique(s.distinct_values.begin(), s.distinct_values.end()),
                s.distinct_values.end());

            s.numeq_begin = next;
            next += static_cast<ItemId>(s.distinct_values.size());
            s.numeq_end = next;

            s.iv_begin = next;
            next += static_cast<ItemId>(taxonomy.attr_nodes(static_cast<int>(a)).size());
            s.iv_end = next;
        } else {
            s.cateq_begin = next;
            next += static_cast<ItemId>(col.categories.size());
            s.cateq_end = next;

            // negation eligibility: all values when the attribute is narrow,
            // otherwise the most frequent ones (count desc, code asc)
            size_t n_cats = col.categories.size();
            if (n_cats <= neg.max_neg_cardinality) {
                s.neg_codes.resize(n_cats);
                for (size_t i = 0; i < n_cats; ++i) s.neg_codes[i] = static_cast<int32_t>(i);
            } else {
                std::vector<size_t> freq(n_cats, 0);
                for (int32_t code : col.codes)
                    if (code >= 0) ++freq[code];
                std::vector<int32_t> order(n_cats);
                for (size_t i = 0; i < n_cats; ++i) order[i] = static_cast<int32_t>(i);
                std::sort(order.begin(), order.end(), [&](int32_t x, int32_t y) {
                    if (freq[x] != freq[y]) return freq[x] > freq[y];
                    return x < y;
                });
                s.neg_codes.assign(order.begin(), order.begin() + neg.max_neg_cardinality);
                std::sort(s.neg_codes.begin(), s.neg_codes.end());
            }
            s.catneg_begin = next;
            next += static_cast<ItemId>(s.neg_codes.size());
            s.catneg_end = next;
        }
    }
    n_items_ = next;
}

int ItemCatalog::attr_of_id(ItemId id) const {
    auto it = std::upper_bound(attr_begin_.begin(), attr_begin_.end(), id);
    return static_cast<int>(it - attr_begin_.begin()) - 1;
}

ItemKind ItemCatalog::kind(ItemId id) const {
    const AttrSegments& s = seg(attr_of_id(id));
    if (id >= s.numeq_begin && id < s.numeq_end) return ItemKind::NumericEq;
    if (id >= s.iv_begin && id < s.iv_end) return ItemKind::IntervalItem;
    if (id >= s.cateq_begin && id < s.cateq_end) return ItemKind::CatEq;
    return ItemKind::CatNeg;
}

int ItemCatalog::attr(ItemId id) const { return attr_of_id(id); }

std::pair<ItemId, ItemId> ItemCatalog::numeric_eq_range(int attr) const {
    const AttrSegments& s = seg(attr);
    return {s.numeq_begin, s.numeq_end};
}

double ItemCatalog::numeric_value(ItemId id) const {
    const AttrSegments& s = seg(attr_of_id(id));
    return s.distinct_values[id - s.numeq_begin];
}

NodeId ItemCatalog::taxonomy_node(ItemId id) const {
    int a = attr_of_id(id);
    const AttrSegments& s = seg(a);
    return taxonomy_->attr_nodes(a)[id - s.iv_begin];
}

const Interval& ItemCatalog::interval(ItemId id) const {
    return taxonomy_->nodes()[taxonomy_node(id)].interval;
}

int32_t ItemCatalog::category(ItemId id) const {
    const AttrSegments& s = seg(attr_of_id(id));
    if (id >= s.cateq_begin && id < s.cateq_end)
        return static_cast<int32_t>(id - s.cateq_begin);
    return s.neg_codes[id - s.catneg_begin];
}

ItemId ItemCatalog::numeric_eq(int attr, double value) const {
    const AttrSegments& s = seg(attr);
    auto it = std::lower_bound(s.distinct_values.begin(), s.distinct_values.end(), value);
    if (it == s.distinct_values.end() || *it != value) return kNoItem;
    return s.numeq_begin + static_cast<ItemId>(it - s.distinct_values.begin());
}

ItemId ItemCatalog::interval_item(int attr, size_t idx) const {
    const AttrSegments& s = seg(attr);
    return s.iv_begin + static_cast<ItemId>(idx);
}

size_t ItemCatalog::n_intervals(int attr) const {
    const AttrSegments& s = seg(attr);
    return s.iv_end - s.iv_begin;
}

ItemId ItemCatalog::cat_eq(int attr, int32_t code) const {
    const AttrSegments& s = seg(attr);
    if (code < 0 || s.cateq_begin + code >= s.cateq_end) return kNoItem;
    return s.cateq_begin + code;
}

ItemId ItemCatalog::cat_neg(int attr, int32_t code) const {
    const AttrSegments& s = seg(attr);
    auto it = std::lower_bound(s.neg_codes.begin(), s.neg_codes.end(), code);
    if (it == s.neg_codes.end() || *it != code) return kNoItem;
    return s.catneg_begin + static_cast<ItemId>(it - s.neg_codes.begin());
}

const std::vector<int32_t>& ItemCatalog::eligible_neg_codes(int attr) const {
    return seg(attr).neg_codes;
}

std::string ItemCatalog::display(ItemId id, const Dataset& d) const {
    int a = attr_of_id(id);
    const Column& col = d.column(a);
    switch (kind(id)) {
        case ItemKind::NumericEq:
            return col.name + " == " + std::to_string(numeric_value(id));
        case ItemKind::IntervalItem: {
            const Interval& iv = interval(id);
            return col.name + " in [" + std::to_string(iv.lo) + ", " + std::to_string(iv.hi) +
                   "]";
        }
        case ItemKind::CatEq:
            return col.name + " == " + col.categories[category(id)];
        case ItemKind::CatNeg:
            return col.name + " != " + col.categories[category(id)];
    }
    return "?";
}

std::vector<Transaction> augment_dataset(const Dataset& d, const ItemCatalog& catalog) {
    std::vector<Transaction> out(d.n_rows());
    for (size_t r = 0; r < d.n_rows(); ++r) {
        Transaction& t = out[r];
        t.row_index = static_cast<uint32_t>(r);
        t.cluster = d.labels()[r];
        for (size_t a = 0; a < d.n_attrs(); ++a) {
            const Column& col = d.column(a);
            if (col.kind == AttributeKind::Numeric) {
                if (is_missing(col.numeric[r])) continue;
                t.items.push_back(catalog.numeric_eq(static_cast<int>(a), col.numeric[r]));
            } else {
                int32_t code = col.codes[r];
                if (code < 0) continue;
                t.items.push_back(catalog.cat_eq(static_cast<int>(a), code));
                for (int32_t other : catalog.eligible_neg_codes(static_cast<int>(a)))
                    if (other != code)
                        t.items.push_back(catalog.cat_neg(static_cast<int>(a), other));
            }
        }
        // catalog layout already yields ascending ids
        assert(std::is_sorted(t.items.begin(), t.items.end()));
    }
    return out;
}

}  // namespace clex
