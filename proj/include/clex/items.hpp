#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "clex/dataset.hpp"
#include "clex/taxonomy.hpp"

namespace clex {

using ItemId = uint32_t;
constexpr ItemId kNoItem = UINT32_MAX;

enum class ItemKind : uint8_t { NumericEq, IntervalItem, CatEq, CatNeg };

struct NegationConfig {
    // Negation items are generated for every other value of a categorical
    // attribute with at most this many distinct values; wider attributes
    // negate only their most frequent values (same count).
    size_t max_neg_cardinality = 20;
};

/// Dense id space for every predicate atom the pipeline can mine:
/// one NumericEq per distinct numeric value, one IntervalItem per taxonomy
/// node, one CatEq per category, one CatNeg per eligible negation value.
/// Ids are canonical: attribute column order, then kind, then value order,
/// so sorting by id is the deterministic "lexical" item order.
///
/// Holds a reference to the taxonomy; the taxonomy object must stay alive
/// (and in place) for the catalog's lifetime.
class ItemCatalog {
public:
    ItemCatalog(const Dataset& d, const Taxonomy& taxonomy, const NegationConfig& neg);

    ItemId n_items() const { return n_items_; }
    size_t n_attrs() const { return segments_.size(); }

    ItemKind kind(ItemId id) const;
    int attr(ItemId id) const;

    /// Id range [first, last) of an attribute's NumericEq items.
    std::pair<ItemId, ItemId> numeric_eq_range(int attr) const;

    double numeric_value(ItemId id) const;  // NumericEq
    const Interval& interval(ItemId id) const;  // IntervalItem
    NodeId taxonomy_node(ItemId id) const;      // IntervalItem
    int32_t category(ItemId id) const;          // CatEq / CatNeg

    // Lookups; kNoItem when the atom does not exist in this catalog.
    ItemId numeric_eq(int attr, double value) const;
    ItemId interval_item(int attr, size_t idx) const;  // idx into taxonomy attr order
    size_t n_intervals(int attr) const;
    ItemId cat_eq(int attr, int32_t code) const;
    ItemId cat_neg(int attr, int32_t code) const;
    const std::vector<int32_t>& eligible_neg_codes(int attr) const;

    std::string display(ItemId id, const Dataset& d) const;

private:
    struct AttrSegments {
        // id range starts; an empty segment has begin == end
        ItemId numeq_begin = 0, numeq_end = 0;
        ItemId iv_begin = 0, iv_end = 0;
        ItemId cateq_begin = 0, cateq_end = 0;
        ItemId catneg_begin = 0, catneg_end = 0;
        std::vector<double> distinct_values;   // sorted, numeric attrs
        std::vector<int32_t> neg_codes;        // sorted, categorical attrs
    };

    const AttrSegments& seg(int attr) const { return segments_[attr]; }
    int attr_of_id(ItemId id) const;

    std::vector<AttrSegments> segments_;
    std::vector<ItemId> attr_begin_;  // first id of each attribute's block
    const Taxonomy* taxonomy_;
    ItemId n_items_ = 0;
};

/// One row as a set of discrete predicate atoms. Items are sorted global
/// ids; interval items never occur here, they attach at mining time.
struct Transaction {
    uint32_t row_index = 0;
    int32_t cluster = 0;
    std::vector<ItemId> items;
};

/// Algorithm: one transaction per row; NumericEq for each non-missing
/// numeric cell, CatEq plus eligible-value negations for each non-missing
/// categorical cell, nothing for missing cells.
std::vector<Transaction> augment_dataset(const Dataset& d, const ItemCatalog& catalog);

}  // namespace clex
