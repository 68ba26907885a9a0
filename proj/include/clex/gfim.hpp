#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "clex/items.hpp"
#include "clex/kernels.hpp"
#include "clex/taxonomy.hpp"

namespace clex::gfim {

/// Level-1 candidate universe for one mining run. Items are compact slot
/// indices [0, n); `ids` maps a slot back to the caller's item id and must
/// be strictly ascending so that slot order is the canonical item order.
struct CandidateSpace {
    std::vector<ItemId> ids;                 // slot -> caller item id
    kernels::BitmapPool bitmaps;             // one slot per item, |T_c| rows
    std::vector<int32_t> conflict_group;     // -1: conflicts with nothing
    std::vector<uint8_t> coexist;            // same-group pair allowed iff both set
    std::vector<std::vector<uint32_t>> closure;  // per slot: its ancestors (slots, sorted)

    CandidateSpace(size_t n_slots, size_t n_rows) : bitmaps(n_slots, n_rows) {}

    // two slots may share an itemset
    bool compatible(uint32_t a, uint32_t b) const;
};

/// Mined generalized frequent itemsets, flat-stored. Entries are sorted by
/// (size asc, support desc, item ids asc).
class MineResult {
public:
    size_t size() const { return offsets_.size() - 1; }
    std::span<const ItemId> items(size_t i) const {
        return {item_buf_.data() + offsets_[i], offsets_[i + 1] - offsets_[i]};
    }
    uint32_t count(size_t i) const { return counts_[i]; }
    double support(size_t i) const {
        return static_cast<double>(counts_[i]) / static_cast<double>(n_transactions_);
    }
    size_t n_transactions() const { return n_transactions_; }

    void push(std::span<const ItemId> items, uint32_t count);

    explicit MineResult(size_t n_transactions) : n_transactions_(n_transactions) {
        offsets_.push_back(0);
    }

private:
    std::vector<ItemId> item_buf_;
    std::vector<uint32_t> offsets_;
    std::vector<uint32_t> counts_;
    size_t n_transactions_;
};

/// Level-wise Apriori over an arbitrary candidate space: exactly the
/// itemsets with support >= minsup, size <= maxsize, pairwise-compatible
/// items and no item together with one of its ancestors.
MineResult mine_core(const CandidateSpace& space, size_t n_transactions, double minsup,
                     int maxsize, int threads);

/// Pipeline-level miner: candidate items are the raw items present in the
/// given transactions plus every taxonomy interval of the numeric attributes
/// present; at most one non-negation item per attribute. `attr_enabled`
/// (optional) restricts mining to selected attributes.
MineResult mine(const std::vector<Transaction>& transactions,
                const std::vector<uint32_t>& subset, const Taxonomy& taxonomy,
                const ItemCatalog& catalog, double minsup, int maxsize, int threads,
                const std::vector<uint8_t>* attr_enabled = nullptr);

MineResult mine(const std::vector<Transaction>& transactions, const Taxonomy& taxonomy,
                const ItemCatalog& catalog, double minsup, int maxsize, int threads = 1);

/// Direct containment-semantics membership test: raw items by membership,
/// interval items when the transaction's value for that attribute falls in
/// range. This is the reference semantics the bitmaps must agree with.
bool item_supported_by(ItemId item, const Transaction& t, const Taxonomy& taxonomy,
                       const ItemCatalog& catalog);

/// Fraction of transactions supporting every item (scan-based).
double support(std::span<const ItemId> items, const std::vector<Transaction>& transactions,
               const Taxonomy& taxonomy, const ItemCatalog& catalog);

}  // namespace clex::gfim
