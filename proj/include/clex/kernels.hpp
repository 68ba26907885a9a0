#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace clex::kernels {

// Row sets are bitmaps: one bit per transaction/row, packed into 64-bit
// words. A BitmapPool is a dense matrix of them (slot-major), sized for a
// fixed row count.
class BitmapPool {
public:
    BitmapPool(size_t n_slots, size_t n_rows)
        : n_rows_(n_rows), n_words_((n_rows + 63) / 64), words_(n_slots * n_words_, 0) {}

    size_t n_rows() const { return n_rows_; }
    size_t n_words() const { return n_words_; }
    size_t n_slots() const { return n_words_ ? words_.size() / n_words_ : 0; }

    uint64_t* slot(size_t s) { return words_.data() + s * n_words_; }
    const uint64_t* slot(size_t s) const { return words_.data() + s * n_words_; }

    // appends a zeroed slot, returns its index
    size_t add_slot() {
        words_.resize(words_.size() + n_words_, 0);
        return n_slots() - 1;
    }

    void set_bit(size_t s, size_t row) { slot(s)[row >> 6] |= 1ull << (row & 63); }
    bool test_bit(size_t s, size_t row) const {
        return (slot(s)[row >> 6] >> (row & 63)) & 1;
    }
    void or_into(size_t dst, size_t src) {
        uint64_t* d = slot(dst);
        const uint64_t* s = slot(src);
        for (size_t w = 0; w < n_words_; ++w) d[w] |= s[w];
    }

private:
    size_t n_rows_;
    size_t n_words_;
    std::vector<uint64_t> words_;
};

uint32_t popcount_words(const uint64_t* words, size_t n_words);

// Support counting: candidate c is the slot list
// items[offsets[c] .. offsets[c+1]); its count is the popcount of the AND
// of those slots' bitmaps. An empty slot list counts every row.
//
// The serial variant is the reference implementation; the omp variant must
// produce bit-identical counts (tests enforce this) and is what the miner
// runs in production.
void count_supports_serial(const BitmapPool& pool, const std::vector<uint32_t>& items,
                           const std::vector<uint32_t>& offsets, uint32_t* counts);
void count_supports_omp(const BitmapPool& pool, const std::vector<uint32_t>& items,
                        const std::vector<uint32_t>& offsets, uint32_t* counts, int threads);
void count_supports(const BitmapPool& pool, const std::vector<uint32_t>& items,
                    const std::vector<uint32_t>& offsets, uint32_t* counts, int threads);

// Pairwise counts for metric evaluation: for each candidate, the count of
// (AND of its slots) restricted by an extra mask bitmap (e.g. one cluster's
// rows). mask == nullptr means no restriction.
void count_supports_masked_serial(const BitmapPool& pool, const std::vector<uint32_t>& items,
                                  const std::vector<uint32_t>& offsets, const uint64_t* mask,
                                  uint32_t* counts);
void count_supports_masked_omp(const BitmapPool& pool, const std::vector<uint32_t>& items,
                               const std::vector<uint32_t>& offsets, const uint64_t* mask,
                               uint32_t* counts, int threads);
void count_supports_masked(const BitmapPool& pool, const std::vector<uint32_t>& items,
                           const std::vector<uint32_t>& offsets, const uint64_t* mask,
                           uint32_t* counts, int threads);

}  // namespace clex::kernels
