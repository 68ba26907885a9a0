#include "clex/kernels.hpp"

#include <omp.h>

#include <bit>

namespace clex::kernels {

uint32_t popcount_words(const uint64_t* words, size_t n_words) {
    uint32_t c = 0;
    for (size_t w = 0; w < n_words; ++w) c += static_cast<uint32_t>(std::popcount(words[w]));
    return c;
}

namespace {

// trailing bits beyond n_rows are never set, so no tail masking is needed
inline uint32_t count_one(const BitmapPool& pool, const uint32_t* slots, size_t n_slots,
                          const uint64_t* mask) {
    const size_t n_words = pool.n_words();
    if (n_slots == 0) {
        if (!mask) return static_cast<uint32_t>(pool.n_rows());
        return popcount_words(mask, n_words);
    }
    const uint64_t* first = pool.slot(slots[0]);
    uint32_t count = 0;
    for (size_t w = 0; w < n_words; ++w) {
        uint64_t acc = first[w];
        for (size_t j = 1; j < n_slots; ++j) acc &= pool.slot(slots[j])[w];
        if (mask) acc &= mask[w];
        count += static_cast<uint32_t>(std::popcount(acc));
    }
    return count;
}

}  // namespace

void count_supports_masked_serial(const BitmapPool& pool, const std::vector<uint32_t>& items,
                                  const std::vector<uint32_t>& offsets, const uint64_t* mask,
                                  uint32_t* counts) {
    const size_t n = offsets.size() - 1;
    for (size_t c = 0; c < n; ++c)
        counts[c] = count_one(pool, items.data() + offsets[c], offsets[c + 1] - offsets[c], mask);
}

void count_supports_masked_omp(const BitmapPool& pool, const std::vector<uint32_t>& items,
                               const std::vector<uint32_t>& offsets, const uint64_t* mask,
                               uint32_t* counts, int threads) {
    const int64_t n = static_cast<int64_t>(offsets.size()) - 1;
#pragma omp parallel for schedule(static) num_threads(threads)
    for (int64_t c = 0; c < n; ++c)
        counts[c] = count_one(pool, items.data() + offsets[c], offsets[c + 1] - offsets[c], mask);
}

void count_supports_masked(const BitmapPool& pool, const std::vector<uint32_t>& items,
                           const std::vector<uint32_t>& offsets, const uint64_t* mask,
                           uint32_t* counts, int threads) {
    if (threads <= 0) threads = omp_get_max_threads();
    if (threads == 1 || offsets.size() < 2048)
        count_supports_masked_serial(pool, items, offsets, mask, counts);
    else
        count_supports_masked_omp(pool, items, offsets, mask, counts, threads);
}

void count_supports_serial(const BitmapPool& pool, const std::vector<uint32_t>& items,
                           const std::vector<uint32_t>& offsets, uint32_t* counts) {
    count_supports_masked_serial(pool, items, offsets, nullptr, counts);
}

void count_supports_omp(const BitmapPool& pool, const std::vector<uint32_t>& items,
                        const std::vector<uint32_t>& offsets, uint32_t* counts, int threads) {
    count_supports_masked_omp(pool, items, offsets, nullptr, counts, threads);
}

void count_supports(const BitmapPool& pool, const std::vector<uint32_t>& items,
                    const std::vector<uint32_t>& offsets, uint32_t* counts, int threads) {
    count_supports_masked(pool, items, offsets, nullptr, counts, threads);
}

}  // namespace clex::kernels
