#include <doctest.h>

#include "clex/common.hpp"
#include "clex/kernels.hpp"

using namespace clex;
using kernels::BitmapPool;

namespace {

struct Fixture {
    BitmapPool pool;
    std::vector<uint32_t> items;
    std::vector<uint32_t> offsets;
    std::vector<std::vector<bool>> rows;  // mirror for the naive reference

    Fixture(size_t n_rows, size_t n_slots, size_t n_cands, uint64_t seed)
        : pool(n_slots, n_rows), offsets{0}, rows(n_slots, std::vector<bool>(n_rows)) {
        Rng rng(seed);
        for (size_t s = 0; s < n_slots; ++s) {
            double density = rng.uniform01();
            for (size_t r = 0; r < n_rows; ++r) {
                if (rng.uniform01() < density) {
                    pool.set_bit(s, r);
                    rows[s][r] = true;
                }
            }
        }
        for (size_t c = 0; c < n_cands; ++c) {
            size_t k = rng.below(4);  // 0..3 items; empty lists hit the all-rows path
            for (size_t j = 0; j < k; ++j)
                items.push_back(static_cast<uint32_t>(rng.below(n_slots)));
            offsets.push_back(static_cast<uint32_t>(items.size()));
        }
    }

    uint32_t naive_count(size_t c, const std::vector<bool>* mask) const {
        uint32_t n = 0;
        for (size_t r = 0; r < pool.n_rows(); ++r) {
            bool all = !mask || (*mask)[r];
            for (uint32_t i = offsets[c]; all && i < offsets[c + 1]; ++i)
                all = rows[items[i]][r];
            n += all;
        }
        return n;
    }
};

}  // namespace

TEST_CASE("bitmap pool bit accounting") {
    BitmapPool pool(2, 130);
    CHECK(pool.n_words() == 3);
    pool.set_bit(0, 0);
    pool.set_bit(0, 64);
    pool.set_bit(0, 129);
    CHECK(pool.test_bit(0, 64));
    CHECK_FALSE(pool.test_bit(0, 65));
    CHECK(kernels::popcount_words(pool.slot(0), pool.n_words()) == 3);

    pool.set_bit(1, 64);
    pool.or_into(1, 0);
    CHECK(kernels::popcount_words(pool.slot(1), pool.n_words()) == 3);

    size_t s = pool.add_slot();
    CHECK(s == 2);
    CHECK(kernels::popcount_words(pool.slot(2), pool.n_words()) == 0);
}

TEST_CASE("serial and OpenMP support counting agree with a per-row reference") {
    for (uint64_t seed : {1ull, 2ull, 3ull}) {
        Fixture f(517, 12, 300, seed);
        size_t n = f.offsets.size() - 1;
        std::vector<uint32_t> serial(n), omp(n);
        kernels::count_supports_serial(f.pool, f.items, f.offsets, serial.data());
        kernels::count_supports_omp(f.pool, f.items, f.offsets, omp.data(), 4);
        for (size_t c = 0; c < n; ++c) {
            CHECK(serial[c] == f.naive_count(c, nullptr));
            CHECK(omp[c] == serial[c]);
        }
    }
}

TEST_CASE("masked counting restricts to the mask rows") {
    Fixture f(200, 8, 100, 9);
    // mask: even rows only
    BitmapPool maskpool(1, 200);
    std::vector<bool> mask(200);
    for (size_t r = 0; r < 200; r += 2) {
        maskpool.set_bit(0, r);
        mask[r] = true;
    }
    size_t n = f.offsets.size() - 1;
    std::vector<uint32_t> serial(n), omp(n);
    kernels::count_supports_masked_serial(f.pool, f.items, f.offsets, maskpool.slot(0),
                                          serial.data());
    kernels::count_supports_masked_omp(f.pool, f.items, f.offsets, maskpool.slot(0),
                                       omp.data(), 3);
    for (size_t c = 0; c < n; ++c) {
        CHECK(serial[c] == f.naive_count(c, &mask));
        CHECK(omp[c] == serial[c]);
    }
}

TEST_CASE("dispatch picks a path without changing results") {
    Fixture f(1000, 6, 3000, 4);
    size_t n = f.offsets.size() - 1;
    std::vector<uint32_t> a(n), b(n);
    kernels::count_supports(f.pool, f.items, f.offsets, a.data(), 1);
    kernels::count_supports(f.pool, f.items, f.offsets, b.data(), 8);
    CHECK(a == b);
}

TEST_CASE("empty candidate list and empty batch") {
    BitmapPool pool(1, 77);
    for (size_t r = 0; r < 40; ++r) pool.set_bit(0, r);
    std::vector<uint32_t> items;
    std::vector<uint32_t> offsets{0, 0};  // one candidate with no items
    uint32_t count = 0;
    kernels::count_supports_serial(pool, items, offsets, &count);
    CHECK(count == 77);  // no constraint matches every row

    std::vector<uint32_t> none{0};
    kernels::count_supports_serial(pool, items, none, nullptr);  // zero candidates: no-op
}
