// Microbenchmark: serial reference kernels vs their OpenMP variants.
#include <omp.h>

#include <cstdio>
#include <cstdlib>
#include <vector>

#include "clex/common.hpp"
#include "clex/kernels.hpp"

using clex::kernels::BitmapPool;

namespace {

struct Workload {
    BitmapPool pool;
    std::vector<uint32_t> items;
    std::vector<uint32_t> offsets;
};

Workload make_workload(size_t n_rows, size_t n_items, size_t n_candidates, size_t cand_size,
                       uint64_t seed) {
    Workload w{BitmapPool(n_items, n_rows), {}, {0}};
    clex::Rng rng(seed);
    for (size_t s = 0; s < n_items; ++s) {
        double density = 0.5 + 0.5 * rng.uniform01();
        for (size_t r = 0; r < n_rows; ++r)
            if (rng.uniform01() < density) w.pool.set_bit(s, r);
    }
    for (size_t c = 0; c < n_candidates; ++c) {
        for (size_t j = 0; j < cand_size; ++j)
            w.items.push_back(static_cast<uint32_t>(rng.below(n_items)));
        w.offsets.push_back(static_cast<uint32_t>(w.items.size()));
    }
    return w;
}

template <typename F>
double time_ms(F&& fn, int reps) {
    double best = 1e300;
    for (int i = 0; i < reps; ++i) {
        double t0 = omp_get_wtime();
        fn();
        best = std::min(best, (omp_get_wtime() - t0) * 1000.0);
    }
    return best;
}

void run_case(size_t n_rows, size_t n_candidates, size_t cand_size) {
    const size_t n_items = 64;
    Workload w = make_workload(n_rows, n_items, n_candidates, cand_size, 42);
    std::vector<uint32_t> counts_serial(n_candidates), counts_omp(n_candidates);
    int threads = omp_get_max_threads();

    double t_serial = time_ms(
        [&] {
            clex::kernels::count_supports_serial(w.pool, w.items, w.offsets,
                                                 counts_serial.data());
        },
        3);
    double t_omp = time_ms(
        [&] {
            clex::kernels::count_supports_omp(w.pool, w.items, w.offsets, counts_omp.data(),
                                              threads);
        },
        3);

    if (counts_serial != counts_omp) {
        std::fprintf(stderr, "MISMATCH between serial and omp kernels!\n");
        std::exit(1);
    }
    double words = static_cast<double>(n_candidates) * cand_size * w.pool.n_words();
    std::printf("%10zu rows  %8zu cands  size %zu  serial %8.2f ms  omp(%d) %8.2f ms  "
                "speedup %5.2fx  %6.2f GB/s\n",
                n_rows, n_candidates, cand_size, t_serial, threads, t_omp,
                t_serial / t_omp, words * 8.0 / (t_omp * 1e6));
}

}  // namespace

int main(int argc, char** argv) {
    int scale = argc > 1 ? std::atoi(argv[1]) : 1;
    std::printf("support-counting kernel: serial reference vs OpenMP (%d threads)\n",
                omp_get_max_threads());
    run_case(10'000, 20'000ull * scale, 3);
    run_case(100'000, 5'000ull * scale, 3);
    run_case(100'000, 5'000ull * scale, 5);
    run_case(1'000'000, 500ull * scale, 4);
    return 0;
}
