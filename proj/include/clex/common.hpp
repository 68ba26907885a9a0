#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace clex {

// Error taxonomy; the CLI maps these onto exit codes.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Bad input data (unreadable file, malformed CSV, unknown column, ...).
class DataError : public Error {
public:
    explicit DataError(const std::string& what) : Error(what) {}
};

// Invalid configuration (thresholds out of range, bad flag combinations).
class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& what) : Error(what) {}
};

inline bool is_missing(double v) { return std::isnan(v); }
inline double missing_value() { return std::numeric_limits<double>::quiet_NaN(); }

// Round to `digits` significant decimal digits. Used to deduplicate
// intervals whose endpoints differ only by float noise across binning
// methods.
inline double round_sig(double x, int digits = 9) {
    if (x == 0.0 || !std::isfinite(x)) return x;
    double mag = std::floor(std::log10(std::fabs(x)));
    double scale = std::pow(10.0, digits - 1 - mag);
    return std::round(x * scale) / scale;
}

// floor(1/theta) resp. floor(p/theta) with a nudge: 1/0.2 evaluates to
// 4.999... in binary floating point but the intended capacity is 5.
inline int capacity_floor(double numerator, double theta) {
    return static_cast<int>(std::floor(numerator / theta + 1e-9));
}

// Splitmix64; seeding and stream-splitting for the synthetic generator.
inline uint64_t splitmix64(uint64_t& state) {
    uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

// Deterministic RNG independent of libstdc++ distribution internals, so
// identical seeds give identical output on any platform.
class Rng {
public:
    explicit Rng(uint64_t seed) : state_(seed) {
        // warm up so small seeds diverge immediately
        splitmix64(state_);
    }

    uint64_t next_u64() { return splitmix64(state_); }

    double uniform01() { return (next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    // Box-Muller; one value per call, the pair's second half is dropped.
    double normal(double mean, double stddev) {
        double u1 = uniform01();
        double u2 = uniform01();
        while (u1 <= 1e-300) u1 = uniform01();
        double r = std::sqrt(-2.0 * std::log(u1));
        return mean + stddev * r * std::cos(6.283185307179586 * u2);
    }

    uint64_t below(uint64_t n) { return n ? next_u64() % n : 0; }

private:
    uint64_t state_;
};

}  // namespace clex
