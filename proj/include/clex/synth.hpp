#pragma once

#include <cstdint>
#include <string>

#include "clex/dataset.hpp"

namespace clex {

/// Deterministic synthetic clustering fixture: informative numeric columns
/// draw around per-cluster centroids, informative categorical columns have
/// one dominant value per cluster, noise columns are label-independent.
struct SynthSpec {
    size_t rows = 1000;
    int numeric_attrs = 3;
    int categorical_attrs = 2;
    int clusters = 3;
    int noise_attrs = 0;
    uint64_t seed = 1;

    void validate() const;
};

Dataset make_synthetic(const SynthSpec& spec);

}  // namespace clex
