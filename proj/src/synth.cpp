#include "clex/synth.hpp"

#include <algorithm>
#include <string>

namespace clex {

void SynthSpec::validate() const {
    if (rows == 0) throw ConfigError("synth: rows must be positive");
    if (clusters < 1) throw ConfigError("synth: clusters must be positive");
    if (numeric_attrs < 0 || categorical_attrs < 0 || noise_attrs < 0)
        throw ConfigError("synth: attribute counts must be non-negative");
    if (numeric_attrs + categorical_attrs + noise_attrs == 0)
        throw ConfigError("synth: at least one attribute");
    if (rows < static_cast<size_t>(clusters))
        throw ConfigError("synth: need at least one row per cluster");
}

Dataset make_synthetic(const SynthSpec& spec) {
    spec.validate();
    Rng rng(spec.seed);
    const size_t n = spec.rows;
    const int k = spec.clusters;

    std::vector<int32_t> cluster_of(n);
    for (size_t r = 0; r < n; ++r) cluster_of[r] = static_cast<int32_t>(r % k);

    // Each informative column carries signal no other column duplicates: it
    // singles out one target cluster (redundant columns would starve the
    // Gini importances and make attribute selection ambiguous).
    Dataset d;
    for (int j = 0; j < spec.numeric_attrs; ++j) {
        int target = j % k;
        Column col;
        col.name = "num" + std::to_string(j);
        col.kind = AttributeKind::Numeric;
        col.numeric.resize(n);
        for (size_t r = 0; r < n; ++r) {
            int32_t c = cluster_of[r];
            double centroid = 3.0 * c + (c == target ? 30.0 : 0.0);
            col.numeric[r] = centroid + rng.normal(0.0, 1.5);
        }
        d.add_column(std::move(col));
    }

    for (int j = 0; j < spec.categorical_attrs; ++j) {
        int target = (spec.numeric_attrs + j) % k;
        Column col;
        col.name = "cat" + std::to_string(j);
        col.kind = AttributeKind::Categorical;
        col.categories = {"no", "yes"};
        col.codes.resize(n);
        for (size_t r = 0; r < n; ++r) {
            bool hit = rng.uniform01() < (cluster_of[r] == target ? 0.95 : 0.05);
            col.codes[r] = hit ? 1 : 0;
        }
        d.add_column(std::move(col));
    }

    for (int j = 0; j < spec.noise_attrs; ++j) {
        Column col;
        col.name = "noise" + std::to_string(j);
        col.kind = AttributeKind::Numeric;
        col.numeric.resize(n);
        for (size_t r = 0; r < n; ++r) col.numeric[r] = rng.uniform(0.0, 100.0);
        d.add_column(std::move(col));
    }

    std::vector<std::string> labels(n);
    for (size_t r = 0; r < n; ++r) labels[r] = std::to_string(cluster_of[r]);
    d.set_labels(std::move(labels));
    return d;
}

}  // namespace clex
