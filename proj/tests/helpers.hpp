#pragma once

#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "clex/binning.hpp"
#include "clex/dataset.hpp"
#include "clex/items.hpp"
#include "clex/taxonomy.hpp"

namespace clex::testing {

inline Column num_col(std::string name, std::vector<double> values) {
    Column c;
    c.name = std::move(name);
    c.kind = AttributeKind::Numeric;
    c.numeric = std::move(values);
    return c;
}

inline Column cat_col(std::string name, const std::vector<std::string>& values) {
    Column c;
    c.name = std::move(name);
    c.kind = AttributeKind::Categorical;
    std::vector<std::string> cats;
    for (const auto& v : values)
        if (!v.empty()) cats.push_back(v);
    std::sort(cats.begin(), cats.end());
    cats.erase(std::unique(cats.begin(), cats.end()), cats.end());
    c.categories = cats;
    for (const auto& v : values) {
        if (v.empty()) {
            c.codes.push_back(-1);
        } else {
            auto it = std::lower_bound(cats.begin(), cats.end(), v);
            c.codes.push_back(static_cast<int32_t>(it - cats.begin()));
        }
    }
    return c;
}

inline Dataset make_dataset(std::vector<Column> cols, std::vector<std::string> labels) {
    Dataset d;
    for (auto& c : cols) d.add_column(std::move(c));
    d.set_labels(std::move(labels));
    return d;
}

// Everything the miner needs, bundled. The catalog references the sibling
// taxonomy member, so the bundle is pinned in place (returned via mandatory
// copy elision only).
struct Pipeline {
    Dataset d;
    std::vector<std::vector<Interval>> intervals;
    Taxonomy taxonomy;
    ItemCatalog catalog;
    std::vector<Transaction> transactions;

    Pipeline(Dataset din, const BinningConfig& bins, const NegationConfig& neg)
        : d(std::move(din)),
          intervals(bin_dataset(d, bins, 1)),
          taxonomy(Taxonomy::build(intervals)),
          catalog(d, taxonomy, neg),
          transactions(augment_dataset(d, catalog)) {}

    Pipeline(const Pipeline&) = delete;
    Pipeline(Pipeline&&) = delete;
};

inline Pipeline make_pipeline(Dataset d, const BinningConfig& bins = {},
                              const NegationConfig& neg = {}) {
    return Pipeline(std::move(d), bins, neg);
}

class TempFile {
public:
    explicit TempFile(const std::string& stem) {
        static int counter = 0;
        path_ = (std::filesystem::temp_directory_path() /
                 (stem + "." + std::to_string(::getpid()) + "." + std::to_string(counter++)))
                    .string();
    }
    ~TempFile() { std::remove(path_.c_str()); }
    const std::string& path() const { return path_; }

    void write(const std::string& content) const {
        std::ofstream out(path_, std::ios::binary);
        out << content;
    }

private:
    std::string path_;
};

inline std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace clex::testing
