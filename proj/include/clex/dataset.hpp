#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "clex/common.hpp"

namespace clex {

enum class AttributeKind { Numeric, Categorical };

/// One feature column. Numeric columns store doubles with NaN marking a
/// missing cell; categorical columns store codes into `categories`
/// (lexicographically sorted) with -1 marking a missing cell.
struct Column {
    std::string name;
    AttributeKind kind = AttributeKind::Categorical;
    std::vector<double> numeric;        // numeric only
    std::vector<int32_t> codes;         // categorical only
    std::vector<std::string> categories;  // categorical only, sorted

    bool missing(size_t row) const {
        return kind == AttributeKind::Numeric ? is_missing(numeric[row]) : codes[row] < 0;
    }
};

/// Immutable after load; concurrent readers are safe.
class Dataset {
public:
    size_t n_rows() const { return n_rows_; }
    size_t n_attrs() const { return columns_.size(); }

    const std::vector<Column>& columns() const { return columns_; }
    const Column& column(size_t idx) const { return columns_[idx]; }
    const Column& column(const std::string& name) const;
    int column_index(const std::string& name) const;  // -1 if absent

    /// Per-row cluster label as an index into cluster_names().
    const std::vector<int32_t>& labels() const { return labels_; }
    const std::vector<std::string>& cluster_names() const { return cluster_names_; }
    size_t n_clusters() const { return cluster_names_.size(); }

    /// Row indices of cluster c, ascending.
    std::vector<uint32_t> cluster_rows(int32_t cluster) const;
    size_t cluster_size(int32_t cluster) const { return cluster_sizes_[cluster]; }

    void add_column(Column col);
    void set_labels(std::vector<std::string> raw_labels);

    void write_csv(const std::string& path, const std::string& label_column = "cluster") const;

private:
    size_t n_rows_ = 0;
    std::vector<Column> columns_;
    std::unordered_map<std::string, size_t> by_name_;
    std::vector<int32_t> labels_;
    std::vector<std::string> cluster_names_;
    std::vector<size_t> cluster_sizes_;
};

using TypeHints = std::unordered_map<std::string, AttributeKind>;

struct LoadOptions {
    std::string label_column = "cluster";
    TypeHints type_hints;
    // A column whose cells all parse as finite reals is Numeric only when
    // it has more than this many distinct values; low-cardinality integer
    // codes behave like categories.
    size_t numeric_distinct_threshold = 10;
};

Dataset load_csv(const std::string& path, const LoadOptions& opts);

// Split one RFC-4180 CSV record (handles quoting; exposed for tests).
std::vector<std::string> split_csv_record(const std::string& record);

}  // namespace clex
