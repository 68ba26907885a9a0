#include "clex/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace clex {

namespace {

bool parse_double(const std::string& s, double& out) {
    const char* first = s.data();
    const char* last = s.data() + s.size();
    while (first != last && (*first == ' ' || *first == '\t')) ++first;
    while (last != first && (*(last - 1) == ' ' || *(last - 1) == '\t')) --last;
    if (first == last) return false;
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc() && ptr == last && std::isfinite(out);
}

std::string format_double(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

bool needs_quoting(const std::string& field) {
    return field.find_first_of(",\"\n\r") != std::string::npos;
}

std::string quote_field(const std::string& field) {
    if (!needs_quoting(field)) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

// Sort cluster names numerically when every label parses as a number,
// lexicographically otherwise.
void sort_cluster_names(std::vector<std::string>& names) {
    bool all_numeric = true;
    std::vector<double> parsed(names.size());
    for (size_t i = 0; i < names.size(); ++i) {
        if (!parse_double(names[i], parsed[i])) {
            all_numeric = false;
            break;
        }
    }
    if (all_numeric) {
        std::vector<size_t> order(names.size());
        for (size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
            if (parsed[a] != parsed[b]) return parsed[a] < parsed[b];
            return names[a] < names[b];
        });
        std::vector<std::string> sorted;
        sorted.reserve(names.size());
        for (size_t i : order) sorted.push_back(names[i]);
        names = std::move(sorted);
    } else {
        std::sort(names.begin(), names.end());
    }
}

}  // namespace

const Column& Dataset::column(const std::string& name) const {
    auto it = by_name_.find(name);
    if (it == by_name_.end()) throw DataError("unknown attribute: " + name);
    return columns_[it->second];
}

int Dataset::column_index(const std::string& name) const {
    auto it = by_name_.find(name);
    return it == by_name_.end() ? -1 : static_cast<int>(it->second);
}

std::vector<uint32_t> Dataset::cluster_rows(int32_t cluster) const {
    if (cluster < 0 || static_cast<size_t>(cluster) >= cluster_names_.size())
        throw DataError("unknown cluster id");
    std::vector<uint32_t> rows;
    rows.reserve(cluster_sizes_[cluster]);
    for (size_t i = 0; i < labels_.size(); ++i)
        if (labels_[i] == cluster) rows.push_back(static_cast<uint32_t>(i));
    return rows;
}

void Dataset::add_column(Column col) {
    size_t rows = col.kind == AttributeKind::Numeric ? col.numeric.size() : col.codes.size();
    if (!columns_.empty() && rows != n_rows_)
        throw DataError("column " + col.name + " has mismatched row count");
    if (by_name_.count(col.name)) throw DataError("duplicate column name: " + col.name);
    n_rows_ = rows;
    by_name_[col.name] = columns_.size();
    columns_.push_back(std::move(col));
}

void Dataset::set_labels(std::vector<std::string> raw_labels) {
    if (!columns_.empty() && raw_labels.size() != n_rows_)
        throw DataError("label count does not match row count");
    if (columns_.empty()) n_rows_ = raw_labels.size();

    std::set<std::string> distinct(raw_labels.begin(), raw_labels.end());
    cluster_names_.assign(distinct.begin(), distinct.end());
    sort_cluster_names(cluster_names_);

    std::unordered_map<std::string, int32_t> code_of;
    for (size_t i = 0; i < cluster_names_.size(); ++i)
        code_of[cluster_names_[i]] = static_cast<int32_t>(i);

    labels_.resize(raw_labels.size());
    cluster_sizes_.assign(cluster_names_.size(), 0);
    for (size_t i = 0; i < raw_labels.size(); ++i) {
        labels_[i] = code_of[raw_labels[i]];
        ++cluster_sizes_[labels_[i]];
    }
}

void Dataset::write_csv(const std::string& path, const std::string& label_column) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot open for writing: " + path);

    for (const auto& col : columns_) out << quote_field(col.name) << ',';
    out << quote_field(label_column) << '\n';

    for (size_t i = 0; i < n_rows_; ++i) {
        for (const auto& col : columns_) {
            if (col.kind == AttributeKind::Numeric) {
                if (!is_missing(col.numeric[i])) out << format_double(col.numeric[i]);
            } else {
                if (col.codes[i] >= 0) out << quote_field(col.categories[col.codes[i]]);
            }
            out << ',';
        }
        out << quote_field(cluster_names_[labels_[i]]) << '\n';
    }
    if (!out) throw DataError("write failed: " + path);
}

std::vector<std::string> split_csv_record(const std::string& record) {
    std::vector<std::string> fields;
    std::string cur;
    bool in_quotes = false;
    for (size_t i = 0; i < record.size(); ++i) {
        char c = record[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < record.size() && record[i + 1] == '"') {
                    cur += '"';
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                cur += c;
            }
        } else if (c == '"') {
            in_quotes = true;
        } else if (c == ',') {
            fields.push_back(std::move(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    fields.push_back(std::move(cur));
    return fields;
}

namespace {

// Reads one logical CSV record, honoring newlines inside quoted fields.
bool read_record(std::istream& in, std::string& record) {
    record.clear();
    std::string line;
    bool have_any = false;
    while (std::getline(in, line)) {
        have_any = true;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        record += line;
        size_t quotes = std::count(record.begin(), record.end(), '"');
        if (quotes % 2 == 0) return true;
        record += '\n';
    }
    return have_any;
}

}  // namespace

Dataset load_csv(const std::string& path, const LoadOptions& opts) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open file: " + path);

    std::string record;
    if (!read_record(in, record)) throw DataError("empty file: " + path);
    std::vector<std::string> header = split_csv_record(record);

    int label_idx = -1;
    for (size_t i = 0; i < header.size(); ++i)
        if (header[i] == opts.label_column) label_idx = static_cast<int>(i);
    if (label_idx < 0)
        throw DataError("label column '" + opts.label_column + "' not found in " + path);

    std::vector<std::vector<std::string>> cells(header.size());
    size_t n_rows = 0;
    while (read_record(in, record)) {
        if (record.empty() && in.eof()) break;
        std::vector<std::string> fields = split_csv_record(record);
        if (fields.size() != header.size())
            throw DataError("row " + std::to_string(n_rows + 2) + " has " +
                            std::to_string(fields.size()) + " fields, expected " +
                            std::to_string(header.size()));
        for (size_t i = 0; i < fields.size(); ++i) cells[i].push_back(std::move(fields[i]));
        ++n_rows;
    }
    if (n_rows == 0) throw DataError("no data rows in " + path);

    Dataset d;
    for (size_t ci = 0; ci < header.size(); ++ci) {
        if (static_cast<int>(ci) == label_idx) continue;
        const auto& raw = cells[ci];

        std::optional<AttributeKind> hint;
        if (auto it = opts.type_hints.find(header[ci]); it != opts.type_hints.end())
            hint = it->second;

        // Inference: Numeric iff every non-missing cell parses as a finite
        // real and the distinct count clears the threshold.
        std::vector<double> parsed(n_rows, missing_value());
        bool all_parse = true;
        std::set<double> distinct;
        for (size_t r = 0; r < n_rows && all_parse; ++r) {
            if (raw[r].empty()) continue;
            double v;
            if (parse_double(raw[r], v)) {
                parsed[r] = v;
                distinct.insert(v);
            } else {
                all_parse = false;
            }
        }

        bool numeric;
        if (hint) {
            numeric = *hint == AttributeKind::Numeric;
            if (numeric && !all_parse)
                throw DataError("column '" + header[ci] +
                                "' hinted Numeric but holds non-numeric cells");
        } else {
            numeric = all_parse && distinct.size() > opts.numeric_distinct_threshold;
        }

        Column col;
        col.name = header[ci];
        if (numeric) {
            col.kind = AttributeKind::Numeric;
            col.numeric = std::move(parsed);
        } else {
            col.kind = AttributeKind::Categorical;
            std::set<std::string> cats;
            for (const auto& cell : raw)
                if (!cell.empty()) cats.insert(cell);
            col.categories.assign(cats.begin(), cats.end());
            std::unordered_map<std::string, int32_t> code_of;
            for (size_t i = 0; i < col.categories.size(); ++i)
                code_of[col.categories[i]] = static_cast<int32_t>(i);
            col.codes.resize(n_rows, -1);
            for (size_t r = 0; r < n_rows; ++r)
                if (!raw[r].empty()) col.codes[r] = code_of[raw[r]];
        }
        d.add_column(std::move(col));
    }

    for (const auto& label : cells[label_idx])
        if (label.empty()) throw DataError("missing cluster label in " + path);
    d.set_labels(std::move(cells[label_idx]));
    return d;
}

}  // namespace clex
