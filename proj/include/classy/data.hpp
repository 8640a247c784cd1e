#pragma once

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <istream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "errors.hpp"
#include "ids.hpp"

namespace classy {

/// A parsed CSV file: column names, string cells, and which column holds
/// the class label.
struct RawTable {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
    std::size_t label_col = 0;

    std::size_t num_attributes() const { return columns.size() - 1; }
};

namespace detail {

/// One record, RFC-4180 quoting rules.  Returns false on end of input.
inline bool read_record(std::istream& in, std::vector<std::string>& out,
                        std::size_t& line_no) {
    out.clear();
    int c = in.get();
    if (c == EOF) return false;
    ++line_no;
    std::string field;
    bool quoted = false;
    for (;; c = in.get()) {
        if (quoted) {
            if (c == EOF) throw ParseError("unterminated quote in row " + std::to_string(line_no));
            if (c == '"') {
                if (in.peek() == '"') { field += '"'; in.get(); }
                else quoted = false;
            } else {
                field += static_cast<char>(c);
                if (c == '\n') ++line_no;
            }
        } else if (c == '"' && field.empty()) {
            quoted = true;
        } else if (c == ',') {
            out.push_back(std::move(field));
            field.clear();
        } else if (c == '\n' || c == EOF) {
            break;
        } else if (c != '\r') {
            field += static_cast<char>(c);
        }
    }
    out.push_back(std::move(field));
    return true;
}

} // namespace detail

/// Load a CSV file with a header row.  `label` selects the class column by
/// name; the empty string means "last column".  Every row must have exactly
/// as many fields as the header.
inline RawTable load_csv(std::istream& in, const std::string& label = "") {
    RawTable t;
    std::size_t line_no = 0;
    if (!detail::read_record(in, t.columns, line_no))
        throw ParseError("empty input: no header row");
    if (t.columns.size() < 2)
        throw ParseError("header needs at least one attribute and the label");

    if (label.empty()) {
        t.label_col = t.columns.size() - 1;
    } else {
        auto it = std::find(t.columns.begin(), t.columns.end(), label);
        if (it == t.columns.end())
            throw ConfigError("label column '" + label + "' not found");
        t.label_col = static_cast<std::size_t>(it - t.columns.begin());
    }

    std::vector<std::string> rec;
    while (detail::read_record(in, rec, line_no)) {
        if (rec.size() == 1 && rec[0].empty()) continue; // stray blank line
        if (rec.size() != t.columns.size())
            throw ParseError("row " + std::to_string(line_no) + " has " +
                             std::to_string(rec.size()) + " fields, expected " +
                             std::to_string(t.columns.size()));
        t.rows.push_back(rec);
    }
    if (t.rows.empty()) throw ParseError("no data rows");
    return t;
}

inline RawTable load_csv_file(const std::string& path, const std::string& label = "") {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open '" + path + "'");
    return load_csv(in, label);
}

/// One boolean item of the binarized attribute space: "column = value".
struct ItemDescriptor {
    std::uint32_t column = 0;
    std::string column_name;
    std::string value;

    std::string name() const { return column_name + "=" + value; }
};

/// Fully binarized dataset: every attribute one-hot encoded into items,
/// labels mapped to dense class ids, and covers precomputed per item and
/// per class.  Items and classes are ordered lexicographically so the same
/// table always binarizes the same way.
class Dataset {
public:
    std::vector<ItemDescriptor> items;
    std::vector<std::string> class_names;
    std::vector<IdSet> item_covers;             // by item id
    std::vector<IdSet> class_covers;            // by class id
    std::vector<std::uint32_t> labels;          // by instance
    std::vector<std::vector<std::uint32_t>> instance_items; // sorted item ids

    std::size_t num_instances() const { return labels.size(); }
    std::size_t num_items() const { return items.size(); }
    std::size_t num_classes() const { return class_names.size(); }

    std::size_t class_count(std::size_t c) const { return class_covers[c].count(); }
};

/// One-hot encode a table.  Every (attribute, value) pair that occurs
/// becomes an item, so each instance activates exactly one item per
/// attribute column.
inline Dataset binarize(const RawTable& t) {
    Dataset d;
    const std::size_t n = t.rows.size();

    std::map<std::string, std::uint32_t> class_ids;
    for (const auto& row : t.rows) class_ids.emplace(row[t.label_col], 0);
    for (auto& [name, id] : class_ids) {
        id = static_cast<std::uint32_t>(d.class_names.size());
        d.class_names.push_back(name);
    }

    d.class_covers.assign(d.class_names.size(), IdSet(n));
    d.labels.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        d.labels[i] = class_ids.at(t.rows[i][t.label_col]);
        d.class_covers[d.labels[i]].set(i);
    }

    d.instance_items.resize(n);
    for (std::size_t col = 0; col < t.columns.size(); ++col) {
        if (col == t.label_col) continue;
        std::map<std::string, std::uint32_t> value_ids;
        for (const auto& row : t.rows) value_ids.emplace(row[col], 0);
        for (auto& [value, id] : value_ids) {
            id = static_cast<std::uint32_t>(d.items.size());
            d.items.push_back({static_cast<std::uint32_t>(col), t.columns[col], value});
            d.item_covers.emplace_back(n);
        }
        for (std::size_t i = 0; i < n; ++i) {
            std::uint32_t item = value_ids.at(t.rows[i][col]);
            d.item_covers[item].set(i);
            d.instance_items[i].push_back(item);
        }
    }
    return d;
}

/// Restrict a dataset to the given instances (identity of items and classes
/// is preserved, so models trained on the subset speak the same schema).
inline Dataset subset(const Dataset& d, const std::vector<std::uint32_t>& ids) {
    Dataset s;
    s.items = d.items;
    s.class_names = d.class_names;
    const std::size_t n = ids.size();
    s.item_covers.assign(d.num_items(), IdSet(n));
    s.class_covers.assign(d.num_classes(), IdSet(n));
    s.labels.resize(n);
    s.instance_items.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::uint32_t src = ids[i];
        s.labels[i] = d.labels[src];
        s.class_covers[s.labels[i]].set(i);
        s.instance_items[i] = d.instance_items[src];
        for (std::uint32_t item : s.instance_items[i]) s.item_covers[item].set(i);
    }
    return s;
}

/// Fold assignments for repeated stratified cross-validation:
/// assignment[rep][instance] -> fold id in [0, k).
struct FoldPlan {
    std::size_t k = 0;
    std::size_t repeats = 0;
    std::vector<std::vector<std::uint32_t>> assignment;

    std::vector<std::uint32_t> train_ids(std::size_t rep, std::size_t fold) const {
        std::vector<std::uint32_t> ids;
        for (std::uint32_t i = 0; i < assignment[rep].size(); ++i)
            if (assignment[rep][i] != fold) ids.push_back(i);
        return ids;
    }

    std::vector<std::uint32_t> test_ids(std::size_t rep, std::size_t fold) const {
        std::vector<std::uint32_t> ids;
        for (std::uint32_t i = 0; i < assignment[rep].size(); ++i)
            if (assignment[rep][i] == fold) ids.push_back(i);
        return ids;
    }
};

/// Stratified folds: within every class the instances are shuffled and then
/// dealt round-robin, so per-class fold counts differ by at most one.  The
/// whole plan is a deterministic function of (dataset, k, repeats, seed).
inline FoldPlan make_folds(const Dataset& d, std::size_t k, std::size_t repeats,
                           std::uint64_t seed) {
    if (k < 2) throw ConfigError("need at least 2 folds");
    if (repeats < 1) throw ConfigError("need at least 1 repeat");
    if (k > d.num_instances())
        throw ConfigError("more folds than instances (" + std::to_string(k) + " > " +
                          std::to_string(d.num_instances()) + ")");

    FoldPlan plan;
    plan.k = k;
    plan.repeats = repeats;
    plan.assignment.assign(repeats, std::vector<std::uint32_t>(d.num_instances(), 0));

    std::mt19937_64 rng(seed);
    for (std::size_t rep = 0; rep < repeats; ++rep) {
        for (std::size_t c = 0; c < d.num_classes(); ++c) {
            auto ids = d.class_covers[c].to_vector();
            std::shuffle(ids.begin(), ids.end(), rng);
            const auto offset = static_cast<std::size_t>(rng() % k);
            for (std::size_t j = 0; j < ids.size(); ++j)
                plan.assignment[rep][ids[j]] = static_cast<std::uint32_t>((offset + j) % k);
        }
    }
    return plan;
}

} // namespace classy
