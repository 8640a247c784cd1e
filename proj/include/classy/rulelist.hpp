#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <iomanip>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "data.hpp"
#include "errors.hpp"
#include "ids.hpp"
#include "mining.hpp"

namespace classy {

/// Smoothed class distribution for a block of `sum(usages)` instances:
/// theta_c = (usages_c + eps) / (total + eps * num_classes).
inline std::vector<double> estimate_theta(const std::vector<std::uint64_t>& usages,
                                          double epsilon) {
    std::uint64_t total = 0;
    for (auto u : usages) total += u;
    const double denom = static_cast<double>(total) +
                         epsilon * static_cast<double>(usages.size());
    std::vector<double> theta(usages.size());
    for (std::size_t c = 0; c < usages.size(); ++c)
        theta[c] = (static_cast<double>(usages[c]) + epsilon) / denom;
    return theta;
}

/// One rule: an antecedent pattern plus the class distribution estimated
/// from the instances the rule captured during training.
struct Rule {
    Pattern antecedent;                  // sorted item ids; empty for default
    std::vector<std::uint64_t> usages;   // per class, on training data
    std::vector<double> theta;

    std::uint64_t usage() const {
        std::uint64_t t = 0;
        for (auto u : usages) t += u;
        return t;
    }
};

/// An ordered probabilistic rule list.  The default rule always exists and
/// has an empty antecedent; `rules` holds the others in firing order.
struct RuleList {
    std::vector<Rule> rules;
    Rule default_rule;
    double epsilon = 1.0;
    std::size_t num_items = 0;                   // size of the item space
    std::vector<std::string> class_names;
    std::vector<ItemDescriptor> item_descriptors;

    std::size_t num_classes() const { return class_names.size(); }
    std::size_t num_rules() const { return rules.size(); } // default excluded
};

/// The partition of a dataset induced by first-match semantics: block i
/// holds the instances captured by rule i and by nothing earlier; whatever
/// survives every rule lands in the default block.
struct CoverPartition {
    std::vector<IdSet> rule_blocks;
    IdSet default_block;
};

inline IdSet pattern_cover(const Pattern& p, const Dataset& d) {
    IdSet cov = IdSet::full(d.num_instances());
    for (auto item : p) cov &= d.item_covers[item];
    return cov;
}

inline CoverPartition cover(const RuleList& list, const Dataset& d) {
    CoverPartition part;
    IdSet remaining = IdSet::full(d.num_instances());
    part.rule_blocks.reserve(list.rules.size());
    for (const auto& rule : list.rules) {
        IdSet block = pattern_cover(rule.antecedent, d);
        block &= remaining;
        remaining.subtract(block);
        part.rule_blocks.push_back(std::move(block));
    }
    part.default_block = std::move(remaining);
    return part;
}

/// Per-class counts of one cover block.
inline std::vector<std::uint64_t> block_usages(const IdSet& block, const Dataset& d) {
    std::vector<std::uint64_t> u(d.num_classes());
    for (std::size_t c = 0; c < d.num_classes(); ++c)
        u[c] = block.intersection_count(d.class_covers[c]);
    return u;
}

/// Recompute all usages and thetas of `list` against `d` (e.g. after
/// building a list by hand or loading one for further training).
inline void refit_parameters(RuleList& list, const Dataset& d) {
    CoverPartition part = cover(list, d);
    for (std::size_t i = 0; i < list.rules.size(); ++i) {
        list.rules[i].usages = block_usages(part.rule_blocks[i], d);
        list.rules[i].theta = estimate_theta(list.rules[i].usages, list.epsilon);
    }
    list.default_rule.usages = block_usages(part.default_block, d);
    list.default_rule.theta = estimate_theta(list.default_rule.usages, list.epsilon);
}

namespace detail {

/// antecedent ⊆ instance, both sorted ascending.
inline bool antecedent_matches(const Pattern& antecedent,
                               const std::vector<std::uint32_t>& instance_items) {
    return std::includes(instance_items.begin(), instance_items.end(),
                         antecedent.begin(), antecedent.end());
}

} // namespace detail

/// First rule whose antecedent is satisfied; the default rule matches all.
inline const Rule& firing_rule(const RuleList& list,
                               const std::vector<std::uint32_t>& instance_items) {
    for (const auto& rule : list.rules)
        if (detail::antecedent_matches(rule.antecedent, instance_items)) return rule;
    return list.default_rule;
}

/// Class distribution for an instance given as sorted active item ids.
inline const std::vector<double>& predict_proba(
    const RuleList& list, const std::vector<std::uint32_t>& instance_items) {
    return firing_rule(list, instance_items).theta;
}

/// Class distribution for an instance given as a dense item indicator
/// vector; its length must match the item space the list was trained on.
inline const std::vector<double>& predict_proba(const RuleList& list,
                                                const std::vector<bool>& instance) {
    if (instance.size() != list.num_items)
        throw InputError("instance has " + std::to_string(instance.size()) +
                         " items, model expects " + std::to_string(list.num_items));
    std::vector<std::uint32_t> items;
    for (std::uint32_t i = 0; i < instance.size(); ++i)
        if (instance[i]) items.push_back(i);
    return predict_proba(list, items);
}

inline std::size_t argmax_class(const std::vector<double>& theta) {
    return static_cast<std::size_t>(
        std::max_element(theta.begin(), theta.end()) - theta.begin());
}

inline std::size_t predict(const RuleList& list,
                           const std::vector<std::uint32_t>& instance_items) {
    return argmax_class(predict_proba(list, instance_items));
}

/// Hard predictions for every instance of a (binarized) dataset.
inline std::vector<std::uint32_t> predict_all(const RuleList& list, const Dataset& d) {
    std::vector<std::uint32_t> pred(d.num_instances());
    for (std::size_t i = 0; i < d.num_instances(); ++i)
        pred[i] = static_cast<std::uint32_t>(predict(list, d.instance_items[i]));
    return pred;
}

/// Soft predictions for every instance of a dataset.
inline std::vector<std::vector<double>> predict_proba_all(const RuleList& list,
                                                          const Dataset& d) {
    std::vector<std::vector<double>> out(d.num_instances());
    for (std::size_t i = 0; i < d.num_instances(); ++i)
        out[i] = predict_proba(list, d.instance_items[i]);
    return out;
}

// ---------------------------------------------------------------------------
// Serialization.
//
// Text form is for people: an IF / ELSE IF / ELSE cascade showing, per rule,
// the empirical class fractions of its training block (entries below 0.01
// are suppressed) together with the per-class usages.
//
// Machine form is a line-based document that survives a round trip exactly;
// thetas are re-derived from usages and epsilon on load.
// ---------------------------------------------------------------------------

inline std::string antecedent_name(const RuleList& list, const Pattern& p) {
    std::string s = "{";
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (i) s += " & ";
        s += list.item_descriptors.empty() ? "item" + std::to_string(p[i])
                                           : list.item_descriptors[p[i]].name();
    }
    return s + "}";
}

inline std::string serialize_text(const RuleList& list) {
    std::ostringstream out;
    out << std::fixed << std::setprecision(2);

    auto emit_block = [&](const Rule& rule) {
        const double total = static_cast<double>(rule.usage());
        if (total == 0) {
            out << "    (unused)\n";
            return;
        }
        std::vector<std::size_t> order(rule.usages.size());
        for (std::size_t c = 0; c < order.size(); ++c) order[c] = c;
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return rule.usages[a] > rule.usages[b];
        });
        for (std::size_t c : order) {
            const double p = static_cast<double>(rule.usages[c]) / total;
            if (p < 0.01) continue;
            out << "    Pr(" << list.class_names[c] << ") = " << p
                << "   [usage " << rule.usages[c] << "]\n";
        }
    };

    for (std::size_t i = 0; i < list.rules.size(); ++i) {
        out << (i == 0 ? "IF      " : "ELSE IF ")
            << antecedent_name(list, list.rules[i].antecedent) << " THEN\n";
        emit_block(list.rules[i]);
    }
    out << (list.rules.empty() ? "ALWAYS\n" : "ELSE\n");
    emit_block(list.default_rule);
    return out.str();
}

inline void serialize_machine(const RuleList& list, std::ostream& out) {
    out << "classy-rulelist v1\n";
    out << "epsilon " << std::setprecision(17) << list.epsilon << "\n";
    out << "classes " << list.class_names.size() << "\n";
    for (const auto& name : list.class_names) out << "class " << name << "\n";
    out << "items " << list.num_items << "\n";
    for (const auto& it : list.item_descriptors)
        out << "item " << it.column << "\t" << it.column_name << "\t" << it.value << "\n";

    auto emit_rule = [&](const Rule& r, bool is_default) {
        if (is_default) {
            out << "default :";
        } else {
            out << "rule";
            for (auto item : r.antecedent) out << " " << item;
            out << " :";
        }
        for (auto u : r.usages) out << " " << u;
        out << "\ntheta";
        out << std::setprecision(12);
        for (auto t : r.theta) out << " " << t;
        out << "\n";
    };

    out << "rules " << list.rules.size() << "\n";
    for (const auto& r : list.rules) emit_rule(r, false);
    emit_rule(list.default_rule, true);
    out << "end\n";
}

inline std::string serialize_machine(const RuleList& list) {
    std::ostringstream out;
    serialize_machine(list, out);
    return out.str();
}

namespace detail {

inline std::string next_line(std::istream& in, const char* what) {
    std::string line;
    if (!std::getline(in, line))
        throw ParseError(std::string("model document ended early, expected ") + what);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return line;
}

inline std::uint64_t parse_count(const std::string& line, const std::string& key) {
    if (line.size() <= key.size() || line.compare(0, key.size(), key) != 0 ||
        line[key.size()] != ' ')
        throw ParseError("expected '" + key + " <n>', got '" + line + "'");
    return std::stoull(line.substr(key.size() + 1));
}

} // namespace detail

inline RuleList parse_machine(std::istream& in) {
    RuleList list;
    if (detail::next_line(in, "header") != "classy-rulelist v1")
        throw ParseError("not a classy rule-list document");

    {
        std::istringstream ls(detail::next_line(in, "epsilon"));
        std::string kw;
        if (!(ls >> kw >> list.epsilon) || kw != "epsilon" || !(list.epsilon > 0))
            throw ParseError("bad epsilon line");
    }

    const auto n_classes = detail::parse_count(detail::next_line(in, "classes"), "classes");
    if (n_classes < 1) throw ParseError("need at least one class");
    for (std::uint64_t c = 0; c < n_classes; ++c) {
        std::string line = detail::next_line(in, "class name");
        if (line.compare(0, 6, "class ") != 0) throw ParseError("expected 'class <name>'");
        list.class_names.push_back(line.substr(6));
    }

    list.num_items = detail::parse_count(detail::next_line(in, "items"), "items");
    for (std::uint64_t i = 0; i < list.num_items; ++i) {
        std::string line = detail::next_line(in, "item descriptor");
        if (line.compare(0, 5, "item ") != 0) throw ParseError("expected 'item ...'");
        std::string rest = line.substr(5);
        auto t1 = rest.find('\t');
        auto t2 = rest.find('\t', t1 == std::string::npos ? t1 : t1 + 1);
        if (t1 == std::string::npos || t2 == std::string::npos)
            throw ParseError("item descriptor needs column, name and value");
        ItemDescriptor it;
        it.column = static_cast<std::uint32_t>(std::stoul(rest.substr(0, t1)));
        it.column_name = rest.substr(t1 + 1, t2 - t1 - 1);
        it.value = rest.substr(t2 + 1);
        list.item_descriptors.push_back(std::move(it));
    }

    auto read_rule = [&](const std::string& line, bool is_default) {
        auto colon = line.find(" :");
        if (colon == std::string::npos) throw ParseError("rule line missing ':'");
        Rule r;
        std::istringstream head(line.substr(is_default ? 7 : 4, colon - (is_default ? 7 : 4)));
        std::uint32_t item;
        while (head >> item) {
            if (item >= list.num_items) throw ParseError("item id out of range");
            r.antecedent.push_back(item);
        }
        if (!is_default) {
            if (r.antecedent.empty()) throw ParseError("rule with empty antecedent");
            if (!std::is_sorted(r.antecedent.begin(), r.antecedent.end()) ||
                std::adjacent_find(r.antecedent.begin(), r.antecedent.end()) !=
                    r.antecedent.end())
                throw ParseError("antecedent items must be sorted and distinct");
        }
        std::istringstream tail(line.substr(colon + 2));
        std::uint64_t u;
        while (tail >> u) r.usages.push_back(u);
        if (r.usages.size() != list.class_names.size())
            throw ParseError("rule has " + std::to_string(r.usages.size()) +
                             " usages, expected " + std::to_string(list.class_names.size()));

        std::istringstream ths(detail::next_line(in, "theta"));
        std::string kw;
        ths >> kw;
        if (kw != "theta") throw ParseError("expected theta line");
        std::size_t n_theta = 0;
        double v;
        while (ths >> v) ++n_theta;
        if (n_theta != list.class_names.size())
            throw ParseError("theta arity mismatch");

        r.theta = estimate_theta(r.usages, list.epsilon);
        return r;
    };

    const auto n_rules = detail::parse_count(detail::next_line(in, "rules"), "rules");
    for (std::uint64_t i = 0; i < n_rules; ++i) {
        std::string line = detail::next_line(in, "rule");
        if (line.compare(0, 5, "rule ") != 0) throw ParseError("expected 'rule ...'");
        list.rules.push_back(read_rule(line, false));
    }
    std::string line = detail::next_line(in, "default rule");
    if (line.compare(0, 8, "default ") != 0)
        throw ParseError("model document has no default rule");
    list.default_rule = read_rule(line, true);
    if (detail::next_line(in, "end") != "end") throw ParseError("missing 'end'");
    return list;
}

inline RuleList parse_machine(const std::string& text) {
    std::istringstream in(text);
    return parse_machine(in);
}

/// Activate, for one raw CSV row, the items of a model's schema.  Every
/// attribute the model knows must exist as a column; values unseen at
/// training time simply activate nothing for that column.
class InstanceBinder {
public:
    InstanceBinder(const RuleList& list, const RawTable& table) : list_(list) {
        std::map<std::string, std::size_t> col_index;
        for (std::size_t j = 0; j < table.columns.size(); ++j)
            col_index.emplace(table.columns[j], j);
        col_of_item_.reserve(list.item_descriptors.size());
        for (const auto& it : list.item_descriptors) {
            auto found = col_index.find(it.column_name);
            if (found == col_index.end())
                throw InputError("input is missing attribute '" + it.column_name + "'");
            col_of_item_.push_back(found->second);
        }
    }

    std::vector<std::uint32_t> bind(const std::vector<std::string>& row) const {
        std::vector<std::uint32_t> items;
        for (std::uint32_t i = 0; i < list_.item_descriptors.size(); ++i)
            if (row[col_of_item_[i]] == list_.item_descriptors[i].value)
                items.push_back(i);
        return items;
    }

private:
    const RuleList& list_;
    std::vector<std::size_t> col_of_item_;
};

/// Rebuild a labeled table as a Dataset in the exact schema of a trained
/// model, so code lengths and predictions are comparable.  Labels must all
/// be classes the model knows.
inline Dataset bind_dataset(const RuleList& list, const RawTable& table) {
    InstanceBinder binder(list, table);
    std::map<std::string, std::uint32_t> class_id;
    for (std::uint32_t c = 0; c < list.class_names.size(); ++c)
        class_id.emplace(list.class_names[c], c);

    Dataset d;
    d.items = list.item_descriptors;
    d.class_names = list.class_names;
    const std::size_t n = table.rows.size();
    d.item_covers.assign(list.num_items, IdSet(n));
    d.class_covers.assign(list.class_names.size(), IdSet(n));
    d.labels.resize(n);
    d.instance_items.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::string& label = table.rows[i][table.label_col];
        auto it = class_id.find(label);
        if (it == class_id.end())
            throw InputError("class '" + label + "' was not seen in training");
        d.labels[i] = it->second;
        d.class_covers[it->second].set(i);
        d.instance_items[i] = binder.bind(table.rows[i]);
        for (auto item : d.instance_items[i]) d.item_covers[item].set(i);
    }
    return d;
}

} // namespace classy
