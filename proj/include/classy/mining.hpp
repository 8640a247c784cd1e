#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "data.hpp"
#include "errors.hpp"
#include "ids.hpp"

namespace classy {

/// An itemset, kept sorted by item id.
using Pattern = std::vector<std::uint32_t>;

/// Mined candidate antecedents with their covers and supports on the
/// training data, in canonical order: by length, then lexicographically.
struct CandidateSet {
    std::vector<Pattern> patterns;
    std::vector<IdSet> covers;
    std::vector<std::uint64_t> supports;

    std::size_t size() const { return patterns.size(); }
};

/// Per-class minimum support counts for a relative threshold: the smallest
/// integer >= min_support * |class c|, and at least 1.  The tiny slack
/// keeps an exact product like 0.05 * 100 from rounding up to 6.
inline std::vector<std::uint64_t> class_support_thresholds(const Dataset& d,
                                                           double min_support) {
    if (!(min_support > 0.0) || min_support > 1.0)
        throw ConfigError("min support must be in (0, 1]");
    std::vector<std::uint64_t> t(d.num_classes());
    for (std::size_t c = 0; c < d.num_classes(); ++c) {
        double raw = min_support * static_cast<double>(d.class_count(c));
        t[c] = std::max<std::uint64_t>(
            1, static_cast<std::uint64_t>(std::ceil(raw - 1e-9)));
    }
    return t;
}

namespace detail {

inline bool frequent_in_some_class(const Dataset& d, const IdSet& cover,
                                   const std::vector<std::uint64_t>& thresholds) {
    for (std::size_t c = 0; c < d.num_classes(); ++c)
        if (cover.intersection_count(d.class_covers[c]) >= thresholds[c])
            return true;
    return false;
}

inline void mine_dfs(const Dataset& d, const std::vector<std::uint64_t>& thresholds,
                     std::size_t max_length, Pattern& prefix, const IdSet& cover,
                     std::uint32_t next_item, CandidateSet& out) {
    // `prefix` already qualified; try every one-item extension.  A pattern
    // that is infrequent in all classes cannot have a frequent extension,
    // so failing branches are cut without recursing.
    if (prefix.size() == max_length) return;
    for (std::uint32_t item = next_item; item < d.num_items(); ++item) {
        IdSet ext = cover & d.item_covers[item];
        if (!frequent_in_some_class(d, ext, thresholds)) continue;
        prefix.push_back(item);
        out.patterns.push_back(prefix);
        out.supports.push_back(ext.count());
        out.covers.push_back(ext);
        mine_dfs(d, thresholds, max_length, prefix, ext, item + 1, out);
        prefix.pop_back();
    }
}

} // namespace detail

/// Compare patterns canonically: shorter first, then lexicographically.
inline bool pattern_less(const Pattern& a, const Pattern& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
}

/// Depth-first itemset mining.  A pattern is kept when its support within
/// at least one class-conditioned slice of the data reaches that class's
/// threshold; supports and covers refer to the whole training set.
inline CandidateSet mine(const Dataset& d, double min_support, std::size_t max_length) {
    if (max_length < 1) throw ConfigError("max pattern length must be >= 1");
    const auto thresholds = class_support_thresholds(d, min_support);

    CandidateSet out;
    Pattern prefix;
    detail::mine_dfs(d, thresholds, max_length, prefix,
                     IdSet::full(d.num_instances()), 0, out);

    std::vector<std::size_t> order(out.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return pattern_less(out.patterns[a], out.patterns[b]);
    });
    CandidateSet sorted;
    sorted.patterns.reserve(out.size());
    for (std::size_t i : order) {
        sorted.patterns.push_back(std::move(out.patterns[i]));
        sorted.covers.push_back(std::move(out.covers[i]));
        sorted.supports.push_back(out.supports[i]);
    }
    return sorted;
}

/// Drop every pattern that has a strict subset with identical support: the
/// longer pattern covers exactly the same instances, so as an antecedent it
/// is dead weight.  It suffices to probe immediate subsets — if any strict
/// subset has equal support, then by monotonicity of support along the
/// subset chain some immediate subset has it too, and immediate subsets of
/// a mined pattern are always themselves mined.
inline CandidateSet remove_redundant(const CandidateSet& in) {
    std::map<Pattern, std::uint64_t> support_of;
    for (std::size_t i = 0; i < in.size(); ++i)
        support_of.emplace(in.patterns[i], in.supports[i]);

    CandidateSet out;
    for (std::size_t i = 0; i < in.size(); ++i) {
        const Pattern& p = in.patterns[i];
        bool redundant = false;
        if (p.size() > 1) {
            Pattern sub(p.size() - 1);
            for (std::size_t drop = 0; drop < p.size() && !redundant; ++drop) {
                sub.clear();
                for (std::size_t j = 0; j < p.size(); ++j)
                    if (j != drop) sub.push_back(p[j]);
                auto it = support_of.find(sub);
                if (it != support_of.end() && it->second == in.supports[i])
                    redundant = true;
            }
        }
        if (!redundant) {
            out.patterns.push_back(p);
            out.covers.push_back(in.covers[i]);
            out.supports.push_back(in.supports[i]);
        }
    }
    return out;
}

/// Human-readable form of a pattern: item names joined with '&'.
inline std::string pattern_name(const Pattern& p, const Dataset& d) {
    std::string s;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (i) s += '&';
        s += d.items[p[i]].name();
    }
    return s;
}

} // namespace classy
