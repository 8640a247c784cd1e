#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "data.hpp"
#include "errors.hpp"
#include "rulelist.hpp"

namespace classy {

/// Normalizer of the universal code for the integers.
inline constexpr double k_universal = 2.865064;

/// log*(x): iterated base-2 logarithm, summing the strictly positive terms.
inline double log_star(double x) {
    double sum = 0.0;
    double t = std::log2(x);
    while (t > 0.0) {
        sum += t;
        t = std::log2(t);
    }
    return sum;
}

/// Code length of a positive integer under the universal prior:
/// L_N(n) = log2(k0) + log*(n).  Defined for n >= 1 only.
inline double universal_code_length(std::uint64_t n) {
    if (n < 1) throw ConfigError("universal code is defined for n >= 1");
    return std::log2(k_universal) + log_star(static_cast<double>(n));
}

/// Cumulative table of log2(k!) so block code lengths over integer counts
/// reduce to three lookups.  Built once per dataset and shared.
class LogGammaTable {
public:
    explicit LogGammaTable(std::size_t max_n) : cum_(max_n + 1, 0.0) {
        for (std::size_t k = 1; k <= max_n; ++k)
            cum_[k] = cum_[k - 1] + std::log2(static_cast<double>(k));
    }

    double log2_factorial(std::uint64_t k) const { return cum_[k]; }

    /// log2(Gamma(k)) for integer k >= 1.
    double log2_gamma(std::uint64_t k) const { return cum_[k - 1]; }

    std::uint64_t max_n() const { return cum_.size() - 1; }

private:
    std::vector<double> cum_;
};

namespace detail {

inline constexpr double ln2 = 0.6931471805599453;

inline double log2_gamma_direct(double x) { return std::lgamma(x) / ln2; }

} // namespace detail

/// Code length in bits of one cover block under the prequential plug-in
/// code with smoothing `epsilon`, given the block's per-class usage counts.
/// Depends only on the counts, not on the order the instances arrive in.
/// When `epsilon` is a positive integer and `table` spans the needed range,
/// the length comes from exact factorial lookups; otherwise from lgamma.
inline double plugin_block_code_length(const std::vector<std::uint64_t>& usages,
                                       double epsilon = 1.0,
                                       const LogGammaTable* table = nullptr) {
    if (usages.empty()) throw ConfigError("block needs at least one class");
    if (!(epsilon > 0)) throw ConfigError("epsilon must be positive");
    const std::size_t num_classes = usages.size();
    std::uint64_t total = 0;
    for (auto u : usages) total += u;
    if (total == 0) return 0.0;

    const bool integer_eps = epsilon == std::floor(epsilon);
    if (integer_eps && table) {
        const auto e = static_cast<std::uint64_t>(epsilon);
        const std::uint64_t ce = e * num_classes;
        if (total + ce - 1 <= table->max_n()) {
            double bits = table->log2_gamma(total + ce) - table->log2_gamma(ce);
            for (auto u : usages)
                bits -= table->log2_gamma(u + e) - table->log2_gamma(e);
            return bits;
        }
    }
    const double ce = epsilon * static_cast<double>(num_classes);
    double bits = detail::log2_gamma_direct(static_cast<double>(total) + ce) -
                  detail::log2_gamma_direct(ce);
    for (auto u : usages)
        bits -= detail::log2_gamma_direct(static_cast<double>(u) + epsilon) -
                detail::log2_gamma_direct(epsilon);
    return bits;
}

/// Code length of one antecedent of `length` items drawn from an item
/// space of size `num_items`: its length under the universal code plus
/// a uniform choice per item.
inline double pattern_code_length(std::size_t length, std::size_t num_items) {
    if (length < 1) throw ConfigError("antecedents have at least one item");
    if (num_items < 1) throw ConfigError("empty item space");
    return universal_code_length(length) +
           static_cast<double>(length) * std::log2(static_cast<double>(num_items));
}

/// How the number of rules is mapped into the universal code.  The
/// literal convention encodes |R| itself (reading |R| = 0 as 1, where the
/// code is undefined); the shifted one encodes |R| + 1 so the empty list
/// needs no special case.  Golden values use the literal convention.
enum class RuleCountCode { Literal, Shifted };

inline double rule_count_code_length(std::size_t num_rules, RuleCountCode code) {
    if (code == RuleCountCode::Shifted) return universal_code_length(num_rules + 1);
    return universal_code_length(num_rules < 1 ? 1 : num_rules);
}

/// L(R): rule count plus every antecedent, over an item space of
/// `num_items`.  The default rule is structural and costs nothing.
inline double model_code_length(const std::vector<std::size_t>& antecedent_lengths,
                                std::size_t num_items,
                                RuleCountCode code = RuleCountCode::Literal) {
    double bits = rule_count_code_length(antecedent_lengths.size(), code);
    for (auto len : antecedent_lengths) bits += pattern_code_length(len, num_items);
    return bits;
}

inline double model_code_length(const RuleList& list,
                                RuleCountCode code = RuleCountCode::Literal) {
    std::vector<std::size_t> lengths;
    lengths.reserve(list.rules.size());
    for (const auto& r : list.rules) lengths.push_back(r.antecedent.size());
    return model_code_length(lengths, list.num_items, code);
}

/// L(Y|X,R): sum of plug-in block code lengths over the cover partition
/// the list induces on `d`, including the default block.
inline double data_code_length(const RuleList& list, const Dataset& d,
                               const LogGammaTable* table = nullptr) {
    LogGammaTable local(0);
    if (!table) {
        local = LogGammaTable(d.num_instances() +
                              d.num_classes() * static_cast<std::size_t>(
                                  std::max(1.0, std::ceil(list.epsilon))));
        table = &local;
    }
    CoverPartition part = cover(list, d);
    double bits = 0.0;
    for (const auto& block : part.rule_blocks)
        bits += plugin_block_code_length(block_usages(block, d), list.epsilon, table);
    bits += plugin_block_code_length(block_usages(part.default_block, d),
                                     list.epsilon, table);
    return bits;
}

/// L(D, R) = L(R) + L(Y|X, R).
inline double total_code_length(const RuleList& list, const Dataset& d,
                                RuleCountCode code = RuleCountCode::Literal,
                                const LogGammaTable* table = nullptr) {
    return model_code_length(list, code) + data_code_length(list, d, table);
}

/// Code length of the baseline list that has only a default rule.
inline double baseline_code_length(const Dataset& d, double epsilon = 1.0,
                                   RuleCountCode code = RuleCountCode::Literal,
                                   const LogGammaTable* table = nullptr) {
    RuleList empty;
    empty.epsilon = epsilon;
    empty.num_items = std::max<std::size_t>(1, d.num_items());
    empty.class_names = d.class_names;
    return rule_count_code_length(0, code) + data_code_length(empty, d, table);
}

/// Relative compression L(D,R) / L(D,{default}); 1.0 means no better than
/// coding the labels with a single distribution, lower is better.
inline double relative_compression(const RuleList& list, const Dataset& d,
                                   RuleCountCode code = RuleCountCode::Literal,
                                   const LogGammaTable* table = nullptr) {
    return total_code_length(list, d, code, table) /
           baseline_code_length(d, list.epsilon, code, table);
}

} // namespace classy
