#pragma once

#include <cassert>
#include <cmath>
#include <cstdint>
#include <limits>
#include <ostream>
#include <string>
#include <vector>

#include "data.hpp"
#include "encoding.hpp"
#include "mining.hpp"
#include "parallel.hpp"
#include "rulelist.hpp"

namespace classy {

/// How candidate rules are scored during the greedy search.
///  - Absolute: the raw drop in total code length.
///  - Normalized: that drop divided by the candidate's usage, favouring
///    compact rules over ones that merely cover a lot.
///  - NormalizedDataOnly: only the data part of the gain, divided by
///    usage; the model cost still counts toward the total but not toward
///    the selection score or the stopping test.
enum class GainMode { Normalized, Absolute, NormalizedDataOnly };

inline const char* to_string(GainMode m) {
    switch (m) {
        case GainMode::Normalized: return "normalized";
        case GainMode::Absolute: return "absolute";
        case GainMode::NormalizedDataOnly: return "normalized-data-only";
    }
    return "?";
}

struct FitConfig {
    double min_support = 0.05;
    std::size_t max_length = 4;
    GainMode gain = GainMode::Normalized;
    double epsilon = 1.0;
    RuleCountCode rule_count_code = RuleCountCode::Literal;
    std::size_t max_rules = 0;      // 0 = unlimited
    unsigned threads = 1;
    std::ostream* trace = nullptr;  // per-iteration report when set
};

struct FitResult {
    RuleList list;
    double baseline_bits = 0.0;  // L(D, {default only})
    double total_bits = 0.0;     // L(D, R) of the fitted list
    std::size_t iterations = 0;
    std::size_t num_candidates = 0;
};

namespace detail {

struct CandidateScore {
    double score = -std::numeric_limits<double>::infinity();
    double data_gain = 0.0;
    double model_gain = 0.0;
    std::uint64_t usage = 0;
};

} // namespace detail

/// Greedy MDL search: starting from the default-only list, repeatedly
/// append (just before the default rule) the candidate with the best
/// positive gain, until no candidate improves the score.  Covers are
/// maintained incrementally: a candidate's live cover is what it would
/// capture if appended now, so gains need only the shrinking default
/// block and never touch earlier rules.
inline FitResult fit(const Dataset& d, const CandidateSet& candidates,
                     const FitConfig& config = {}) {
    const std::size_t C = d.num_classes();
    const double eps = config.epsilon;
    if (!(eps > 0)) throw ConfigError("epsilon must be positive");

    const LogGammaTable table(
        d.num_instances() +
        C * static_cast<std::size_t>(std::max(1.0, std::ceil(eps))) + 1);

    std::vector<std::uint64_t> default_usage(C);
    for (std::size_t c = 0; c < C; ++c) default_usage[c] = d.class_count(c);
    double default_block_bits = plugin_block_code_length(default_usage, eps, &table);

    FitResult result;
    result.num_candidates = candidates.size();
    result.baseline_bits =
        rule_count_code_length(0, config.rule_count_code) + default_block_bits;

    std::vector<IdSet> live = candidates.covers;
    std::vector<char> alive(candidates.size(), 1);
    std::vector<detail::CandidateScore> scores(candidates.size());

    RuleList list;
    list.epsilon = eps;
    list.num_items = d.num_items();
    list.class_names = d.class_names;
    list.item_descriptors = d.items;

    double fixed_block_bits = 0.0;  // data bits of the accepted rule blocks
    double model_bits = rule_count_code_length(0, config.rule_count_code);
    double total = model_bits + fixed_block_bits + default_block_bits;

    auto class_usages = [&](const IdSet& cover) {
        std::vector<std::uint64_t> u(C);
        for (std::size_t c = 0; c < C; ++c)
            u[c] = cover.intersection_count(d.class_covers[c]);
        return u;
    };

    for (;;) {
        if (config.max_rules && list.rules.size() >= config.max_rules) break;

        const double count_step =
            rule_count_code_length(list.rules.size(), config.rule_count_code) -
            rule_count_code_length(list.rules.size() + 1, config.rule_count_code);

        parallel_for(candidates.size(), config.threads, [&](std::size_t j) {
            auto& s = scores[j];
            s.score = -std::numeric_limits<double>::infinity();
            if (!alive[j]) return;
            const auto u = class_usages(live[j]);
            std::uint64_t usage = 0;
            for (auto v : u) usage += v;
            s.usage = usage;
            if (usage == 0) return;

            std::vector<std::uint64_t> rest(C);
            for (std::size_t c = 0; c < C; ++c) rest[c] = default_usage[c] - u[c];

            s.data_gain = default_block_bits -
                          plugin_block_code_length(u, eps, &table) -
                          plugin_block_code_length(rest, eps, &table);
            s.model_gain = count_step - pattern_code_length(
                                            candidates.patterns[j].size(), d.num_items());
            switch (config.gain) {
                case GainMode::Absolute:
                    s.score = s.data_gain + s.model_gain;
                    break;
                case GainMode::Normalized:
                    s.score = (s.data_gain + s.model_gain) / static_cast<double>(usage);
                    break;
                case GainMode::NormalizedDataOnly:
                    s.score = s.data_gain / static_cast<double>(usage);
                    break;
            }
        });

        std::size_t best = candidates.size();
        for (std::size_t j = 0; j < candidates.size(); ++j) {
            if (!alive[j]) continue;
            if (scores[j].usage == 0) {
                alive[j] = 0;  // empty live cover can never recover
                continue;
            }
            if (!(scores[j].score > 0)) continue;
            if (best == candidates.size() || scores[j].score > scores[best].score ||
                (scores[j].score == scores[best].score &&
                 candidates.patterns[j].size() < candidates.patterns[best].size()))
                best = j;
        }
        if (best == candidates.size()) break;

        const auto u = class_usages(live[best]);
        Rule rule;
        rule.antecedent = candidates.patterns[best];
        rule.usages = u;
        rule.theta = estimate_theta(u, eps);
        list.rules.push_back(std::move(rule));

        fixed_block_bits += plugin_block_code_length(u, eps, &table);
        for (std::size_t c = 0; c < C; ++c) default_usage[c] -= u[c];
        default_block_bits = plugin_block_code_length(default_usage, eps, &table);
        model_bits += rule_count_code_length(list.rules.size(), config.rule_count_code) -
                      rule_count_code_length(list.rules.size() - 1, config.rule_count_code) +
                      pattern_code_length(candidates.patterns[best].size(), d.num_items());

        const double new_total = model_bits + fixed_block_bits + default_block_bits;
        if (config.trace)
            *config.trace << "iter " << list.rules.size() << ": add "
                          << pattern_name(candidates.patterns[best], d)
                          << "  score=" << scores[best].score
                          << "  data_gain=" << scores[best].data_gain
                          << "  model_gain=" << scores[best].model_gain
                          << "  usage=" << scores[best].usage
                          << "  total_bits=" << new_total << "\n";
        total = new_total;

        alive[best] = 0;
        const IdSet& taken = live[best];
        for (std::size_t j = 0; j < candidates.size(); ++j)
            if (alive[j]) live[j].subtract(taken);
        ++result.iterations;
    }

    list.default_rule.antecedent.clear();
    list.default_rule.usages = default_usage;
    list.default_rule.theta = estimate_theta(default_usage, eps);

    result.list = std::move(list);
    result.total_bits = total;
    return result;
}

/// Mine, prune redundant candidates, then fit.
inline FitResult fit(const Dataset& d, const FitConfig& config = {}) {
    CandidateSet cands =
        remove_redundant(mine(d, config.min_support, config.max_length));
    return fit(d, cands, config);
}

} // namespace classy
