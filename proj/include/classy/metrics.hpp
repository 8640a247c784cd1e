#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include "data.hpp"
#include "encoding.hpp"
#include "errors.hpp"
#include "mining.hpp"
#include "parallel.hpp"
#include "rulelist.hpp"
#include "search.hpp"

namespace classy {

inline double accuracy(const std::vector<std::uint32_t>& predicted,
                       const std::vector<std::uint32_t>& actual) {
    if (predicted.size() != actual.size() || predicted.empty())
        throw ConfigError("accuracy needs two equal, non-empty label vectors");
    std::size_t hits = 0;
    for (std::size_t i = 0; i < actual.size(); ++i)
        if (predicted[i] == actual[i]) ++hits;
    return static_cast<double>(hits) / static_cast<double>(actual.size());
}

/// Macro-averaged recall over all `num_classes` classes.  A class that
/// never occurs in `actual` contributes recall 0, it is not dropped from
/// the mean.
inline double balanced_accuracy(const std::vector<std::uint32_t>& predicted,
                                const std::vector<std::uint32_t>& actual,
                                std::size_t num_classes) {
    if (predicted.size() != actual.size() || predicted.empty())
        throw ConfigError("balanced accuracy needs two equal, non-empty label vectors");
    if (num_classes == 0) throw ConfigError("need at least one class");
    std::vector<std::uint64_t> hits(num_classes), totals(num_classes);
    for (std::size_t i = 0; i < actual.size(); ++i) {
        ++totals[actual[i]];
        if (predicted[i] == actual[i]) ++hits[actual[i]];
    }
    double sum = 0.0;
    for (std::size_t c = 0; c < num_classes; ++c)
        if (totals[c]) sum += static_cast<double>(hits[c]) / static_cast<double>(totals[c]);
    return sum / static_cast<double>(num_classes);
}

/// Binary AUC by the rank statistic: the probability that a random
/// positive scores above a random negative, ties counting one half.
/// Invariant under any strictly increasing transform of the scores.
inline double auc_binary(const std::vector<double>& scores,
                         const std::vector<char>& is_positive) {
    if (scores.size() != is_positive.size() || scores.empty())
        throw ConfigError("AUC needs matching score and label vectors");
    const std::size_t n = scores.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

    double positive_rank_sum = 0.0;
    std::size_t positives = 0;
    for (std::size_t i = 0; i < n;) {
        std::size_t j = i;
        while (j < n && scores[order[j]] == scores[order[i]]) ++j;
        const double midrank = 0.5 * static_cast<double>(i + 1 + j);  // 1-based
        for (std::size_t k = i; k < j; ++k)
            if (is_positive[order[k]]) {
                positive_rank_sum += midrank;
                ++positives;
            }
        i = j;
    }
    const std::size_t negatives = n - positives;
    if (positives == 0 || negatives == 0)
        throw ConfigError("AUC needs both a positive and a negative instance");
    return (positive_rank_sum -
            0.5 * static_cast<double>(positives) * static_cast<double>(positives + 1)) /
           (static_cast<double>(positives) * static_cast<double>(negatives));
}

/// One-vs-all AUC weighted by class prevalence.  A class without both a
/// positive and a negative instance has no AUC; it is skipped and the
/// remaining weights are renormalized.
inline double auc_weighted(const std::vector<std::vector<double>>& proba,
                           const std::vector<std::uint32_t>& labels,
                           std::size_t num_classes) {
    if (proba.size() != labels.size() || proba.empty())
        throw ConfigError("AUC needs one probability row per label");
    double weighted_sum = 0.0, weight_total = 0.0;
    std::vector<double> column(labels.size());
    std::vector<char> positive(labels.size());
    for (std::size_t c = 0; c < num_classes; ++c) {
        std::size_t pos = 0;
        for (std::size_t i = 0; i < labels.size(); ++i) {
            column[i] = proba[i][c];
            positive[i] = labels[i] == c;
            pos += positive[i];
        }
        if (pos == 0 || pos == labels.size()) continue;
        weighted_sum += static_cast<double>(pos) * auc_binary(column, positive);
        weight_total += static_cast<double>(pos);
    }
    if (weight_total == 0.0)
        throw ConfigError("AUC undefined: every class is degenerate");
    return weighted_sum / weight_total;
}

/// Everything `evaluate` measures about one model on one dataset.  The
/// code-length figures are computed against the given dataset, so on
/// training data `compression_pct` is the training compression ratio
/// in percent.
struct EvalReport {
    std::size_t n = 0;
    double accuracy = 0.0;
    double balanced_accuracy = 0.0;
    double auc = 0.0;
    std::size_t num_rules = 0;        // default rule not counted
    double avg_conditions = 0.0;      // mean antecedent length
    double model_bits = 0.0;
    double data_bits = 0.0;
    double total_bits = 0.0;
    double compression_pct = 0.0;     // 100 * L(D,R) / L(D,{default})
};

inline EvalReport evaluate(const RuleList& list, const Dataset& d,
                           RuleCountCode code = RuleCountCode::Literal) {
    if (d.num_classes() != list.num_classes())
        throw InputError("dataset classes do not match the model");
    EvalReport r;
    r.n = d.num_instances();
    const auto predicted = predict_all(list, d);
    r.accuracy = accuracy(predicted, d.labels);
    r.balanced_accuracy = balanced_accuracy(predicted, d.labels, d.num_classes());
    r.auc = auc_weighted(predict_proba_all(list, d), d.labels, d.num_classes());
    r.num_rules = list.num_rules();
    for (const auto& rule : list.rules)
        r.avg_conditions += static_cast<double>(rule.antecedent.size());
    if (r.num_rules) r.avg_conditions /= static_cast<double>(r.num_rules);
    r.model_bits = model_code_length(list, code);
    r.data_bits = data_code_length(list, d);
    r.total_bits = r.model_bits + r.data_bits;
    r.compression_pct = 100.0 * r.total_bits / baseline_code_length(d, list.epsilon, code);
    return r;
}

struct FoldOutcome {
    std::size_t rep = 0, fold = 0;
    EvalReport train, test;
};

struct CVResult {
    std::vector<FoldOutcome> folds;
};

/// Repeated stratified cross-validation: per (repeat, fold), mine and fit
/// on the training part with `config`, evaluate on both parts.  Folds are
/// independent, so they may run in parallel; outcomes land in fixed slots
/// and the result does not depend on the thread count.
inline CVResult cross_validate(const Dataset& d, const FitConfig& config,
                               std::size_t k, std::size_t repeats,
                               std::uint64_t seed) {
    const FoldPlan plan = make_folds(d, k, repeats, seed);
    CVResult result;
    result.folds.resize(repeats * k);

    FitConfig fold_config = config;
    fold_config.threads = 1;  // parallelism is across folds here
    fold_config.trace = nullptr;

    parallel_for(repeats * k, config.threads, [&](std::size_t slot) {
        const std::size_t rep = slot / k, fold = slot % k;
        const Dataset train = subset(d, plan.train_ids(rep, fold));
        const Dataset test = subset(d, plan.test_ids(rep, fold));
        const FitResult fitted = fit(train, fold_config);
        FoldOutcome& out = result.folds[slot];
        out.rep = rep;
        out.fold = fold;
        out.train = evaluate(fitted.list, train, config.rule_count_code);
        out.test = evaluate(fitted.list, test, config.rule_count_code);
    });
    return result;
}

inline double mean(const std::vector<double>& v) {
    if (v.empty()) throw ConfigError("mean of nothing");
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

/// Sample standard deviation (n-1 denominator); 0 for a single value.
inline double sample_std(const std::vector<double>& v) {
    if (v.empty()) throw ConfigError("std of nothing");
    if (v.size() == 1) return 0.0;
    const double m = mean(v);
    double ss = 0.0;
    for (double x : v) ss += (x - m) * (x - m);
    return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

template <class Pick>
std::vector<double> collect(const CVResult& cv, Pick pick) {
    std::vector<double> v;
    v.reserve(cv.folds.size());
    for (const auto& f : cv.folds) v.push_back(pick(f));
    return v;
}

} // namespace classy
