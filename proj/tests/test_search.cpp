#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <random>
#include <set>
#include <sstream>

#include <classy/classy.hpp>

using namespace classy;
using Catch::Matchers::WithinAbs;

namespace {

Dataset dataset_from(const std::string& csv, const std::string& label = "") {
    std::istringstream in(csv);
    return binarize(load_csv(in, label));
}

Dataset random_dataset(std::size_t n, std::size_t cols, std::size_t vals,
                       std::size_t classes, double signal, std::mt19937_64& rng) {
    // With probability `signal` the label is a function of the first
    // column, otherwise uniform noise.
    std::string csv;
    for (std::size_t c = 0; c < cols; ++c) csv += "c" + std::to_string(c) + ",";
    csv += "cls\n";
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t first = rng() % vals;
        for (std::size_t c = 0; c < cols; ++c) {
            const std::size_t v = c == 0 ? first : rng() % vals;
            csv += std::string(1, char('a' + v)) + ",";
        }
        const std::size_t label = (std::uniform_real_distribution<>(0, 1)(rng) < signal)
                                      ? first % classes
                                      : rng() % classes;
        csv += "k" + std::to_string(label) + "\n";
    }
    return dataset_from(csv);
}

/// Build a one-rule list and price it directly; used as the search oracle.
double direct_total_with_rule(const Dataset& d, const Pattern& p,
                              const FitConfig& cfg) {
    RuleList list;
    list.epsilon = cfg.epsilon;
    list.num_items = d.num_items();
    list.class_names = d.class_names;
    Rule r;
    r.antecedent = p;
    list.rules.push_back(r);
    refit_parameters(list, d);
    return total_code_length(list, d, cfg.rule_count_code);
}

} // namespace

TEST_CASE("fitting the menagerie reproduces the known four-rule list") {
    Dataset d = binarize(load_csv_file(std::string(TEST_DATA_DIR) + "/menagerie.csv", "type"));
    FitResult res = fit(d, FitConfig{});

    REQUIRE(res.list.num_rules() == 4);
    REQUIRE_THAT(res.total_bits, WithinAbs(141.465492651766, 1e-9));
    REQUIRE_THAT(res.baseline_bits, WithinAbs(256.98092465741956, 1e-9));

    std::multiset<std::string> antecedents;
    for (const auto& r : res.list.rules)
        antecedents.insert(antecedent_name(res.list, r.antecedent));
    REQUIRE(antecedents == std::multiset<std::string>{
                               "{backbone=no}", "{breathes=no}", "{feathers=yes}", "{milk=no}"});

    std::multiset<std::uint64_t> usages;
    for (const auto& r : res.list.rules) usages.insert(r.usage());
    REQUIRE(usages == std::multiset<std::uint64_t>{8, 14, 18, 20});
    REQUIRE(res.list.default_rule.usage() == 41);

    SECTION("reported bits match a from-scratch evaluation") {
        REQUIRE_THAT(total_code_length(res.list, d), WithinAbs(res.total_bits, 1e-9));
    }
}

TEST_CASE("the first accepted rule matches a brute-force oracle") {
    std::mt19937_64 rng(404);
    for (int round = 0; round < 8; ++round) {
        Dataset d = random_dataset(40 + rng() % 80, 3, 3, 2, 0.7, rng);
        FitConfig cfg;
        cfg.min_support = 0.125;
        cfg.max_length = 2;
        cfg.max_rules = 1;

        CandidateSet cands = remove_redundant(mine(d, cfg.min_support, cfg.max_length));
        const double base = baseline_code_length(d, cfg.epsilon, cfg.rule_count_code);

        SECTION("absolute gain, round " + std::to_string(round)) {
            cfg.gain = GainMode::Absolute;
            FitResult res = fit(d, cands, cfg);

            // Oracle: evaluate L(D, {r, default}) for every candidate.
            double best_gain = 0.0;
            Pattern best;
            for (std::size_t j = 0; j < cands.size(); ++j) {
                const double gain = base - direct_total_with_rule(d, cands.patterns[j], cfg);
                const bool better =
                    gain > best_gain + 1e-12 ||
                    (std::abs(gain - best_gain) <= 1e-12 && !best.empty() &&
                     cands.patterns[j].size() < best.size());
                if (better) {
                    best_gain = gain;
                    best = cands.patterns[j];
                }
            }
            if (res.list.num_rules() == 0) {
                REQUIRE(best_gain <= 1e-12);
            } else {
                REQUIRE(res.list.rules[0].antecedent == best);
                const double got =
                    base - total_code_length(res.list, d, cfg.rule_count_code);
                REQUIRE_THAT(got, WithinAbs(best_gain, 1e-9));
            }
        }

        SECTION("normalized gain, round " + std::to_string(round)) {
            cfg.gain = GainMode::Normalized;
            FitResult res = fit(d, cands, cfg);

            double best_score = 0.0;
            Pattern best;
            for (std::size_t j = 0; j < cands.size(); ++j) {
                const std::uint64_t usage = cands.covers[j].count();
                if (usage == 0) continue;
                const double score =
                    (base - direct_total_with_rule(d, cands.patterns[j], cfg)) /
                    static_cast<double>(usage);
                if (score > best_score + 1e-12 ||
                    (std::abs(score - best_score) <= 1e-12 && !best.empty() &&
                     cands.patterns[j].size() < best.size())) {
                    best_score = score;
                    best = cands.patterns[j];
                }
            }
            if (res.list.num_rules() == 0) {
                REQUIRE(best_score <= 1e-12);
            } else {
                REQUIRE(res.list.rules[0].antecedent == best);
            }
        }
    }
}

TEST_CASE("greedy prefixes are stable and totals decrease monotonically") {
    std::mt19937_64 rng(505);
    Dataset d = random_dataset(120, 4, 3, 3, 0.8, rng);
    FitConfig cfg;
    cfg.min_support = 0.125;
    cfg.max_length = 3;

    FitResult full = fit(d, cfg);
    REQUIRE(full.list.num_rules() >= 2);

    double prev_total = full.baseline_bits;
    for (std::size_t j = 1; j <= full.list.num_rules(); ++j) {
        FitConfig partial = cfg;
        partial.max_rules = j;
        FitResult res = fit(d, partial);
        REQUIRE(res.list.num_rules() == std::min<std::size_t>(j, full.list.num_rules()));
        for (std::size_t r = 0; r < res.list.num_rules(); ++r)
            REQUIRE(res.list.rules[r].antecedent == full.list.rules[r].antecedent);
        REQUIRE(res.total_bits < prev_total);
        prev_total = res.total_bits;
    }
    REQUIRE_THAT(prev_total, WithinAbs(full.total_bits, 1e-9));
}

TEST_CASE("after fitting, no candidate has positive gain left") {
    std::mt19937_64 rng(606);
    for (GainMode mode : {GainMode::Normalized, GainMode::Absolute}) {
        Dataset d = random_dataset(100, 3, 3, 2, 0.75, rng);
        FitConfig cfg;
        cfg.min_support = 0.125;
        cfg.max_length = 2;
        cfg.gain = mode;

        CandidateSet cands = remove_redundant(mine(d, cfg.min_support, cfg.max_length));
        FitResult res = fit(d, cands, cfg);

        const LogGammaTable table(d.num_instances() + d.num_classes() + 1);
        CoverPartition part = cover(res.list, d);
        const auto default_usage = block_usages(part.default_block, d);
        const double default_bits =
            plugin_block_code_length(default_usage, cfg.epsilon, &table);
        const double count_step =
            rule_count_code_length(res.list.num_rules(), cfg.rule_count_code) -
            rule_count_code_length(res.list.num_rules() + 1, cfg.rule_count_code);

        for (std::size_t j = 0; j < cands.size(); ++j) {
            IdSet live = cands.covers[j] & part.default_block;
            const auto u = block_usages(live, d);
            std::uint64_t usage = 0;
            for (auto v : u) usage += v;
            if (usage == 0) continue;
            std::vector<std::uint64_t> rest(u.size());
            for (std::size_t c = 0; c < u.size(); ++c) rest[c] = default_usage[c] - u[c];
            const double data_gain = default_bits -
                                     plugin_block_code_length(u, cfg.epsilon, &table) -
                                     plugin_block_code_length(rest, cfg.epsilon, &table);
            const double model_gain =
                count_step - pattern_code_length(cands.patterns[j].size(), d.num_items());
            const double score = mode == GainMode::Absolute
                                     ? data_gain + model_gain
                                     : (data_gain + model_gain) / static_cast<double>(usage);
            REQUIRE(score <= 1e-9);
        }
    }
}

TEST_CASE("fitted lists never compress worse than the baseline") {
    std::mt19937_64 rng(707);
    for (int round = 0; round < 6; ++round) {
        Dataset d = random_dataset(60 + rng() % 100, 3, 3, 2 + rng() % 2,
                                   0.3 + 0.1 * round, rng);
        for (GainMode mode : {GainMode::Normalized, GainMode::Absolute}) {
            FitConfig cfg;
            cfg.min_support = 0.125;
            cfg.max_length = 2;
            cfg.gain = mode;
            FitResult res = fit(d, cfg);
            REQUIRE(relative_compression(res.list, d, cfg.rule_count_code) <= 1.0 + 1e-12);
            REQUIRE(res.total_bits <= res.baseline_bits + 1e-12);
        }
    }
}

TEST_CASE("pure label noise yields an empty or near-empty list") {
    std::mt19937_64 rng(808);
    Dataset d = random_dataset(150, 6, 2, 2, 0.0, rng);
    FitResult res = fit(d, FitConfig{});
    REQUIRE(res.list.num_rules() <= 1);
}

TEST_CASE("search options") {
    std::mt19937_64 rng(909);
    Dataset d = random_dataset(120, 4, 3, 3, 0.8, rng);

    SECTION("thread count never changes the outcome") {
        FitConfig seq;
        seq.min_support = 0.125;
        FitConfig par = seq;
        par.threads = 4;
        FitResult a = fit(d, seq);
        FitResult b = fit(d, par);
        REQUIRE(a.list.num_rules() == b.list.num_rules());
        REQUIRE(a.total_bits == b.total_bits);  // bit-identical
        for (std::size_t r = 0; r < a.list.num_rules(); ++r)
            REQUIRE(a.list.rules[r].antecedent == b.list.rules[r].antecedent);
    }

    SECTION("trace reports one line per accepted rule") {
        std::ostringstream trace;
        FitConfig cfg;
        cfg.min_support = 0.125;
        cfg.trace = &trace;
        FitResult res = fit(d, cfg);
        std::size_t lines = 0;
        std::istringstream in(trace.str());
        std::string line;
        while (std::getline(in, line)) {
            ++lines;
            REQUIRE(line.rfind("iter ", 0) == 0);
            REQUIRE(line.find("total_bits=") != std::string::npos);
        }
        REQUIRE(lines == res.list.num_rules());
    }

    SECTION("an empty candidate set leaves only the default rule") {
        CandidateSet none;
        FitResult res = fit(d, none, FitConfig{});
        REQUIRE(res.list.num_rules() == 0);
        REQUIRE(res.total_bits == res.baseline_bits);
        REQUIRE(res.list.default_rule.usage() == d.num_instances());
    }

    SECTION("epsilon flows through to the estimated distributions") {
        FitConfig cfg;
        cfg.min_support = 0.125;
        cfg.epsilon = 3.0;
        FitResult res = fit(d, cfg);
        const auto& dr = res.list.default_rule;
        const double expect = (static_cast<double>(dr.usages[0]) + 3.0) /
                              (static_cast<double>(dr.usage()) + 3.0 * 3.0);
        REQUIRE(dr.theta[0] == expect);
        REQUIRE(res.list.epsilon == 3.0);
    }

    SECTION("invalid epsilon is rejected") {
        FitConfig cfg;
        cfg.epsilon = 0.0;
        REQUIRE_THROWS_AS(fit(d, cfg), ConfigError);
    }
}
