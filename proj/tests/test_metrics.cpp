#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <sstream>

#include <classy/classy.hpp>

using namespace classy;
using Catch::Matchers::WithinAbs;

namespace {

Dataset dataset_from(const std::string& csv, const std::string& label = "") {
    std::istringstream in(csv);
    return binarize(load_csv(in, label));
}

// O(P*N) reference: compare every positive/negative pair directly.
double pairwise_auc(const std::vector<double>& scores, const std::vector<char>& pos) {
    double wins = 0.0;
    std::size_t p = 0, n = 0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        if (!pos[i]) continue;
        ++p;
        for (std::size_t j = 0; j < scores.size(); ++j) {
            if (pos[j]) continue;
            if (scores[i] > scores[j]) wins += 1.0;
            else if (scores[i] == scores[j]) wins += 0.5;
        }
    }
    for (std::size_t j = 0; j < scores.size(); ++j) n += !pos[j];
    return wins / (static_cast<double>(p) * static_cast<double>(n));
}

} // namespace

TEST_CASE("accuracy") {
    std::vector<std::uint32_t> truth(100, 0), pred(100, 0);
    for (int i = 0; i < 13; ++i) pred[i] = 1;  // 13 mistakes
    REQUIRE(accuracy(pred, truth) == 0.87);
    REQUIRE_THROWS_AS(accuracy({}, {}), ConfigError);
    REQUIRE_THROWS_AS(accuracy({1}, {1, 2}), ConfigError);
}

TEST_CASE("balanced accuracy averages per-class recall") {
    // Class 0: 90 instances, all right.  Class 1: 10 instances, 5 right.
    std::vector<std::uint32_t> truth, pred;
    for (int i = 0; i < 90; ++i) { truth.push_back(0); pred.push_back(0); }
    for (int i = 0; i < 10; ++i) { truth.push_back(1); pred.push_back(i < 5 ? 1 : 0); }
    REQUIRE(balanced_accuracy(pred, truth, 2) == 0.75);
    REQUIRE(accuracy(pred, truth) == 0.95);

    SECTION("a class that never occurs still counts in the mean") {
        REQUIRE_THAT(balanced_accuracy(pred, truth, 3), WithinAbs(1.5 / 3.0, 1e-12));
    }
}

TEST_CASE("binary AUC by midranks") {
    SECTION("hand-checked case") {
        REQUIRE(auc_binary({0.9, 0.8, 0.3, 0.2}, {1, 0, 1, 0}) == 0.75);
    }

    SECTION("all-equal scores give one half") {
        REQUIRE(auc_binary({0.5, 0.5, 0.5, 0.5}, {1, 0, 1, 0}) == 0.5);
    }

    SECTION("perfect and inverted rankings") {
        REQUIRE(auc_binary({0.9, 0.8, 0.2, 0.1}, {1, 1, 0, 0}) == 1.0);
        REQUIRE(auc_binary({0.1, 0.2, 0.8, 0.9}, {1, 1, 0, 0}) == 0.0);
    }

    SECTION("agrees with the pairwise reference, ties included") {
        std::mt19937_64 rng(2718);
        for (int round = 0; round < 100; ++round) {
            const std::size_t n = 5 + rng() % 45;
            std::vector<double> scores(n);
            std::vector<char> pos(n);
            bool has_pos = false, has_neg = false;
            for (std::size_t i = 0; i < n; ++i) {
                scores[i] = static_cast<double>(rng() % 7) / 6.0;  // force ties
                pos[i] = rng() % 2;
                (pos[i] ? has_pos : has_neg) = true;
            }
            if (!has_pos || !has_neg) continue;
            REQUIRE_THAT(auc_binary(scores, pos),
                         WithinAbs(pairwise_auc(scores, pos), 1e-12));
        }
    }

    SECTION("invariant under strictly increasing transforms") {
        std::mt19937_64 rng(3141);
        std::vector<double> scores(30);
        std::vector<char> pos(30);
        for (std::size_t i = 0; i < 30; ++i) {
            scores[i] = static_cast<double>(rng() % 9) / 8.0;
            pos[i] = i % 3 == 0;
        }
        const double base = auc_binary(scores, pos);
        std::vector<double> exp_scores = scores, affine = scores;
        for (auto& s : exp_scores) s = std::exp(s);
        for (auto& s : affine) s = 2.0 * s + 3.0;
        REQUIRE(auc_binary(exp_scores, pos) == base);
        REQUIRE(auc_binary(affine, pos) == base);
    }

    SECTION("degenerate label sets are rejected") {
        REQUIRE_THROWS_AS(auc_binary({0.1, 0.2}, {1, 1}), ConfigError);
        REQUIRE_THROWS_AS(auc_binary({0.1, 0.2}, {0, 0}), ConfigError);
        REQUIRE_THROWS_AS(auc_binary({}, {}), ConfigError);
    }
}

TEST_CASE("weighted one-vs-all AUC") {
    SECTION("on two classes it collapses to the binary AUC") {
        std::mt19937_64 rng(1618);
        for (int round = 0; round < 20; ++round) {
            const std::size_t n = 10 + rng() % 30;
            std::vector<std::vector<double>> proba(n, std::vector<double>(2));
            std::vector<std::uint32_t> labels(n);
            std::vector<double> pos_scores(n);
            std::vector<char> pos(n);
            bool both = false;
            for (std::size_t i = 0; i < n; ++i) {
                const double p = static_cast<double>(rng() % 11) / 10.0;
                proba[i] = {1.0 - p, p};
                labels[i] = rng() % 2;
                pos_scores[i] = p;
                pos[i] = labels[i] == 1;
                if (i && labels[i] != labels[0]) both = true;
            }
            if (!both) continue;
            REQUIRE_THAT(auc_weighted(proba, labels, 2),
                         WithinAbs(auc_binary(pos_scores, pos), 1e-12));
        }
    }

    SECTION("an absent class is skipped and the weights renormalize") {
        // Three classes declared, class 2 never occurs.
        std::vector<std::vector<double>> proba = {
            {0.7, 0.2, 0.1}, {0.6, 0.3, 0.1}, {0.2, 0.7, 0.1},
            {0.3, 0.6, 0.1}, {0.5, 0.4, 0.0},
        };
        std::vector<std::uint32_t> labels = {0, 0, 1, 1, 0};
        std::vector<double> col0, col1;
        std::vector<char> is0, is1;
        for (std::size_t i = 0; i < proba.size(); ++i) {
            col0.push_back(proba[i][0]);
            col1.push_back(proba[i][1]);
            is0.push_back(labels[i] == 0);
            is1.push_back(labels[i] == 1);
        }
        const double expect =
            (3.0 * auc_binary(col0, is0) + 2.0 * auc_binary(col1, is1)) / 5.0;
        REQUIRE_THAT(auc_weighted(proba, labels, 3), WithinAbs(expect, 1e-12));
    }

    SECTION("everything degenerate is an error") {
        std::vector<std::vector<double>> proba = {{1.0}, {1.0}};
        std::vector<std::uint32_t> labels = {0, 0};
        REQUIRE_THROWS_AS(auc_weighted(proba, labels, 1), ConfigError);
    }
}

TEST_CASE("evaluate summarizes a model against a dataset") {
    Dataset d = binarize(load_csv_file(std::string(TEST_DATA_DIR) + "/menagerie.csv", "type"));
    FitResult res = fit(d, FitConfig{});
    EvalReport rep = evaluate(res.list, d);

    REQUIRE(rep.n == 101);
    REQUIRE(rep.num_rules == 4);
    REQUIRE(rep.avg_conditions == 1.0);
    REQUIRE_THAT(rep.accuracy, WithinAbs(88.0 / 101.0, 1e-12));
    REQUIRE(rep.auc > 0.95);
    REQUIRE(rep.balanced_accuracy > 0.70);
    REQUIRE_THAT(rep.total_bits, WithinAbs(141.465492651766, 1e-9));
    REQUIRE_THAT(rep.compression_pct,
                 WithinAbs(100.0 * 141.465492651766 / 256.98092465741956, 1e-6));

    SECTION("class mismatch is caught") {
        Dataset other = dataset_from("a,cls\n1,x\n2,y\n");
        REQUIRE_THROWS_AS(evaluate(res.list, other), InputError);
    }
}

TEST_CASE("cross-validation") {
    Dataset d = binarize(load_csv_file(std::string(TEST_DATA_DIR) + "/menagerie.csv", "type"));
    FitConfig cfg;

    CVResult cv = cross_validate(d, cfg, 5, 2, 7);
    REQUIRE(cv.folds.size() == 10);

    SECTION("every fold carries train and test reports") {
        std::size_t total_test = 0;
        for (const auto& f : cv.folds) {
            REQUIRE(f.train.n + f.test.n == d.num_instances());
            REQUIRE(f.test.accuracy >= 0.0);
            REQUIRE(f.test.accuracy <= 1.0);
            if (f.rep == 0) total_test += f.test.n;
        }
        REQUIRE(total_test == d.num_instances());
    }

    SECTION("aggregates sit in a sane range") {
        const double acc = mean(collect(cv, [](const FoldOutcome& f) { return f.test.accuracy; }));
        REQUIRE(acc > 0.6);
        REQUIRE(acc <= 1.0);
        const double train_pct =
            mean(collect(cv, [](const FoldOutcome& f) { return f.train.compression_pct; }));
        REQUIRE(train_pct < 100.0);
    }

    SECTION("deterministic for a seed, regardless of threads") {
        CVResult again = cross_validate(d, cfg, 5, 2, 7);
        FitConfig par = cfg;
        par.threads = 4;
        CVResult parallel = cross_validate(d, par, 5, 2, 7);
        for (std::size_t i = 0; i < cv.folds.size(); ++i) {
            REQUIRE(cv.folds[i].test.accuracy == again.folds[i].test.accuracy);
            REQUIRE(cv.folds[i].test.total_bits == again.folds[i].test.total_bits);
            REQUIRE(cv.folds[i].test.accuracy == parallel.folds[i].test.accuracy);
            REQUIRE(cv.folds[i].train.total_bits == parallel.folds[i].train.total_bits);
        }
    }
}

TEST_CASE("mean and sample standard deviation") {
    REQUIRE(mean({1.0, 2.0, 3.0, 4.0}) == 2.5);
    REQUIRE_THAT(sample_std({1.0, 2.0, 3.0, 4.0}),
                 WithinAbs(std::sqrt(5.0 / 3.0), 1e-12));
    REQUIRE(sample_std({42.0}) == 0.0);
    REQUIRE_THROWS_AS(mean({}), ConfigError);
}
