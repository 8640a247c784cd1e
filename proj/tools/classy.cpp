// Command-line front end: learn, inspect and evaluate MDL rule lists.

#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <classy/classy.hpp>

namespace {

using namespace classy;

struct CommonOptions {
    std::string label;
    double min_support = 0.05;
    std::size_t max_length = 4;
    std::string gain = "normalized";
    double epsilon = 1.0;
    std::string count_code = "literal";
    std::uint64_t seed = 1;
    unsigned threads = 1;
};

GainMode parse_gain(const std::string& name) {
    if (name == "normalized") return GainMode::Normalized;
    if (name == "absolute") return GainMode::Absolute;
    if (name == "normalized-data-only") return GainMode::NormalizedDataOnly;
    throw ConfigError("unknown gain mode '" + name + "'");
}

RuleCountCode parse_count_code(const std::string& name) {
    if (name == "literal") return RuleCountCode::Literal;
    if (name == "shifted") return RuleCountCode::Shifted;
    throw ConfigError("unknown rule count code '" + name + "'");
}

FitConfig fit_config(const CommonOptions& opt) {
    FitConfig cfg;
    cfg.min_support = opt.min_support;
    cfg.max_length = opt.max_length;
    cfg.gain = parse_gain(opt.gain);
    cfg.epsilon = opt.epsilon;
    cfg.rule_count_code = parse_count_code(opt.count_code);
    cfg.threads = opt.threads;
    return cfg;
}

std::ostream& open_output(const std::string& path, std::ofstream& file) {
    if (path.empty() || path == "-") return std::cout;
    file.open(path);
    if (!file) throw InputError("cannot write '" + path + "'");
    return file;
}

RuleList load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open model '" + path + "'");
    return parse_machine(in);
}

void add_fit_flags(CLI::App* cmd, CommonOptions& opt) {
    cmd->add_option("--min-support", opt.min_support,
                    "per-class minimum support as a fraction")
        ->capture_default_str();
    cmd->add_option("--max-length", opt.max_length, "maximum antecedent length")
        ->capture_default_str();
    cmd->add_option("--gain", opt.gain,
                    "rule scoring: normalized, absolute or normalized-data-only")
        ->capture_default_str();
    cmd->add_option("--epsilon", opt.epsilon, "smoothing pseudo-count")
        ->capture_default_str();
    cmd->add_option("--count-code", opt.count_code,
                    "rule count encoding: literal or shifted")
        ->capture_default_str();
}

void print_eval_tsv(std::ostream& out, const EvalReport& r) {
    out << "n\taccuracy\tbalanced_accuracy\tauc\trules\tavg_conditions\t"
        << "model_bits\tdata_bits\ttotal_bits\tcompression_pct\n";
    out << r.n << "\t" << r.accuracy << "\t" << r.balanced_accuracy << "\t" << r.auc
        << "\t" << r.num_rules << "\t" << r.avg_conditions << "\t" << r.model_bits
        << "\t" << r.data_bits << "\t" << r.total_bits << "\t" << r.compression_pct
        << "\n";
}

int run(int argc, char** argv) {
    CLI::App app{"MDL rule lists for multiclass classification"};
    app.require_subcommand(1);
    // Let --seed/--threads work after the subcommand name as well.
    app.fallthrough();
    app.set_version_flag("--version", std::string("classy ") + classy::version);

    CommonOptions opt;
    app.add_option("--seed", opt.seed, "seed for all randomized steps")
        ->capture_default_str();
    app.add_option("--threads", opt.threads, "worker threads (results never depend on this)")
        ->capture_default_str();

    std::string input, model_path, output;
    std::size_t folds = 10, repeats = 10;
    bool report_bits = false, trace = false, keep_redundant = false, with_std = false;
    std::vector<double> supports{0.001, 0.005, 0.01, 0.02, 0.05, 0.10, 0.15, 0.20, 0.25};

    auto* binarize_cmd =
        app.add_subcommand("binarize", "one-hot encode a CSV into items");
    binarize_cmd->add_option("input", input, "CSV file")->required();
    binarize_cmd->add_option("--label", opt.label, "label column (default: last)");
    binarize_cmd->add_option("-o,--output", output, "output file (default: stdout)");

    auto* mine_cmd =
        app.add_subcommand("mine", "mine candidate antecedents");
    mine_cmd->add_option("input", input, "CSV file")->required();
    mine_cmd->add_option("--label", opt.label, "label column (default: last)");
    add_fit_flags(mine_cmd, opt);
    mine_cmd->add_flag("--keep-redundant", keep_redundant,
                       "skip the equal-support superset filter");
    mine_cmd->add_option("-o,--output", output, "output file (default: stdout)");

    auto* fit_cmd = app.add_subcommand("fit", "learn a rule list");
    fit_cmd->add_option("input", input, "CSV file")->required();
    fit_cmd->add_option("--label", opt.label, "label column (default: last)");
    add_fit_flags(fit_cmd, opt);
    fit_cmd->add_flag("--report-bits", report_bits, "append code length figures");
    fit_cmd->add_flag("--trace", trace, "log every accepted rule to stderr");
    fit_cmd->add_option("--model-out", model_path, "write the machine-readable model here");
    fit_cmd->add_option("-o,--output", output, "output file (default: stdout)");

    auto* predict_cmd = app.add_subcommand("predict", "apply a fitted model");
    predict_cmd->add_option("model", model_path, "model file from fit --model-out")
        ->required();
    predict_cmd->add_option("input", input, "CSV file")->required();
    predict_cmd->add_option("-o,--output", output, "output file (default: stdout)");

    auto* eval_cmd = app.add_subcommand("evaluate", "score a fitted model on labeled data");
    eval_cmd->add_option("model", model_path, "model file")->required();
    eval_cmd->add_option("input", input, "labeled CSV file")->required();
    eval_cmd->add_option("--label", opt.label, "label column (default: last)");
    eval_cmd->add_option("--count-code", opt.count_code, "literal or shifted")
        ->capture_default_str();
    eval_cmd->add_option("-o,--output", output, "output file (default: stdout)");

    auto* cv_cmd = app.add_subcommand("cv", "repeated stratified cross-validation");
    cv_cmd->add_option("input", input, "CSV file")->required();
    cv_cmd->add_option("--label", opt.label, "label column (default: last)");
    add_fit_flags(cv_cmd, opt);
    cv_cmd->add_option("--folds", folds, "folds per repeat")->capture_default_str();
    cv_cmd->add_option("--repeats", repeats, "repeats")->capture_default_str();
    cv_cmd->add_flag("--std", with_std, "report standard deviations too");
    cv_cmd->add_option("-o,--output", output, "output file (default: stdout)");

    auto* exp_cmd = app.add_subcommand(
        "experiment", "cross-validate across a sweep of support thresholds");
    exp_cmd->add_option("input", input, "CSV file")->required();
    exp_cmd->add_option("--label", opt.label, "label column (default: last)");
    add_fit_flags(exp_cmd, opt);
    exp_cmd->add_option("--supports", supports, "support fractions to sweep")
        ->delimiter(',')
        ->capture_default_str();
    exp_cmd->add_option("--folds", folds, "folds per repeat")->capture_default_str();
    exp_cmd->add_option("--repeats", repeats, "repeats")->capture_default_str();
    exp_cmd->add_option("-o,--output", output, "output file (default: stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    std::ofstream file;
    std::ostream& out = open_output(output, file);
    out << std::setprecision(10);

    if (binarize_cmd->parsed()) {
        Dataset d = binarize(load_csv_file(input, opt.label));
        for (std::size_t i = 0; i < d.num_items(); ++i)
            out << d.items[i].name() << "\t";
        out << "class\n";
        for (std::size_t i = 0; i < d.num_instances(); ++i) {
            std::vector<char> row(d.num_items(), '0');
            for (auto item : d.instance_items[i]) row[item] = '1';
            for (char c : row) out << c << "\t";
            out << d.class_names[d.labels[i]] << "\n";
        }
        return 0;
    }

    if (mine_cmd->parsed()) {
        Dataset d = binarize(load_csv_file(input, opt.label));
        CandidateSet cands = mine(d, opt.min_support, opt.max_length);
        const std::size_t raw = cands.size();
        if (!keep_redundant) cands = remove_redundant(cands);
        for (std::size_t i = 0; i < cands.size(); ++i)
            out << pattern_name(cands.patterns[i], d) << "\t" << cands.supports[i] << "\n";
        std::cerr << "mined " << raw << " patterns, kept " << cands.size() << "\n";
        return 0;
    }

    if (fit_cmd->parsed()) {
        Dataset d = binarize(load_csv_file(input, opt.label));
        FitConfig cfg = fit_config(opt);
        if (trace) cfg.trace = &std::cerr;
        FitResult res = fit(d, cfg);
        out << serialize_text(res.list);
        if (report_bits) {
            EvalReport rep = evaluate(res.list, d, cfg.rule_count_code);
            out << "\nmodel_bits\t" << rep.model_bits << "\ndata_bits\t" << rep.data_bits
                << "\ntotal_bits\t" << rep.total_bits << "\nbaseline_bits\t"
                << res.baseline_bits << "\ncompression_pct\t" << rep.compression_pct
                << "\nrules\t" << rep.num_rules << "\ntrain_accuracy\t" << rep.accuracy
                << "\n";
        }
        if (!model_path.empty()) {
            std::ofstream m(model_path);
            if (!m) throw InputError("cannot write model '" + model_path + "'");
            serialize_machine(res.list, m);
        }
        return 0;
    }

    if (predict_cmd->parsed()) {
        RuleList list = load_model(model_path);
        RawTable t = load_csv_file(input);
        InstanceBinder binder(list, t);
        out << "predicted";
        for (const auto& name : list.class_names) out << "\tp_" << name;
        out << "\n";
        for (const auto& row : t.rows) {
            const auto& theta = predict_proba(list, binder.bind(row));
            out << list.class_names[argmax_class(theta)];
            for (double p : theta) out << "\t" << p;
            out << "\n";
        }
        return 0;
    }

    if (eval_cmd->parsed()) {
        RuleList list = load_model(model_path);
        Dataset d = bind_dataset(list, load_csv_file(input, opt.label));
        EvalReport rep = evaluate(list, d, parse_count_code(opt.count_code));
        print_eval_tsv(out, rep);
        std::cerr << "# accuracy " << rep.accuracy << ", balanced "
                  << rep.balanced_accuracy << ", auc " << rep.auc << ", rules "
                  << rep.num_rules << ", compression " << rep.compression_pct << "%\n";
        return 0;
    }

    if (cv_cmd->parsed()) {
        Dataset d = binarize(load_csv_file(input, opt.label));
        CVResult cv = cross_validate(d, fit_config(opt), folds, repeats, opt.seed);
        out << "rep\tfold\ttrain_n\ttest_n\trules\tavg_conditions\ttest_accuracy\t"
            << "test_balanced_accuracy\ttest_auc\ttest_compression_pct\t"
            << "train_accuracy\ttrain_auc\ttrain_compression_pct\n";
        for (const auto& f : cv.folds)
            out << f.rep << "\t" << f.fold << "\t" << f.train.n << "\t" << f.test.n
                << "\t" << f.test.num_rules << "\t" << f.test.avg_conditions << "\t"
                << f.test.accuracy << "\t" << f.test.balanced_accuracy << "\t"
                << f.test.auc << "\t" << f.test.compression_pct << "\t"
                << f.train.accuracy << "\t" << f.train.auc << "\t"
                << f.train.compression_pct << "\n";

        auto line = [&](const char* name, auto pick) {
            auto v = collect(cv, pick);
            out << "# " << name << "\t" << mean(v);
            if (with_std) out << "\t± " << sample_std(v);
            out << "\n";
        };
        out << "# folds\t" << cv.folds.size() << "\n";
        line("test_accuracy", [](const FoldOutcome& f) { return f.test.accuracy; });
        line("test_balanced_accuracy",
             [](const FoldOutcome& f) { return f.test.balanced_accuracy; });
        line("test_auc", [](const FoldOutcome& f) { return f.test.auc; });
        line("rules", [](const FoldOutcome& f) { return double(f.test.num_rules); });
        line("avg_conditions", [](const FoldOutcome& f) { return f.test.avg_conditions; });
        line("train_compression_pct",
             [](const FoldOutcome& f) { return f.train.compression_pct; });
        return 0;
    }

    if (exp_cmd->parsed()) {
        Dataset d = binarize(load_csv_file(input, opt.label));
        out << "min_support\tcandidates\trules\ttest_accuracy\ttest_balanced_accuracy\t"
            << "test_auc\ttrain_compression_pct\n";
        for (double s : supports) {
            CommonOptions o = opt;
            o.min_support = s;
            const std::size_t n_cands =
                remove_redundant(mine(d, s, o.max_length)).size();
            CVResult cv = cross_validate(d, fit_config(o), folds, repeats, opt.seed);
            out << s << "\t" << n_cands << "\t"
                << mean(collect(cv, [](const FoldOutcome& f) { return double(f.test.num_rules); }))
                << "\t"
                << mean(collect(cv, [](const FoldOutcome& f) { return f.test.accuracy; }))
                << "\t"
                << mean(collect(cv,
                                [](const FoldOutcome& f) { return f.test.balanced_accuracy; }))
                << "\t" << mean(collect(cv, [](const FoldOutcome& f) { return f.test.auc; }))
                << "\t"
                << mean(collect(cv,
                                [](const FoldOutcome& f) { return f.train.compression_pct; }))
                << "\n";
            std::cerr << "support " << s << " done\n";
        }
        return 0;
    }

    return 0;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const classy::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const classy::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
