// Command-line front door: fit models, dump weight/threshold tables, and run
// the cross-validated benchmark comparison.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "pwla/pwla.hpp"

namespace {

struct CommonOpts {
    std::string dataset;
    std::string format = "auto";
    int label_column = -1;
    std::string out;
    std::string out_format = "text";
};

struct MethodOpts {
    std::string method = "pwla-smffnn";
    std::string reduce;
    std::string prediction_rule = "nearest";
    std::string bpn_config;
    double lr = 0.5;
    std::size_t max_epochs = 50000;
    double target_mse = 1e-4;
    std::size_t hidden_units = 10;
    std::size_t pca_dims = 10;
    std::uint64_t seed = 1;
};

void add_common(CLI::App* cmd, CommonOpts& o, bool with_out_format = true) {
    cmd->add_option("--dataset", o.dataset, "Dataset path, or 'xor' for the builtin")
        ->required();
    cmd->add_option("--format", o.format,
                    "Dataset format: xor-builtin|spect|spectf|bupa|generic-csv");
    cmd->add_option("--label-column", o.label_column,
                    "0-based label column (generic-csv only)");
    cmd->add_option("--out", o.out, "Output path (default: stdout)");
    if (with_out_format)
        cmd->add_option("--out-format", o.out_format, "Output format: text|csv|json");
}

void add_method(CLI::App* cmd, MethodOpts& o) {
    cmd->add_option("--method", o.method,
                    "pwla-smffnn|pwla-smffnn-reduced|sbpn|pca-bpn|scawi-bpn");
    cmd->add_option("--reduce", o.reduce, "Reduction policy: keep-all|top-k:K|above-mean");
    cmd->add_option("--prediction-rule", o.prediction_rule, "nearest|interval");
    cmd->add_option("--bpn-config", o.bpn_config,
                    "JSON file with BPN settings; explicit flags override it, the init "
                    "scheme follows the method tag");
    cmd->add_option("--lr", o.lr, "BPN learning rate");
    cmd->add_option("--max-epochs", o.max_epochs, "BPN epoch cap");
    cmd->add_option("--target-mse", o.target_mse, "BPN stopping MSE");
    cmd->add_option("--hidden-units", o.hidden_units, "BPN hidden units");
    cmd->add_option("--pca-dims", o.pca_dims, "PCA dimensions for pca-bpn");
    cmd->add_option("--seed", o.seed, "Random seed");
}

pwla::Dataset load_from_opts(const CommonOpts& o) {
    std::string fmt = o.format;
    if (fmt == "auto") fmt = (o.dataset == "xor") ? "xor-builtin" : "generic-csv";
    std::optional<std::size_t> label;
    if (o.label_column >= 0) label = static_cast<std::size_t>(o.label_column);
    return pwla::load_dataset(o.dataset, pwla::parse_format(fmt), label);
}

pwla::MethodConfig method_from_opts(const MethodOpts& o, const CLI::App* cmd = nullptr) {
    pwla::MethodConfig cfg = pwla::MethodConfig::parse(o.method);
    if (!o.reduce.empty()) cfg.reduction = pwla::ReductionPolicy::parse(o.reduce);
    cfg.rule = pwla::parse_prediction_rule(o.prediction_rule);

    const bool from_file = !o.bpn_config.empty();
    if (from_file) {
        std::ifstream in(o.bpn_config);
        if (!in) throw pwla::io_error("cannot open BPN config: " + o.bpn_config);
        nlohmann::json j;
        try {
            in >> j;
        } catch (const nlohmann::json::exception& e) {
            throw pwla::io_error("bad BPN config JSON: " + std::string(e.what()));
        }
        const auto scheme = cfg.bpn.init; // method tag decides the scheme
        cfg.bpn = pwla::BpnConfig::from_json(j);
        cfg.bpn.init = scheme;
    }
    auto overridden = [&](const char* name) {
        return !from_file || (cmd && cmd->count(name) > 0);
    };
    if (overridden("--lr")) cfg.bpn.learning_rate = o.lr;
    if (overridden("--max-epochs")) cfg.bpn.max_epochs = o.max_epochs;
    if (overridden("--target-mse")) cfg.bpn.target_mse = o.target_mse;
    if (overridden("--hidden-units")) cfg.bpn.hidden_units = o.hidden_units;
    if (overridden("--seed")) cfg.bpn.seed = o.seed;
    cfg.pca_dims = o.pca_dims;
    return cfg;
}

void emit(const CommonOpts& o, const std::string& content) {
    if (o.out.empty()) {
        std::cout << content;
    } else {
        pwla::write_text_atomic(o.out, content);
    }
}

int cmd_fit(const CommonOpts& com, const MethodOpts& met, const CLI::App* cmd) {
    const pwla::Dataset ds = load_from_opts(com);
    const pwla::MethodConfig cfg = method_from_opts(met, cmd);
    const pwla::FittedMethod fitted = pwla::fit_method(ds, cfg);
    const std::string path = com.out.empty() ? "model.json" : com.out;
    pwla::write_text_atomic(path, fitted.to_json().dump(2) + "\n");
    const std::size_t kept =
        fitted.smffnn ? fitted.smffnn->pwla.kept_indices.size() : ds.attributes();
    std::cout << "fit method=" << cfg.tag << " dataset=" << ds.name << " n=" << ds.size()
              << " m=" << ds.attributes() << " kept=" << kept
              << " epochs=" << fitted.epochs() << " -> " << path << "\n";
    return 0;
}

int cmd_predict(const CommonOpts& com, const MethodOpts& met, const std::string& model_path) {
    std::ifstream in(model_path);
    if (!in) throw pwla::io_error("cannot open model file: " + model_path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw pwla::io_error("bad model JSON: " + std::string(e.what()));
    }
    pwla::FittedMethod fitted = pwla::FittedMethod::from_json(j);
    fitted.cfg.rule = pwla::parse_prediction_rule(met.prediction_rule);
    const pwla::Dataset ds = load_from_opts(com);
    auto [accuracy, preds] = fitted.evaluate(ds);

    std::string content;
    if (com.out_format == "csv") {
        content = "instance,prediction,label\n";
        for (std::size_t i = 0; i < preds.size(); ++i)
            content += std::to_string(i) + ',' + std::to_string(preds[i]) + ',' +
                       std::to_string(ds.labels[i]) + '\n';
    } else if (com.out_format == "json") {
        nlohmann::ordered_json out;
        out["dataset"] = ds.name;
        out["accuracy"] = accuracy;
        out["predictions"] = preds;
        content = out.dump(2) + "\n";
    } else {
        std::ostringstream os;
        os << "dataset=" << ds.name << " n=" << ds.size() << " accuracy=" << accuracy
           << "\n";
        content = os.str();
    }
    emit(com, content);
    return 0;
}

int cmd_dump_weights(const CommonOpts& com) {
    const pwla::Dataset ds = load_from_opts(com);
    const pwla::PwlaModel model = pwla::fit(ds);
    const auto rel = model.relative_weights();

    std::string content;
    if (com.out_format == "csv") {
        content = "attribute,weight,share\n";
        for (std::size_t m = 0; m < model.weights.size(); ++m)
            content += std::to_string(m + 1) + ',' + pwla::format_double(model.weights[m]) +
                       ',' + pwla::format_double(rel[m]) + '\n';
    } else if (com.out_format == "json") {
        nlohmann::ordered_json j;
        j["dataset"] = ds.name;
        j["weights"] = model.weights;
        j["shares"] = rel;
        content = j.dump(2) + "\n";
    } else {
        std::ostringstream os;
        os << "attribute  weight   share    share%\n";
        for (std::size_t m = 0; m < model.weights.size(); ++m) {
            char line[128];
            std::snprintf(line, sizeof(line), "%-10zu %-8.3f %-8.3f %-8.3f\n", m + 1,
                          model.weights[m], rel[m], 100.0 * rel[m]);
            os << line;
        }
        content = os.str();
    }
    emit(com, content);
    return 0;
}

int cmd_dump_stacks(const CommonOpts& com, const MethodOpts& met) {
    const pwla::Dataset ds = load_from_opts(com);
    pwla::ReductionPolicy policy;
    if (!met.reduce.empty()) policy = pwla::ReductionPolicy::parse(met.reduce);
    const pwla::SmffnnModel model = pwla::fit_thresholds(pwla::fit(ds, policy), ds);
    auto stack0 = model.stack(0);
    auto stack1 = model.stack(1);
    // Table layout is descending
    std::reverse(stack0.begin(), stack0.end());
    std::reverse(stack1.begin(), stack1.end());

    std::string content;
    if (com.out_format == "csv") {
        content = "stack,score\n";
        for (double s : stack0) content += "0," + pwla::format_double(s) + '\n';
        for (double s : stack1) content += "1," + pwla::format_double(s) + '\n';
    } else if (com.out_format == "json") {
        nlohmann::ordered_json j;
        j["dataset"] = ds.name;
        j["stack0"] = stack0;
        j["stack1"] = stack1;
        content = j.dump(2) + "\n";
    } else {
        std::ostringstream os;
        os << "Stack0          Stack1\n";
        const std::size_t rows = std::max(stack0.size(), stack1.size());
        for (std::size_t i = 0; i < rows; ++i) {
            char line[96];
            std::string a = i < stack0.size() ? pwla::format_double(stack0[i]) : "";
            std::string b = i < stack1.size() ? pwla::format_double(stack1[i]) : "";
            std::snprintf(line, sizeof(line), "%-15s %s\n", a.c_str(), b.c_str());
            os << line;
        }
        content = os.str();
    }
    emit(com, content);
    return 0;
}

int cmd_bench(const CommonOpts& com, const MethodOpts& met, const CLI::App* cmd,
              const std::string& methods_csv, std::size_t k, std::size_t jobs,
              bool no_timing) {
    const pwla::Dataset ds = load_from_opts(com);

    std::vector<std::string> tags;
    std::stringstream ss(methods_csv);
    std::string tag;
    while (std::getline(ss, tag, ',')) tags.push_back(tag);
    if (tags.empty()) throw pwla::config_error("bench: no methods given");
    // validate all tags before doing any work
    std::vector<pwla::MethodConfig> cfgs;
    for (const auto& t : tags) {
        MethodOpts m = met;
        m.method = t;
        cfgs.push_back(method_from_opts(m, cmd));
    }

    const pwla::FoldPlan folds = pwla::make_folds(ds, k, met.seed);
    for (const auto& w : folds.warnings) std::cerr << "warning: " << w << "\n";

    std::vector<pwla::EvalReport> reports;
    for (const auto& cfg : cfgs) {
        try {
            reports.push_back(pwla::cross_validate(ds, cfg, folds, jobs));
        } catch (const std::exception& e) {
            pwla::EvalReport failed;
            failed.method = cfg.tag;
            failed.dataset = ds.name;
            failed.accuracy = failed.f_measure = failed.epochs =
                std::numeric_limits<double>::quiet_NaN();
            failed.error = e.what();
            reports.push_back(std::move(failed));
            std::cerr << "warning: method " << cfg.tag << " failed: " << e.what() << "\n";
        }
    }
    emit(com, pwla::render_report(reports, pwla::parse_report_format(com.out_format),
                                  !no_timing));
    return 0;
}

int cmd_folds(const CommonOpts& com, std::size_t k, std::uint64_t seed) {
    const pwla::Dataset ds = load_from_opts(com);
    const pwla::FoldPlan plan = pwla::make_folds(ds, k, seed);
    for (const auto& w : plan.warnings) std::cerr << "warning: " << w << "\n";

    std::string content;
    if (com.out_format == "json") {
        nlohmann::ordered_json j;
        j["k"] = plan.k;
        j["assignments"] = plan.assignments;
        content = j.dump(2) + "\n";
    } else {
        content = "instance,fold\n";
        for (std::size_t i = 0; i < plan.assignments.size(); ++i)
            content += std::to_string(i) + ',' + std::to_string(plan.assignments[i]) + '\n';
    }
    emit(com, content);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"PWLA preprocessing, one-epoch SMFFNN classification, and BPN/PCA "
                 "baseline benchmarks"};
    app.require_subcommand(1);

    CommonOpts com;
    MethodOpts met;
    std::string model_path;
    std::size_t k = 10;
    std::size_t jobs = 1;
    bool no_timing = false;
    std::string methods_csv = "pwla-smffnn";

    auto* fit = app.add_subcommand("fit", "Fit a model and write it as JSON");
    add_common(fit, com, false);
    add_method(fit, met);

    auto* predict = app.add_subcommand("predict", "Evaluate a fitted model on a dataset");
    add_common(predict, com);
    predict->add_option("--model", model_path, "Fitted model JSON")->required();
    predict->add_option("--prediction-rule", met.prediction_rule, "nearest|interval");

    auto* dumpw = app.add_subcommand("dump-weights",
                                     "Print per-attribute potential weights and shares");
    add_common(dumpw, com);

    auto* dumps = app.add_subcommand("dump-stacks",
                                     "Print Stack0/Stack1 training thresholds (descending)");
    add_common(dumps, com);
    dumps->add_option("--reduce", met.reduce, "Reduction policy before scoring");

    auto* bench = app.add_subcommand("bench", "Cross-validated method comparison");
    add_common(bench, com);
    add_method(bench, met);
    bench->add_option("--methods", methods_csv, "Comma-separated method list");
    bench->add_option("--k", k, "Fold count");
    bench->add_option("--jobs", jobs, "Concurrent folds");
    bench->add_flag("--no-timing", no_timing, "Render cpu_seconds as 0 for stable output");

    auto* foldsc = app.add_subcommand("folds", "Print the stratified fold assignment");
    add_common(foldsc, com);
    foldsc->add_option("--k", k, "Fold count");
    foldsc->add_option("--seed", met.seed, "Random seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (app.got_subcommand(fit)) return cmd_fit(com, met, fit);
        if (app.got_subcommand(predict)) return cmd_predict(com, met, model_path);
        if (app.got_subcommand(dumpw)) return cmd_dump_weights(com);
        if (app.got_subcommand(dumps)) return cmd_dump_stacks(com, met);
        if (app.got_subcommand(bench))
            return cmd_bench(com, met, bench, methods_csv, k, jobs, no_timing);
        if (app.got_subcommand(foldsc)) return cmd_folds(com, k, met.seed);
    } catch (const pwla::io_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const pwla::config_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const pwla::numeric_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
