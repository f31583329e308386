#pragma once

#include <ctime>
#include <future>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "pwla/dataset.hpp"
#include "pwla/error.hpp"
#include "pwla/folds.hpp"
#include "pwla/io_util.hpp"
#include "pwla/methods.hpp"

namespace pwla {

struct ConfusionCounts {
    std::size_t tp = 0, fp = 0, tn = 0, fn = 0;
    std::size_t total() const { return tp + fp + tn + fn; }
    double accuracy() const {
        return total() == 0 ? 0.0
                            : static_cast<double>(tp + tn) / static_cast<double>(total());
    }
};

inline ConfusionCounts confusion(const std::vector<int>& predictions,
                                 const std::vector<int>& truth, int positive) {
    if (predictions.size() != truth.size())
        throw config_error("confusion: prediction/truth length mismatch");
    ConfusionCounts c;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        const bool pred_pos = predictions[i] == positive;
        const bool true_pos = truth[i] == positive;
        if (pred_pos && true_pos) ++c.tp;
        else if (pred_pos && !true_pos) ++c.fp;
        else if (!pred_pos && true_pos) ++c.fn;
        else ++c.tn;
    }
    return c;
}

// F = 2PR/(P+R); every 0/0 falls back to 0.
inline double f_measure(const ConfusionCounts& c) {
    const double recall_den = static_cast<double>(c.tp + c.fn);
    const double prec_den = static_cast<double>(c.tp + c.fp);
    const double recall = recall_den == 0.0 ? 0.0 : static_cast<double>(c.tp) / recall_den;
    const double precision = prec_den == 0.0 ? 0.0 : static_cast<double>(c.tp) / prec_den;
    if (precision + recall == 0.0) return 0.0;
    return 2.0 * precision * recall / (precision + recall);
}

struct FoldResult {
    std::size_t fold = 0;
    double accuracy = 0.0;
    double f_measure = 0.0;
    double epochs = 0.0;
    double cpu_seconds = 0.0;
};

struct EvalReport {
    std::string method;
    std::string dataset;
    double accuracy = 0.0;
    double f_measure = 0.0;
    double epochs = 0.0;      // mean over folds
    double cpu_seconds = 0.0; // total fitting time
    std::vector<FoldResult> folds;
    std::string error; // non-empty when the method failed

    nlohmann::ordered_json to_json(bool include_timing = true) const {
        nlohmann::ordered_json j;
        j["method"] = method;
        j["dataset"] = dataset;
        j["accuracy"] = accuracy;
        j["f_measure"] = f_measure;
        j["epochs"] = epochs;
        j["cpu_seconds"] = include_timing ? cpu_seconds : 0.0;
        auto arr = nlohmann::ordered_json::array();
        for (const auto& f : folds) {
            arr.push_back({{"fold", f.fold},
                           {"accuracy", f.accuracy},
                           {"f_measure", f.f_measure},
                           {"epochs", f.epochs},
                           {"cpu_seconds", include_timing ? f.cpu_seconds : 0.0}});
        }
        j["folds"] = arr;
        if (!error.empty()) j["error"] = error;
        return j;
    }
};

namespace detail {

// Per-thread CPU time, so concurrent folds do not bill each other.
inline double thread_cpu_seconds() {
    timespec ts{};
    clock_gettime(CLOCK_THREAD_CPUTIME_ID, &ts);
    return static_cast<double>(ts.tv_sec) + static_cast<double>(ts.tv_nsec) * 1e-9;
}

} // namespace detail

// Generic k-fold engine. fit_fn(train) -> model; model must expose
// epochs() and evaluate(test) -> {accuracy, predictions}.
template <typename FitFn>
EvalReport cross_validate_with(const Dataset& ds, const FoldPlan& folds, FitFn&& fit_fn,
                               std::size_t jobs = 1) {
    EvalReport report;
    report.dataset = ds.name;
    report.folds.resize(folds.k);

    auto run_fold = [&](std::size_t f) {
        const Dataset train = ds.subset(folds.out_of_fold_indices(f));
        const Dataset test = ds.subset(folds.fold_indices(f));
        const double t0 = detail::thread_cpu_seconds();
        auto model = fit_fn(train, f);
        const double t1 = detail::thread_cpu_seconds();
        auto [acc, preds] = model.evaluate(test);
        FoldResult r;
        r.fold = f;
        r.accuracy = acc;
        r.f_measure = f_measure(confusion(preds, test.labels, 1));
        r.epochs = static_cast<double>(model.epochs());
        r.cpu_seconds = t1 - t0;
        report.folds[f] = r;
    };

    if (jobs <= 1) {
        for (std::size_t f = 0; f < folds.k; ++f) run_fold(f);
    } else {
        std::vector<std::future<void>> futures;
        for (std::size_t f = 0; f < folds.k; ++f)
            futures.push_back(std::async(std::launch::async, run_fold, f));
        for (auto& fut : futures) fut.get();
    }

    const double nk = static_cast<double>(folds.k);
    for (const auto& r : report.folds) {
        report.accuracy += r.accuracy / nk;
        report.f_measure += r.f_measure / nk;
        report.epochs += r.epochs / nk;
        report.cpu_seconds += r.cpu_seconds;
    }
    return report;
}

// Benchmark protocol: fit on the out-of-fold split, score the held-out
// fold, average over folds. The BPN seed is offset per fold so folds are
// independent draws but the whole run stays reproducible.
inline EvalReport cross_validate(const Dataset& ds, const MethodConfig& method,
                                 const FoldPlan& folds, std::size_t jobs = 1) {
    EvalReport report = cross_validate_with(
        ds, folds,
        [&](const Dataset& train, std::size_t fold) {
            MethodConfig cfg = method;
            cfg.bpn.seed = method.bpn.seed + fold;
            return fit_method(train, cfg);
        },
        jobs);
    report.method = method.tag;
    return report;
}

enum class ReportFormat { table_text, csv, json };

inline ReportFormat parse_report_format(const std::string& s) {
    if (s == "text" || s == "table") return ReportFormat::table_text;
    if (s == "csv") return ReportFormat::csv;
    if (s == "json") return ReportFormat::json;
    throw config_error("unknown output format: " + s);
}

// One row per method, input order preserved.
inline std::string render_report(const std::vector<EvalReport>& reports, ReportFormat fmt,
                                 bool include_timing = true) {
    if (reports.empty()) throw config_error("render_report: no reports");
    switch (fmt) {
    case ReportFormat::csv: {
        std::string out = "method,dataset,accuracy,f_measure,epochs,cpu_seconds\n";
        for (const auto& r : reports) {
            out += r.method + ',' + r.dataset + ',' + format_double(r.accuracy) + ',' +
                   format_double(r.f_measure) + ',' + format_double(r.epochs) + ',' +
                   format_double(include_timing ? r.cpu_seconds : 0.0) + '\n';
        }
        return out;
    }
    case ReportFormat::json: {
        auto arr = nlohmann::ordered_json::array();
        for (const auto& r : reports) arr.push_back(r.to_json(include_timing));
        return arr.dump(2) + "\n";
    }
    case ReportFormat::table_text: {
        std::ostringstream os;
        os << "method                          dataset       accuracy  f_measure  epochs"
              "      cpu_seconds\n";
        for (const auto& r : reports) {
            char line[256];
            std::snprintf(line, sizeof(line), "%-31s %-13s %-9.4f %-10.4f %-11.1f %.6f",
                          r.method.c_str(), r.dataset.c_str(), r.accuracy, r.f_measure,
                          r.epochs, include_timing ? r.cpu_seconds : 0.0);
            os << line;
            if (!r.error.empty()) os << "  [failed: " << r.error << "]";
            os << "\n";
        }
        return os.str();
    }
    }
    throw config_error("unhandled report format");
}

} // namespace pwla
