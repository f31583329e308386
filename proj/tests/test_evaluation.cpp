#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <sstream>

#include "helpers.hpp"
#include "pwla/evaluation.hpp"

using namespace pwla;

namespace {

struct ConstantModel {
    int label = 1;
    std::size_t epochs() const { return 1; }
    std::pair<double, std::vector<int>> evaluate(const Dataset& test) const {
        std::vector<int> preds(test.size(), label);
        std::size_t correct = 0;
        for (std::size_t i = 0; i < test.size(); ++i) correct += (test.labels[i] == label);
        return {static_cast<double>(correct) / static_cast<double>(test.size()), preds};
    }
};

Dataset synthetic(std::size_t n0, std::size_t n1, std::uint64_t seed) {
    pwla::Rng rng(seed);
    Dataset ds;
    ds.features = testutil::random_matrix(n0 + n1, 4, rng);
    ds.labels.assign(n0, 0);
    ds.labels.insert(ds.labels.end(), n1, 1);
    ds.attribute_names = {"a", "b", "c", "d"};
    ds.name = "synthetic";
    return ds;
}

} // namespace

TEST_CASE("confusion counts") {
    const std::vector<int> truth{1, 1, 0, 0};

    const ConfusionCounts perfect = confusion(truth, truth, 1);
    CHECK(perfect.tp == 2);
    CHECK(perfect.tn == 2);
    CHECK(perfect.fp == 0);
    CHECK(perfect.fn == 0);

    const ConfusionCounts all_pos = confusion({1, 1, 1, 1}, truth, 1);
    CHECK(all_pos.tp == 2);
    CHECK(all_pos.fp == 2);
    CHECK(all_pos.tn == 0);
    CHECK(all_pos.fn == 0);

    // inverting predictions swaps tp<->fn and tn<->fp relative to perfect
    const ConfusionCounts inverted = confusion({0, 0, 1, 1}, truth, 1);
    CHECK(inverted.fn == perfect.tp);
    CHECK(inverted.fp == perfect.tn);
    CHECK(inverted.tp == 0);
    CHECK(inverted.tn == 0);

    CHECK(perfect.total() == truth.size());
    CHECK_THROWS_AS(confusion({1}, truth, 1), config_error);
}

TEST_CASE("f_measure handles degenerate counts by convention") {
    CHECK(f_measure({1, 0, 0, 0}) == 1.0);
    CHECK(f_measure({0, 2, 0, 3}) == 0.0);
    CHECK(f_measure({0, 0, 5, 0}) == 0.0);
    // precision 0.5, recall 1 -> 2/3
    CHECK(f_measure({2, 2, 0, 0}) == Catch::Approx(2.0 / 3.0).epsilon(1e-15));
}

TEST_CASE("accuracy agrees between direct count and confusion counts") {
    const Dataset ds = synthetic(9, 7, 13);
    const FoldPlan folds = make_folds(ds, 4, 3);
    const EvalReport rep =
        cross_validate(ds, MethodConfig::parse("pwla-smffnn"), folds);
    for (std::size_t f = 0; f < folds.k; ++f) {
        const Dataset test = ds.subset(folds.fold_indices(f));
        const Dataset train = ds.subset(folds.out_of_fold_indices(f));
        const FittedMethod fm = fit_method(train, MethodConfig::parse("pwla-smffnn"));
        auto [acc, preds] = fm.evaluate(test);
        const ConfusionCounts c = confusion(preds, test.labels, 1);
        CHECK(acc == Catch::Approx(c.accuracy()).epsilon(1e-15));
        CHECK(rep.folds[f].accuracy == acc);
    }
}

TEST_CASE("constant-prediction stub recovers per-fold class proportions") {
    const Dataset ds = synthetic(12, 20, 29);
    const FoldPlan folds = make_folds(ds, 4, 5);
    const EvalReport rep = cross_validate_with(
        ds, folds, [](const Dataset&, std::size_t) { return ConstantModel{1}; });
    for (std::size_t f = 0; f < folds.k; ++f) {
        const auto idx = folds.fold_indices(f);
        std::size_t ones = 0;
        for (auto i : idx) ones += ds.labels[i];
        const double expected = static_cast<double>(ones) / static_cast<double>(idx.size());
        CHECK(rep.folds[f].accuracy == Catch::Approx(expected).epsilon(1e-15));
    }
}

TEST_CASE("aggregate metrics equal the fold means") {
    const Dataset ds = synthetic(15, 17, 37);
    const FoldPlan folds = make_folds(ds, 5, 11);
    const EvalReport rep = cross_validate(ds, MethodConfig::parse("pwla-smffnn"), folds);

    double acc = 0.0, f1 = 0.0, ep = 0.0, cpu = 0.0;
    for (const auto& f : rep.folds) {
        acc += f.accuracy;
        f1 += f.f_measure;
        ep += f.epochs;
        cpu += f.cpu_seconds;
        CHECK(f.cpu_seconds >= 0.0);
    }
    const double k = static_cast<double>(folds.k);
    CHECK(std::fabs(rep.accuracy - acc / k) <= 1e-12);
    CHECK(std::fabs(rep.f_measure - f1 / k) <= 1e-12);
    CHECK(std::fabs(rep.epochs - ep / k) <= 1e-12);
    CHECK(std::fabs(rep.cpu_seconds - cpu) <= 1e-12);
    CHECK(rep.epochs == 1.0); // one-epoch classifier
}

TEST_CASE("xor leave-one-out lands at the enumerated accuracy") {
    // Enumerating the 4 folds by hand: the two corner instances score outside
    // the remaining table and take the wrong nearest label; the two mixed
    // instances win on the distance tie. 2/4 correct.
    const Dataset ds = make_xor_dataset();
    const FoldPlan folds = make_folds(ds, 4, 1);
    const EvalReport rep = cross_validate(ds, MethodConfig::parse("pwla-smffnn"), folds);
    CHECK(rep.accuracy == Catch::Approx(0.5).epsilon(1e-15));
    CHECK(rep.epochs == 1.0);
}

TEST_CASE("fold evaluation is identical when fanned out over a worker pool") {
    const Dataset ds = synthetic(10, 14, 41);
    const FoldPlan folds = make_folds(ds, 6, 2);
    const MethodConfig cfg = MethodConfig::parse("pwla-smffnn");
    const EvalReport serial = cross_validate(ds, cfg, folds, 1);
    const EvalReport parallel = cross_validate(ds, cfg, folds, 4);
    CHECK(serial.accuracy == parallel.accuracy);
    CHECK(serial.f_measure == parallel.f_measure);
    for (std::size_t f = 0; f < folds.k; ++f)
        CHECK(serial.folds[f].accuracy == parallel.folds[f].accuracy);
}

TEST_CASE("render_report output shapes") {
    EvalReport r;
    r.method = "pwla-smffnn";
    r.dataset = "xor";
    r.accuracy = 1.0;
    r.f_measure = 1.0;
    r.epochs = 1.0;
    r.cpu_seconds = 0.001953;
    r.folds.push_back({0, 1.0, 1.0, 1.0, 0.001953});

    SECTION("single text report has one data row") {
        const std::string text = render_report({r}, ReportFormat::table_text);
        CHECK(std::count(text.begin(), text.end(), '\n') == 2); // header + row
    }

    SECTION("csv of four methods has five lines") {
        std::vector<EvalReport> reports(4, r);
        reports[1].method = "sbpn";
        reports[2].method = "pca-bpn";
        reports[3].method = "scawi-bpn";
        const std::string csv = render_report(reports, ReportFormat::csv);
        CHECK(std::count(csv.begin(), csv.end(), '\n') == 5);
        CHECK(csv.rfind("method,dataset,accuracy,f_measure,epochs,cpu_seconds\n", 0) == 0);
    }

    SECTION("json round-trips the report values") {
        const std::string js = render_report({r}, ReportFormat::json);
        const auto parsed = nlohmann::json::parse(js);
        REQUIRE(parsed.is_array());
        CHECK(parsed[0]["method"] == "pwla-smffnn");
        CHECK(parsed[0]["accuracy"].get<double>() == r.accuracy);
        CHECK(parsed[0]["cpu_seconds"].get<double>() == r.cpu_seconds);
        CHECK(parsed[0]["folds"][0]["f_measure"].get<double>() == 1.0);
    }

    SECTION("timing can be suppressed for byte-stable output") {
        const std::string a = render_report({r}, ReportFormat::csv, false);
        EvalReport r2 = r;
        r2.cpu_seconds = 0.5; // different timing, same content otherwise
        const std::string b = render_report({r2}, ReportFormat::csv, false);
        CHECK(a == b);
    }
}

TEST_CASE("the one-epoch classifier fits faster than the iterative baseline") {
    // absolute seconds are machine noise; the ratio is the contract
    const Dataset ds = synthetic(20, 20, 47);
    const FoldPlan folds = make_folds(ds, 4, 3);
    const EvalReport smffnn = cross_validate(ds, MethodConfig::parse("pwla-smffnn"), folds);

    MethodConfig sbpn = MethodConfig::parse("sbpn");
    sbpn.bpn.max_epochs = 2000;
    sbpn.bpn.target_mse = 1e-12; // keep it iterating the full budget
    const EvalReport bpn = cross_validate(ds, sbpn, folds);

    CHECK(smffnn.cpu_seconds >= 0.0);
    CHECK(smffnn.cpu_seconds < bpn.cpu_seconds);
}

TEST_CASE("bpn methods run under cross-validation") {
    // small net and loose target keep this fast; exercises scaling + seeding
    Dataset ds = synthetic(12, 12, 43);
    MethodConfig cfg = MethodConfig::parse("sbpn");
    cfg.bpn.max_epochs = 200;
    cfg.bpn.target_mse = 0.26;
    cfg.bpn.hidden_units = 3;
    const FoldPlan folds = make_folds(ds, 3, 7);
    const EvalReport rep = cross_validate(ds, cfg, folds);
    CHECK(rep.folds.size() == 3);
    for (const auto& f : rep.folds) {
        CHECK(f.epochs >= 1.0);
        CHECK(f.epochs <= 200.0);
    }

    MethodConfig scawi = MethodConfig::parse("scawi-bpn");
    scawi.bpn.max_epochs = 50;
    scawi.bpn.hidden_units = 3;
    const EvalReport rep2 = cross_validate(ds, scawi, folds);
    CHECK(rep2.folds.size() == 3);

    MethodConfig pca = MethodConfig::parse("pca-bpn");
    pca.pca_dims = 2;
    pca.bpn.max_epochs = 50;
    pca.bpn.hidden_units = 3;
    const EvalReport rep3 = cross_validate(ds, pca, folds);
    CHECK(rep3.folds.size() == 3);
}
