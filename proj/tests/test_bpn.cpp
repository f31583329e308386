#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "helpers.hpp"
#include "pwla/bpn.hpp"

using namespace pwla;

namespace {

Dataset and_dataset() {
    Dataset ds = make_xor_dataset();
    ds.labels = {0, 0, 0, 1};
    ds.name = "and";
    return ds;
}

} // namespace

TEST_CASE("uniform init: bounds, determinism, degenerate range") {
    const auto w = init_uniform_range(4, -0.77, 0.77, 42);
    REQUIRE(w.size() == 4);
    for (double v : w) {
        CHECK(v >= -0.77);
        CHECK(v < 0.77);
    }
    CHECK(init_uniform_range(4, -0.77, 0.77, 42) == w);
    CHECK(init_uniform_range(4, -0.77, 0.77, 43) != w);

    for (double v : init_uniform_range(16, 0.0, 1e-12, 1)) {
        CHECK(v >= 0.0);
        CHECK(v < 1e-12);
    }
    CHECK_THROWS_AS(init_uniform_range(4, 0.5, 0.5, 1), config_error);
}

TEST_CASE("scawi scales follow the published formulas") {
    CHECK(scawi_input_scale(1, 0.0) == 1.3); // V = 0
    CHECK(scawi_hidden_scale(10) == Catch::Approx(0.65).epsilon(1e-15)); // 1.3/sqrt(4)

    const auto w = init_scawi(32, ScawiLayer::input, 1, 0.0, 10, 7);
    for (double v : w) {
        CHECK(v >= -1.3);
        CHECK(v < 1.3);
    }
    CHECK(init_scawi(32, ScawiLayer::input, 1, 0.0, 10, 7) == w);

    const auto h = init_scawi(8, ScawiLayer::hidden, 1, 0.0, 10, 7);
    for (double v : h) {
        CHECK(v >= -0.65);
        CHECK(v < 0.65);
    }
    CHECK_THROWS_AS(init_scawi(8, ScawiLayer::input, 0, 0.0, 10, 7), config_error);
    CHECK_THROWS_AS(init_scawi(8, ScawiLayer::input, 1, -1.0, 10, 7), config_error);
}

TEST_CASE("analytic gradients match central finite differences on a 2-2-1 net") {
    BpnModel m;
    m.w_hidden = Matrix(2, 2);
    m.w_hidden.values = {0.3, -0.5, 0.7, 0.2};
    m.b_hidden = {0.1, -0.2};
    m.w_out = {0.4, -0.6};
    m.b_out = 0.05;

    Matrix x(1, 2);
    x.at(0, 0) = 0.8;
    x.at(0, 1) = -0.4;
    const std::vector<int> y{1};

    const auto g = detail::bpn_gradients(m, x, y);
    const double h = 1e-5;
    auto check = [&](double* param, double analytic) {
        const double saved = *param;
        *param = saved + h;
        const double up = detail::bpn_mse(m, x, y);
        *param = saved - h;
        const double down = detail::bpn_mse(m, x, y);
        *param = saved;
        const double numeric = (up - down) / (2.0 * h);
        const double rel = std::fabs(analytic - numeric) /
                           std::max({1e-8, std::fabs(analytic), std::fabs(numeric)});
        CHECK(rel <= 1e-4);
    };
    for (std::size_t i = 0; i < 4; ++i)
        check(&m.w_hidden.values[i], g.w_hidden.values[i]);
    for (std::size_t j = 0; j < 2; ++j) {
        check(&m.b_hidden[j], g.b_hidden[j]);
        check(&m.w_out[j], g.w_out[j]);
    }
    check(&m.b_out, g.b_out);
}

TEST_CASE("xor trains to the target MSE; AND converges faster") {
    BpnConfig cfg;
    cfg.seed = 1;
    const BpnModel xor_model = bpn_train(make_xor_dataset(), cfg);
    CHECK(xor_model.final_mse <= cfg.target_mse);
    CHECK(xor_model.epochs_run < cfg.max_epochs);
    CHECK(xor_model.epochs_run > 1000); // the hard problem takes thousands of epochs

    const BpnModel and_model = bpn_train(and_dataset(), cfg);
    CHECK(and_model.final_mse <= cfg.target_mse);
    CHECK(and_model.epochs_run < xor_model.epochs_run);

    // converged net reproduces the truth table
    const double p01[2] = {0, 1}, p00[2] = {0, 0}, p10[2] = {1, 0}, p11[2] = {1, 1};
    CHECK(bpn_predict(xor_model, p01) == 1);
    CHECK(bpn_predict(xor_model, p10) == 1);
    CHECK(bpn_predict(xor_model, p00) == 0);
    CHECK(bpn_predict(xor_model, p11) == 0);
}

TEST_CASE("an epoch cap of 1 returns after a single update") {
    BpnConfig cfg;
    cfg.max_epochs = 1;
    const BpnModel m = bpn_train(make_xor_dataset(), cfg);
    CHECK(m.epochs_run == 1);
    CHECK(m.final_mse > cfg.target_mse);
}

TEST_CASE("training is deterministic per seed") {
    BpnConfig cfg;
    cfg.max_epochs = 50;
    cfg.seed = 9;
    const BpnModel a = bpn_train(make_xor_dataset(), cfg);
    const BpnModel b = bpn_train(make_xor_dataset(), cfg);
    CHECK(a.w_hidden.values == b.w_hidden.values);
    CHECK(a.final_mse == b.final_mse);
}

TEST_CASE("full-batch MSE is non-increasing at lr 0.1 over the first 100 epochs") {
    for (std::uint64_t seed : {1, 2, 3}) {
        BpnConfig cfg;
        cfg.learning_rate = 0.1;
        cfg.max_epochs = 100;
        cfg.target_mse = 1e-300; // never triggers
        cfg.seed = seed;
        const BpnModel m = bpn_train(make_xor_dataset(), cfg);
        REQUIRE(m.mse_history.size() == 100);
        for (std::size_t e = 1; e < m.mse_history.size(); ++e)
            CHECK(m.mse_history[e] <= m.mse_history[e - 1]);
    }
}

TEST_CASE("an output of exactly 0.5 maps to label 1") {
    BpnModel m;
    m.w_hidden = Matrix(2, 2); // all zeros
    m.b_hidden = {0.0, 0.0};
    m.w_out = {0.0, 0.0};
    m.b_out = 0.0; // sigmoid(0) = 0.5 exactly
    const double inst[2] = {3.0, -4.0};
    CHECK(bpn_predict(m, inst) == 1);
}

TEST_CASE("config validation and length mismatches") {
    BpnConfig cfg;
    cfg.learning_rate = 0.0;
    CHECK_THROWS_AS(bpn_train(make_xor_dataset(), cfg), config_error);
    cfg = {};
    cfg.init_lo = 1.0;
    cfg.init_hi = -1.0;
    CHECK_THROWS_AS(bpn_train(make_xor_dataset(), cfg), config_error);

    cfg = {};
    cfg.max_epochs = 1;
    const BpnModel m = bpn_train(make_xor_dataset(), cfg);
    const double bad[3] = {1, 2, 3};
    CHECK_THROWS_AS(bpn_predict(m, bad), config_error);
}

TEST_CASE("bpn config parses from partial JSON documents") {
    const auto j = nlohmann::json::parse(
        R"({"learning_rate": 1.5, "max_epochs": 123, "init_scheme": "scawi", "seed": 7})");
    const BpnConfig cfg = BpnConfig::from_json(j);
    CHECK(cfg.learning_rate == 1.5);
    CHECK(cfg.max_epochs == 123);
    CHECK(cfg.init == InitScheme::scawi);
    CHECK(cfg.seed == 7);
    CHECK(cfg.hidden_units == 10); // untouched default
    CHECK(cfg.target_mse == 1e-4);

    const BpnConfig back = BpnConfig::from_json(nlohmann::json::parse(cfg.to_json().dump()));
    CHECK(back.learning_rate == cfg.learning_rate);
    CHECK(back.init == cfg.init);

    CHECK_THROWS_AS(BpnConfig::from_json(nlohmann::json::parse(R"({"learning_rate": 0})")),
                    config_error);
}

TEST_CASE("bpn model JSON round trip") {
    BpnConfig cfg;
    cfg.max_epochs = 5;
    const BpnModel m = bpn_train(make_xor_dataset(), cfg);
    const BpnModel back = BpnModel::from_json(nlohmann::json::parse(m.to_json().dump()));
    CHECK(back.w_hidden.values == m.w_hidden.values);
    CHECK(back.b_hidden == m.b_hidden);
    CHECK(back.w_out == m.w_out);
    CHECK(back.b_out == m.b_out);
    CHECK(back.epochs_run == m.epochs_run);
    CHECK(back.final_mse == m.final_mse);
}
