#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "pwla/dataset.hpp"
#include "pwla/error.hpp"
#include "pwla/matrix.hpp"
#include "pwla/rng.hpp"

namespace pwla {

enum class InitScheme { uniform_range, scawi };

inline InitScheme parse_init_scheme(const std::string& s) {
    if (s == "uniform-range" || s == "uniform") return InitScheme::uniform_range;
    if (s == "scawi") return InitScheme::scawi;
    throw config_error("unknown init scheme: " + s);
}

struct BpnConfig {
    std::size_t hidden_units = 10;
    double learning_rate = 0.5;
    std::size_t max_epochs = 50000;
    double target_mse = 1e-4;
    InitScheme init = InitScheme::uniform_range;
    double init_lo = -0.77;
    double init_hi = 0.77;
    std::uint64_t seed = 1;

    void validate() const {
        if (hidden_units == 0) throw config_error("hidden_units must be positive");
        if (learning_rate <= 0.0) throw config_error("learning rate must be positive");
        if (target_mse <= 0.0) throw config_error("target_mse must be positive");
        if (max_epochs == 0) throw config_error("max_epochs must be positive");
        if (init_lo >= init_hi) throw config_error("init range: lo must be < hi");
    }

    nlohmann::ordered_json to_json() const {
        nlohmann::ordered_json j;
        j["hidden_units"] = hidden_units;
        j["learning_rate"] = learning_rate;
        j["max_epochs"] = max_epochs;
        j["target_mse"] = target_mse;
        j["init_scheme"] = init == InitScheme::scawi ? "scawi" : "uniform-range";
        j["init_lo"] = init_lo;
        j["init_hi"] = init_hi;
        j["seed"] = seed;
        return j;
    }

    // Accepts a partial document; absent keys keep their defaults.
    static BpnConfig from_json(const nlohmann::json& j) {
        BpnConfig c;
        if (j.contains("hidden_units")) c.hidden_units = j["hidden_units"].get<std::size_t>();
        if (j.contains("learning_rate")) c.learning_rate = j["learning_rate"].get<double>();
        if (j.contains("max_epochs")) c.max_epochs = j["max_epochs"].get<std::size_t>();
        if (j.contains("target_mse")) c.target_mse = j["target_mse"].get<double>();
        if (j.contains("init_scheme"))
            c.init = parse_init_scheme(j["init_scheme"].get<std::string>());
        if (j.contains("init_lo")) c.init_lo = j["init_lo"].get<double>();
        if (j.contains("init_hi")) c.init_hi = j["init_hi"].get<double>();
        if (j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
        c.validate();
        return c;
    }
};

// One hidden layer, sigmoid activations throughout, one output unit.
struct BpnModel {
    Matrix w_hidden;              // hidden_units x inputs
    std::vector<double> b_hidden; // hidden_units
    std::vector<double> w_out;    // hidden_units
    double b_out = 0.0;
    std::size_t epochs_run = 0;
    double final_mse = 0.0;
    std::vector<double> mse_history; // per epoch, before that epoch's update

    std::size_t inputs() const { return w_hidden.cols; }
    std::size_t hidden_units() const { return w_hidden.rows; }

    nlohmann::ordered_json to_json() const {
        nlohmann::ordered_json j;
        j["method"] = "bpn";
        j["inputs"] = inputs();
        j["hidden_units"] = hidden_units();
        j["w_hidden"] = w_hidden.values;
        j["b_hidden"] = b_hidden;
        j["w_out"] = w_out;
        j["b_out"] = b_out;
        j["epochs_run"] = epochs_run;
        j["final_mse"] = final_mse;
        return j;
    }

    static BpnModel from_json(const nlohmann::json& j) {
        BpnModel m;
        const auto h = j.at("hidden_units").get<std::size_t>();
        const auto in = j.at("inputs").get<std::size_t>();
        m.w_hidden = Matrix(h, in);
        m.w_hidden.values = j.at("w_hidden").get<std::vector<double>>();
        if (m.w_hidden.values.size() != h * in) throw io_error("model: bad w_hidden size");
        m.b_hidden = j.at("b_hidden").get<std::vector<double>>();
        m.w_out = j.at("w_out").get<std::vector<double>>();
        m.b_out = j.at("b_out").get<double>();
        m.epochs_run = j.at("epochs_run").get<std::size_t>();
        m.final_mse = j.at("final_mse").get<double>();
        if (m.b_hidden.size() != h || m.w_out.size() != h)
            throw io_error("model: bias/output vector size mismatch");
        return m;
    }
};

// i.i.d. uniform draws in [lo,hi), reproducible per seed.
inline std::vector<double> init_uniform_range(std::size_t count, double lo, double hi,
                                              std::uint64_t seed) {
    if (lo >= hi) throw config_error("init_uniform_range: lo must be < hi");
    Rng rng(seed);
    std::vector<double> w(count);
    for (auto& v : w) v = rng.uniform(lo, hi);
    return w;
}

inline double scawi_input_scale(std::size_t n_inputs, double mean_sq_input) {
    if (n_inputs == 0) throw config_error("scawi: n_inputs must be positive");
    if (mean_sq_input < 0.0) throw config_error("scawi: mean square input must be >= 0");
    return 1.3 / std::sqrt(1.0 + static_cast<double>(n_inputs) * mean_sq_input);
}

inline double scawi_hidden_scale(std::size_t n_hidden) {
    if (n_hidden == 0) throw config_error("scawi: n_hidden must be positive");
    return 1.3 / std::sqrt(1.0 + 0.3 * static_cast<double>(n_hidden));
}

enum class ScawiLayer { input, hidden };

// scale * r with r uniform in [-1,1). mean_sq_input is the V^2 term: the
// global mean of squared input values.
inline std::vector<double> init_scawi(std::size_t count, ScawiLayer layer,
                                      std::size_t n_inputs, double mean_sq_input,
                                      std::size_t n_hidden, std::uint64_t seed) {
    const double scale = layer == ScawiLayer::input ? scawi_input_scale(n_inputs, mean_sq_input)
                                                    : scawi_hidden_scale(n_hidden);
    Rng rng(seed);
    std::vector<double> w(count);
    for (auto& v : w) v = scale * rng.uniform(-1.0, 1.0);
    return w;
}

namespace detail {

inline double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

struct BpnGradients {
    Matrix w_hidden;
    std::vector<double> b_hidden;
    std::vector<double> w_out;
    double b_out = 0.0;
};

inline double bpn_output(const BpnModel& m, std::span<const double> x,
                         std::vector<double>* hidden_out = nullptr) {
    const std::size_t h = m.hidden_units();
    std::vector<double> hid(h);
    for (std::size_t j = 0; j < h; ++j) {
        double a = m.b_hidden[j];
        for (std::size_t i = 0; i < m.inputs(); ++i) a += m.w_hidden.at(j, i) * x[i];
        hid[j] = sigmoid(a);
    }
    double a = m.b_out;
    for (std::size_t j = 0; j < h; ++j) a += m.w_out[j] * hid[j];
    if (hidden_out) *hidden_out = std::move(hid);
    return sigmoid(a);
}

// MSE over the batch: (1/n) * sum (target - output)^2.
inline double bpn_mse(const BpnModel& m, const Matrix& x, const std::vector<int>& y) {
    double s = 0.0;
    for (std::size_t r = 0; r < x.rows; ++r) {
        const double e = bpn_output(m, x.row(r)) - static_cast<double>(y[r]);
        s += e * e;
    }
    return s / static_cast<double>(x.rows);
}

// Exact gradient of bpn_mse by backprop (the 2/n factor of the squared error
// mean is folded in, so finite differences of bpn_mse must match).
inline BpnGradients bpn_gradients(const BpnModel& m, const Matrix& x,
                                  const std::vector<int>& y) {
    const std::size_t h = m.hidden_units(), in = m.inputs(), n = x.rows;
    BpnGradients g;
    g.w_hidden = Matrix(h, in);
    g.b_hidden.assign(h, 0.0);
    g.w_out.assign(h, 0.0);
    std::vector<double> hid;
    for (std::size_t r = 0; r < n; ++r) {
        const auto row = x.row(r);
        const double o = bpn_output(m, row, &hid);
        const double delta_o =
            (2.0 / static_cast<double>(n)) * (o - static_cast<double>(y[r])) * o * (1.0 - o);
        g.b_out += delta_o;
        for (std::size_t j = 0; j < h; ++j) {
            g.w_out[j] += delta_o * hid[j];
            const double delta_h = delta_o * m.w_out[j] * hid[j] * (1.0 - hid[j]);
            g.b_hidden[j] += delta_h;
            for (std::size_t i = 0; i < in; ++i) g.w_hidden.at(j, i) += delta_h * row[i];
        }
    }
    return g;
}

} // namespace detail

// Full-batch gradient descent on MSE; one epoch = one pass + one update.
// Stops at target_mse or the epoch cap; a non-finite MSE is a numeric_error.
inline BpnModel bpn_train(const Dataset& train, const BpnConfig& cfg) {
    cfg.validate();
    if (!train.features.all_finite()) throw config_error("bpn_train: non-finite features");
    const std::size_t in = train.attributes(), h = cfg.hidden_units;

    BpnModel m;
    m.w_hidden = Matrix(h, in);
    const std::size_t n_params = h * in + h + h + 1;
    std::vector<double> init;
    if (cfg.init == InitScheme::uniform_range) {
        init = init_uniform_range(n_params, cfg.init_lo, cfg.init_hi, cfg.seed);
    } else {
        double msq = 0.0;
        for (double v : train.features.values) msq += v * v;
        msq /= static_cast<double>(train.features.values.size());
        Rng rng(cfg.seed);
        init.resize(n_params);
        const double s_in = scawi_input_scale(in, msq);
        const double s_hid = scawi_hidden_scale(h);
        for (std::size_t p = 0; p < h * in + h; ++p) init[p] = s_in * rng.uniform(-1.0, 1.0);
        for (std::size_t p = h * in + h; p < n_params; ++p)
            init[p] = s_hid * rng.uniform(-1.0, 1.0);
    }
    std::size_t p = 0;
    for (auto& v : m.w_hidden.values) v = init[p++];
    m.b_hidden.assign(init.begin() + static_cast<std::ptrdiff_t>(p),
                      init.begin() + static_cast<std::ptrdiff_t>(p + h));
    p += h;
    m.w_out.assign(init.begin() + static_cast<std::ptrdiff_t>(p),
                   init.begin() + static_cast<std::ptrdiff_t>(p + h));
    p += h;
    m.b_out = init[p];

    m.mse_history.reserve(std::min<std::size_t>(cfg.max_epochs, 1 << 20));
    for (std::size_t epoch = 1; epoch <= cfg.max_epochs; ++epoch) {
        const double mse = detail::bpn_mse(m, train.features, train.labels);
        if (!std::isfinite(mse))
            throw numeric_error("bpn_train: MSE diverged at epoch " + std::to_string(epoch));
        m.mse_history.push_back(mse);
        m.epochs_run = epoch;
        m.final_mse = mse;
        if (mse <= cfg.target_mse) return m;

        const auto g = detail::bpn_gradients(m, train.features, train.labels);
        for (std::size_t i = 0; i < m.w_hidden.values.size(); ++i)
            m.w_hidden.values[i] -= cfg.learning_rate * g.w_hidden.values[i];
        for (std::size_t j = 0; j < h; ++j) {
            m.b_hidden[j] -= cfg.learning_rate * g.b_hidden[j];
            m.w_out[j] -= cfg.learning_rate * g.w_out[j];
        }
        m.b_out -= cfg.learning_rate * g.b_out;
    }
    m.final_mse = detail::bpn_mse(m, train.features, train.labels);
    if (!std::isfinite(m.final_mse)) throw numeric_error("bpn_train: MSE diverged");
    return m;
}

// Forward pass; the sigmoid output maps to a label with the 0.5 boundary
// going to 1.
inline int bpn_predict(const BpnModel& model, std::span<const double> instance) {
    if (instance.size() != model.inputs())
        throw config_error("bpn_predict: instance length mismatch");
    return detail::bpn_output(model, instance) >= 0.5 ? 1 : 0;
}

} // namespace pwla
