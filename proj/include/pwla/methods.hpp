#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "pwla/bpn.hpp"
#include "pwla/core.hpp"
#include "pwla/dataset.hpp"
#include "pwla/error.hpp"
#include "pwla/pca.hpp"
#include "pwla/smffnn.hpp"

namespace pwla {

enum class MethodKind { pwla_smffnn, sbpn, pca_bpn, scawi_bpn };

struct MethodConfig {
    MethodKind kind = MethodKind::pwla_smffnn;
    std::string tag = "pwla-smffnn";
    ReductionPolicy reduction;                          // PWLA methods
    PredictionRule rule = PredictionRule::nearest;      // PWLA methods
    BpnConfig bpn;                                      // BPN methods
    std::size_t pca_dims = 10;                          // pca-bpn

    static MethodConfig parse(const std::string& tag) {
        MethodConfig c;
        c.tag = tag;
        if (tag == "pwla-smffnn") {
            c.kind = MethodKind::pwla_smffnn;
        } else if (tag == "pwla-smffnn-reduced") {
            c.kind = MethodKind::pwla_smffnn;
            c.reduction = ReductionPolicy{ReductionKind::above_mean, 0};
        } else if (tag == "sbpn") {
            c.kind = MethodKind::sbpn;
        } else if (tag == "pca-bpn") {
            c.kind = MethodKind::pca_bpn;
        } else if (tag == "scawi-bpn") {
            c.kind = MethodKind::scawi_bpn;
            c.bpn.init = InitScheme::scawi;
        } else {
            throw config_error("unknown method: " + tag);
        }
        return c;
    }
};

// [0,1] column scaling fit on the training split; constant columns map to 0.
// The nets use standard sigmoids, so inputs are conditioned this way before
// training and prediction.
struct MinMaxScaler {
    std::vector<double> mins;
    std::vector<double> ranges; // max - min; 0 when the column is constant

    static MinMaxScaler fit(const Matrix& x) {
        MinMaxScaler s;
        s.mins.assign(x.cols, 0.0);
        s.ranges.assign(x.cols, 0.0);
        for (std::size_t c = 0; c < x.cols; ++c) {
            double lo = x.at(0, c), hi = x.at(0, c);
            for (std::size_t r = 1; r < x.rows; ++r) {
                lo = std::min(lo, x.at(r, c));
                hi = std::max(hi, x.at(r, c));
            }
            s.mins[c] = lo;
            s.ranges[c] = hi - lo;
        }
        return s;
    }

    Matrix apply(const Matrix& x) const {
        if (x.cols != mins.size()) throw config_error("scaler: column count mismatch");
        Matrix out(x.rows, x.cols);
        for (std::size_t r = 0; r < x.rows; ++r)
            for (std::size_t c = 0; c < x.cols; ++c)
                out.at(r, c) =
                    ranges[c] == 0.0 ? 0.0 : (x.at(r, c) - mins[c]) / ranges[c];
        return out;
    }

    std::vector<double> apply_row(std::span<const double> row) const {
        if (row.size() != mins.size()) throw config_error("scaler: row length mismatch");
        std::vector<double> out(row.size());
        for (std::size_t c = 0; c < row.size(); ++c)
            out[c] = ranges[c] == 0.0 ? 0.0 : (row[c] - mins[c]) / ranges[c];
        return out;
    }
};

// A trained method instance: exactly one of smffnn/bpn is set; BPN methods
// carry their input conditioning (and projection, for pca-bpn) with them.
struct FittedMethod {
    MethodConfig cfg;
    std::optional<SmffnnModel> smffnn;
    std::optional<BpnModel> bpn;
    std::optional<MinMaxScaler> scaler;
    std::optional<PcaTransform> pca;

    std::size_t epochs() const { return bpn ? bpn->epochs_run : 1; }

    int predict(std::span<const double> instance) const {
        if (smffnn) return pwla::predict(*smffnn, instance, cfg.rule);
        std::vector<double> x(instance.begin(), instance.end());
        if (pca) {
            Matrix one(1, x.size());
            std::copy(x.begin(), x.end(), one.row(0).begin());
            Matrix proj = pca_transform(*pca, one);
            x.assign(proj.row(0).begin(), proj.row(0).end());
        }
        if (scaler) x = scaler->apply_row(x);
        return bpn_predict(*bpn, x);
    }

    std::pair<double, std::vector<int>> evaluate(const Dataset& test) const {
        std::vector<int> preds;
        preds.reserve(test.size());
        std::size_t correct = 0;
        for (std::size_t r = 0; r < test.size(); ++r) {
            preds.push_back(predict(test.features.row(r)));
            correct += (preds.back() == test.labels[r]);
        }
        return {static_cast<double>(correct) / static_cast<double>(test.size()),
                std::move(preds)};
    }

    nlohmann::ordered_json to_json() const {
        nlohmann::ordered_json j;
        j["method"] = cfg.tag;
        if (smffnn) j["model"] = smffnn->to_json();
        if (bpn) j["model"] = bpn->to_json();
        if (scaler) {
            j["scaler"] = {{"mins", scaler->mins}, {"ranges", scaler->ranges}};
        }
        if (pca) {
            j["pca"] = {{"column_means", pca->column_means},
                        {"components", pca->components.values},
                        {"output_dims", pca->output_dims()},
                        {"eigenvalues", pca->eigenvalues}};
        }
        return j;
    }

    static FittedMethod from_json(const nlohmann::json& j) {
        FittedMethod f;
        f.cfg = MethodConfig::parse(j.at("method").get<std::string>());
        const auto& model = j.at("model");
        if (model.at("method") == "pwla-smffnn") {
            f.smffnn = SmffnnModel::from_json(model);
        } else {
            f.bpn = BpnModel::from_json(model);
        }
        if (j.contains("scaler")) {
            MinMaxScaler s;
            s.mins = j["scaler"].at("mins").get<std::vector<double>>();
            s.ranges = j["scaler"].at("ranges").get<std::vector<double>>();
            f.scaler = std::move(s);
        }
        if (j.contains("pca")) {
            PcaTransform t;
            t.column_means = j["pca"].at("column_means").get<std::vector<double>>();
            t.eigenvalues = j["pca"].at("eigenvalues").get<std::vector<double>>();
            const auto d = j["pca"].at("output_dims").get<std::size_t>();
            t.components = Matrix(d, t.column_means.size());
            t.components.values = j["pca"].at("components").get<std::vector<double>>();
            if (t.components.values.size() != d * t.column_means.size())
                throw io_error("model: bad pca components size");
            f.pca = std::move(t);
        }
        return f;
    }
};

inline FittedMethod fit_method(const Dataset& train, const MethodConfig& cfg) {
    FittedMethod f;
    f.cfg = cfg;
    switch (cfg.kind) {
    case MethodKind::pwla_smffnn: {
        f.smffnn = fit_thresholds(fit(train, cfg.reduction), train);
        break;
    }
    case MethodKind::sbpn:
    case MethodKind::scawi_bpn: {
        f.scaler = MinMaxScaler::fit(train.features);
        Dataset scaled = train;
        scaled.features = f.scaler->apply(train.features);
        f.bpn = bpn_train(scaled, cfg.bpn);
        break;
    }
    case MethodKind::pca_bpn: {
        const std::size_t d = std::min(cfg.pca_dims, train.attributes());
        f.pca = pca_fit(train.features, d);
        Dataset projected = train;
        projected.features = pca_transform(*f.pca, train.features);
        f.scaler = MinMaxScaler::fit(projected.features);
        projected.features = f.scaler->apply(projected.features);
        projected.attribute_names.assign(d, "");
        for (std::size_t i = 0; i < d; ++i)
            projected.attribute_names[i] = "pc" + std::to_string(i + 1);
        f.bpn = bpn_train(projected, cfg.bpn);
        break;
    }
    }
    return f;
}

} // namespace pwla
