#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "pwla/core.hpp"
#include "pwla/dataset.hpp"
#include "pwla/error.hpp"

namespace pwla {

struct ScoreEntry {
    double score = 0.0;
    int label = 0;

    friend bool operator<(const ScoreEntry& a, const ScoreEntry& b) {
        return a.score < b.score || (a.score == b.score && a.label < b.label);
    }
};

enum class PredictionRule { nearest, interval };

inline PredictionRule parse_prediction_rule(const std::string& s) {
    if (s == "nearest") return PredictionRule::nearest;
    if (s == "interval") return PredictionRule::interval;
    throw config_error("unknown prediction rule: " + s);
}

// One-epoch classifier state: the fitted preprocessing model plus every
// training score with its label, sorted ascending. Stack0/Stack1 are the
// label-partitioned views of that table.
struct SmffnnModel {
    PwlaModel pwla;
    std::vector<ScoreEntry> score_table;
    std::size_t train_instances_seen = 0; // exactly n after a one-epoch fit

    std::vector<double> stack(int label) const {
        std::vector<double> out;
        for (const auto& e : score_table)
            if (e.label == label) out.push_back(e.score);
        return out;
    }

    nlohmann::ordered_json to_json() const {
        nlohmann::ordered_json j;
        j["method"] = "pwla-smffnn";
        j["pwla"] = pwla.to_json();
        auto table = nlohmann::ordered_json::array();
        for (const auto& e : score_table) table.push_back({e.score, e.label});
        j["score_table"] = table;
        return j;
    }

    static SmffnnModel from_json(const nlohmann::json& j) {
        SmffnnModel m;
        m.pwla = PwlaModel::from_json(j.at("pwla"));
        for (const auto& row : j.at("score_table")) {
            if (row.size() != 2) throw io_error("model: bad score_table entry");
            m.score_table.push_back({row[0].get<double>(), row[1].get<int>()});
        }
        m.train_instances_seen = m.score_table.size();
        if (!std::is_sorted(m.score_table.begin(), m.score_table.end()))
            throw io_error("model: score_table not sorted");
        return m;
    }
};

// Torque score: normalize the raw instance with the fitted column averages,
// then sum C[m] * W[m] over the kept attributes.
inline double score(const PwlaModel& model, std::span<const double> instance) {
    if (instance.size() != model.attributes())
        throw config_error("score: instance has " + std::to_string(instance.size()) +
                           " attributes, model expects " + std::to_string(model.attributes()));
    double s = 0.0;
    for (std::size_t m : model.kept_indices)
        s += (instance[m] / normalize_divisor(model.column_averages[m])) * model.weights[m];
    return s;
}

// Single pass over the training data: score, sort, partition by label.
inline SmffnnModel fit_thresholds(const PwlaModel& model, const Dataset& train) {
    if (train.class_count(0) == 0 || train.class_count(1) == 0)
        throw config_error("fit_thresholds: training data must contain both classes");
    SmffnnModel out;
    out.pwla = model;
    out.score_table.reserve(train.size());
    for (std::size_t r = 0; r < train.size(); ++r) {
        out.score_table.push_back({score(model, train.features.row(r)), train.labels[r]});
        ++out.train_instances_seen;
    }
    std::sort(out.score_table.begin(), out.score_table.end());
    return out;
}

namespace detail {

// Nearest training score wins; among entries at the minimal distance the
// majority label wins, and an exact split goes to label 1.
inline int predict_nearest(const std::vector<ScoreEntry>& table, double s) {
    const auto begin = table.begin();
    const auto end = table.end();
    auto right = std::lower_bound(begin, end, ScoreEntry{s, -1});
    double dmin = std::numeric_limits<double>::infinity();
    if (right != end) dmin = right->score - s;
    if (right != begin) dmin = std::min(dmin, s - std::prev(right)->score);

    int votes[2] = {0, 0};
    for (auto it = right; it != end && it->score - s == dmin; ++it) ++votes[it->label];
    for (auto it = right; it != begin;) {
        --it;
        if (s - it->score != dmin) break;
        ++votes[it->label];
    }
    return votes[1] >= votes[0] ? 1 : 0;
}

// Runs of consecutive same-label scores; the boundary between two adjacent
// runs is the midpoint of the facing scores. A query belongs to the first
// run whose upper boundary exceeds it.
inline int predict_interval(const std::vector<ScoreEntry>& table, double s) {
    std::vector<std::pair<double, int>> boundaries; // (upper bound, run label)
    std::size_t i = 0;
    while (i < table.size()) {
        std::size_t j = i;
        while (j + 1 < table.size() && table[j + 1].label == table[i].label) ++j;
        const double upper = j + 1 < table.size()
                                 ? 0.5 * (table[j].score + table[j + 1].score)
                                 : std::numeric_limits<double>::infinity();
        boundaries.emplace_back(upper, table[i].label);
        i = j + 1;
    }
    for (const auto& [upper, label] : boundaries)
        if (s < upper) return label;
    return boundaries.back().second;
}

} // namespace detail

inline int predict(const SmffnnModel& model, std::span<const double> instance,
                   PredictionRule rule = PredictionRule::nearest) {
    if (model.score_table.empty()) throw config_error("predict: model has no score table");
    const double s = score(model.pwla, instance);
    return rule == PredictionRule::nearest ? detail::predict_nearest(model.score_table, s)
                                           : detail::predict_interval(model.score_table, s);
}

struct Evaluation {
    double accuracy = 0.0;
    std::vector<int> predictions;
};

inline Evaluation evaluate(const SmffnnModel& model, const Dataset& test,
                           PredictionRule rule = PredictionRule::nearest) {
    Evaluation out;
    out.predictions.reserve(test.size());
    std::size_t correct = 0;
    for (std::size_t r = 0; r < test.size(); ++r) {
        const int p = predict(model, test.features.row(r), rule);
        out.predictions.push_back(p);
        correct += (p == test.labels[r]);
    }
    out.accuracy = static_cast<double>(correct) / static_cast<double>(test.size());
    return out;
}

} // namespace pwla
