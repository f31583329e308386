#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include <json.hpp>

#include "pwla/dataset.hpp"
#include "pwla/error.hpp"
#include "pwla/matrix.hpp"

namespace pwla {

// Column-ratio normalization output: C[n][m] = X[n][m] / Ave[m].
// Columns whose average is zero pass through unscaled and are recorded.
struct NormalizedMatrix {
    Matrix values;
    std::vector<double> column_averages;
    std::vector<std::size_t> zero_average_columns;
};

struct RowStats {
    double mu = 0.0;
    double sigma = 0.0; // population (divide-by-m)
};

enum class ReductionKind { keep_all, top_k, above_mean };

struct ReductionPolicy {
    ReductionKind kind = ReductionKind::keep_all;
    std::size_t k = 0;

    // "keep-all" | "top-k:K" | "above-mean"
    static ReductionPolicy parse(const std::string& s) {
        if (s == "keep-all") return {};
        if (s == "above-mean") return {ReductionKind::above_mean, 0};
        if (s.rfind("top-k:", 0) == 0) {
            ReductionPolicy p{ReductionKind::top_k, 0};
            try {
                p.k = std::stoul(s.substr(6));
            } catch (const std::exception&) {
                throw config_error("bad top-k value in reduction policy: " + s);
            }
            return p;
        }
        throw config_error("unknown reduction policy: " + s);
    }

    std::string str() const {
        switch (kind) {
        case ReductionKind::keep_all: return "keep-all";
        case ReductionKind::top_k: return "top-k:" + std::to_string(k);
        case ReductionKind::above_mean: return "above-mean";
        }
        return "?";
    }
};

// Fitted preprocessing state: the column averages used to normalize unseen
// instances, the per-attribute potential weights, and the attribute subset
// surviving dimension reduction.
struct PwlaModel {
    std::vector<double> column_averages;
    std::vector<double> weights;
    std::vector<std::size_t> kept_indices;

    std::size_t attributes() const { return column_averages.size(); }

    // Share of the total weight mass per attribute. Published weight tables
    // report this form (as a fraction or as a percent), not the raw averages.
    std::vector<double> relative_weights() const {
        double total = std::accumulate(weights.begin(), weights.end(), 0.0);
        std::vector<double> rel(weights.size(), 0.0);
        if (total > 0.0)
            for (std::size_t i = 0; i < weights.size(); ++i) rel[i] = weights[i] / total;
        return rel;
    }

    nlohmann::ordered_json to_json() const {
        nlohmann::ordered_json j;
        j["column_averages"] = column_averages;
        j["weights"] = weights;
        j["kept_indices"] = kept_indices;
        return j;
    }

    static PwlaModel from_json(const nlohmann::json& j) {
        PwlaModel m;
        m.column_averages = j.at("column_averages").get<std::vector<double>>();
        m.weights = j.at("weights").get<std::vector<double>>();
        m.kept_indices = j.at("kept_indices").get<std::vector<std::size_t>>();
        if (m.weights.size() != m.column_averages.size())
            throw io_error("model: weights/column_averages length mismatch");
        if (m.kept_indices.empty()) throw io_error("model: empty kept_indices");
        for (std::size_t i = 0; i < m.kept_indices.size(); ++i) {
            if (m.kept_indices[i] >= m.weights.size() ||
                (i > 0 && m.kept_indices[i] <= m.kept_indices[i - 1]))
                throw io_error("model: kept_indices not strictly increasing in range");
        }
        return m;
    }
};

inline double normalize_divisor(double column_average) {
    return column_average == 0.0 ? 1.0 : column_average;
}

// Phase 1: every value becomes its ratio to the column average.
inline NormalizedMatrix normalize(const Matrix& x) {
    NormalizedMatrix out;
    out.values = Matrix(x.rows, x.cols);
    out.column_averages.resize(x.cols);
    for (std::size_t c = 0; c < x.cols; ++c) {
        const double ave = column_mean(x, c);
        out.column_averages[c] = ave;
        if (ave == 0.0) out.zero_average_columns.push_back(c);
        const double div = normalize_divisor(ave);
        for (std::size_t r = 0; r < x.rows; ++r) out.values.at(r, c) = x.at(r, c) / div;
    }
    return out;
}

inline RowStats row_stats(std::span<const double> row) {
    RowStats s;
    const double m = static_cast<double>(row.size());
    for (double v : row) s.mu += v;
    s.mu /= m;
    double acc = 0.0;
    for (double v : row) acc += (v - s.mu) * (v - s.mu);
    s.sigma = std::sqrt(acc / m);
    return s;
}

// Phase 2a: per-row z-scores of the normalized matrix. Constant rows (sigma
// 0) standardize to all zeros; with a single attribute every row is constant.
inline Matrix standardize_rows(const NormalizedMatrix& c) {
    Matrix z(c.values.rows, c.values.cols);
    for (std::size_t r = 0; r < c.values.rows; ++r) {
        const RowStats s = row_stats(c.values.row(r));
        if (s.sigma == 0.0) continue; // row already zero-filled
        for (std::size_t m = 0; m < c.values.cols; ++m)
            z.at(r, m) = (c.values.at(r, m) - s.mu) / s.sigma;
    }
    return z;
}

// Phase 2b: W[m] is the column average of |Z|, the arm length of the
// attribute's torque about the global mean.
inline std::vector<double> potential_weights(const Matrix& z) {
    std::vector<double> w(z.cols, 0.0);
    for (std::size_t r = 0; r < z.rows; ++r)
        for (std::size_t c = 0; c < z.cols; ++c) w[c] += std::fabs(z.at(r, c));
    for (std::size_t c = 0; c < z.cols; ++c) w[c] /= static_cast<double>(z.rows);
    return w;
}

// Phase 3: select the surviving attribute set by weight strength.
inline std::vector<std::size_t> reduce_dimensions(const std::vector<double>& weights,
                                                  const ReductionPolicy& policy) {
    if (weights.empty()) throw config_error("reduce_dimensions: no weights");
    const std::size_t m = weights.size();
    std::vector<std::size_t> kept;
    switch (policy.kind) {
    case ReductionKind::keep_all: {
        kept.resize(m);
        std::iota(kept.begin(), kept.end(), std::size_t{0});
        break;
    }
    case ReductionKind::top_k: {
        if (policy.k == 0 || policy.k > m)
            throw config_error("top-k: k must be in [1," + std::to_string(m) + "], got " +
                               std::to_string(policy.k));
        std::vector<std::size_t> idx(m);
        std::iota(idx.begin(), idx.end(), std::size_t{0});
        // ties broken by lower index
        std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
            return weights[a] > weights[b];
        });
        kept.assign(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(policy.k));
        std::sort(kept.begin(), kept.end());
        break;
    }
    case ReductionKind::above_mean: {
        const double mean =
            std::accumulate(weights.begin(), weights.end(), 0.0) / static_cast<double>(m);
        for (std::size_t i = 0; i < m; ++i)
            if (weights[i] >= mean) kept.push_back(i);
        if (kept.empty()) { // unreachable for finite weights; kept as a guard
            std::size_t best = 0;
            for (std::size_t i = 1; i < m; ++i)
                if (weights[i] > weights[best]) best = i;
            kept.push_back(best);
        }
        break;
    }
    }
    return kept;
}

// The full pipeline: normalize -> standardize rows -> average |Z| per column
// -> reduce. One pass per phase, O(n*m) total.
inline PwlaModel fit(const Dataset& ds, const ReductionPolicy& policy = {}) {
    NormalizedMatrix c = normalize(ds.features);
    Matrix z = standardize_rows(c);
    PwlaModel model;
    model.column_averages = std::move(c.column_averages);
    model.weights = potential_weights(z);
    model.kept_indices = reduce_dimensions(model.weights, policy);
    return model;
}

} // namespace pwla
