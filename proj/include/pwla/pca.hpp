#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "pwla/error.hpp"
#include "pwla/matrix.hpp"

namespace pwla {

namespace detail {

// Cyclic Jacobi for symmetric matrices. a is destroyed; on return eig holds
// the eigenvalues and the columns of v the matching eigenvectors.
inline void jacobi_eigen_symmetric(Matrix a, Matrix& v, std::vector<double>& eig) {
    const std::size_t n = a.rows;
    v = Matrix(n, n);
    for (std::size_t i = 0; i < n; ++i) v.at(i, i) = 1.0;

    auto off_diag_sq = [&]() {
        double s = 0.0;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) s += a.at(p, q) * a.at(p, q);
        return s;
    };
    double diag_scale = 0.0;
    for (std::size_t i = 0; i < n; ++i) diag_scale += a.at(i, i) * a.at(i, i);
    const double tol = 1e-28 * std::max(diag_scale, 1e-300);

    for (int sweep = 0; sweep < 100 && off_diag_sq() > tol; ++sweep) {
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a.at(p, q);
                if (apq == 0.0) continue;
                const double theta = (a.at(q, q) - a.at(p, p)) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (std::size_t i = 0; i < n; ++i) {
                    const double aip = a.at(i, p), aiq = a.at(i, q);
                    a.at(i, p) = c * aip - s * aiq;
                    a.at(i, q) = s * aip + c * aiq;
                }
                for (std::size_t i = 0; i < n; ++i) {
                    const double api = a.at(p, i), aqi = a.at(q, i);
                    a.at(p, i) = c * api - s * aqi;
                    a.at(q, i) = s * api + c * aqi;
                }
                for (std::size_t i = 0; i < n; ++i) {
                    const double vip = v.at(i, p), viq = v.at(i, q);
                    v.at(i, p) = c * vip - s * viq;
                    v.at(i, q) = s * vip + c * viq;
                }
            }
        }
    }
    eig.resize(n);
    for (std::size_t i = 0; i < n; ++i) eig[i] = a.at(i, i);
}

} // namespace detail

struct PcaTransform {
    std::vector<double> column_means;
    Matrix components;               // d x m, rows are eigenvectors
    std::vector<double> eigenvalues; // non-increasing, length d

    std::size_t input_dims() const { return column_means.size(); }
    std::size_t output_dims() const { return components.rows; }
};

// Center columns, sample covariance, symmetric eigendecomposition, keep the
// top-d eigenpairs by eigenvalue (ties by lower original index).
inline PcaTransform pca_fit(const Matrix& x, std::size_t d) {
    if (x.rows < 2) throw config_error("pca_fit: need at least 2 rows");
    if (d == 0 || d > x.cols)
        throw config_error("pca_fit: d must be in [1," + std::to_string(x.cols) + "], got " +
                           std::to_string(d));
    const std::size_t n = x.rows, m = x.cols;
    PcaTransform t;
    t.column_means.resize(m);
    for (std::size_t c = 0; c < m; ++c) t.column_means[c] = column_mean(x, c);

    Matrix cov(m, m);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = i; j < m; ++j) {
            double s = 0.0;
            for (std::size_t r = 0; r < n; ++r)
                s += (x.at(r, i) - t.column_means[i]) * (x.at(r, j) - t.column_means[j]);
            cov.at(i, j) = cov.at(j, i) = s / static_cast<double>(n - 1);
        }
    }

    Matrix vecs;
    std::vector<double> eig;
    detail::jacobi_eigen_symmetric(std::move(cov), vecs, eig);

    std::vector<std::size_t> idx(m);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::stable_sort(idx.begin(), idx.end(),
                     [&](std::size_t a, std::size_t b) { return eig[a] > eig[b]; });

    t.components = Matrix(d, m);
    t.eigenvalues.resize(d);
    for (std::size_t k = 0; k < d; ++k) {
        t.eigenvalues[k] = eig[idx[k]];
        for (std::size_t c = 0; c < m; ++c) t.components.at(k, c) = vecs.at(c, idx[k]);
    }
    return t;
}

inline Matrix pca_transform(const PcaTransform& t, const Matrix& x) {
    if (x.cols != t.input_dims())
        throw config_error("pca_transform: input has " + std::to_string(x.cols) +
                           " columns, transform expects " + std::to_string(t.input_dims()));
    Matrix out(x.rows, t.output_dims());
    for (std::size_t r = 0; r < x.rows; ++r) {
        for (std::size_t k = 0; k < t.output_dims(); ++k) {
            double s = 0.0;
            for (std::size_t c = 0; c < x.cols; ++c)
                s += (x.at(r, c) - t.column_means[c]) * t.components.at(k, c);
            out.at(r, k) = s;
        }
    }
    return out;
}

// Back-projection into the original space (for reconstruction checks).
inline Matrix pca_inverse_transform(const PcaTransform& t, const Matrix& y) {
    Matrix out(y.rows, t.input_dims());
    for (std::size_t r = 0; r < y.rows; ++r)
        for (std::size_t c = 0; c < t.input_dims(); ++c) {
            double s = t.column_means[c];
            for (std::size_t k = 0; k < t.output_dims(); ++k)
                s += y.at(r, k) * t.components.at(k, c);
            out.at(r, c) = s;
        }
    return out;
}

} // namespace pwla
