#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace pwla {

// Dense row-major matrix; instances are rows, attributes are columns.
struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> values; // rows * cols

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c, double fill = 0.0)
        : rows(r), cols(c), values(r * c, fill) {}

    double& at(std::size_t r, std::size_t c) { return values[r * cols + c]; }
    double at(std::size_t r, std::size_t c) const { return values[r * cols + c]; }

    std::span<double> row(std::size_t r) { return {values.data() + r * cols, cols}; }
    std::span<const double> row(std::size_t r) const {
        return {values.data() + r * cols, cols};
    }

    bool all_finite() const {
        for (double v : values)
            if (!std::isfinite(v)) return false;
        return true;
    }
};

inline double column_mean(const Matrix& m, std::size_t c) {
    double s = 0.0;
    for (std::size_t r = 0; r < m.rows; ++r) s += m.at(r, c);
    return s / static_cast<double>(m.rows);
}

} // namespace pwla
