#pragma once

#include <filesystem>
#include <fstream>
#include <string>

#include "pwla/matrix.hpp"
#include "pwla/rng.hpp"

namespace testutil {

inline std::filesystem::path temp_path(const std::string& name) {
    return std::filesystem::temp_directory_path() / ("pwla_test_" + name);
}

inline std::string write_file(const std::string& name, const std::string& content) {
    const auto p = temp_path(name);
    std::ofstream out(p);
    out << content;
    return p.string();
}

inline pwla::Matrix random_matrix(std::size_t rows, std::size_t cols, pwla::Rng& rng,
                                  double lo = 0.1, double hi = 10.0) {
    pwla::Matrix m(rows, cols);
    for (auto& v : m.values) v = rng.uniform(lo, hi);
    return m;
}

} // namespace testutil
