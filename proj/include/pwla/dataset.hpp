#pragma once

#include <algorithm>
#include <charconv>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "pwla/error.hpp"
#include "pwla/io_util.hpp"
#include "pwla/matrix.hpp"

namespace pwla {

enum class DatasetFormat { xor_builtin, spect, spectf, bupa, generic_csv };

inline DatasetFormat parse_format(const std::string& s) {
    if (s == "xor-builtin" || s == "xor") return DatasetFormat::xor_builtin;
    if (s == "spect") return DatasetFormat::spect;
    if (s == "spectf") return DatasetFormat::spectf;
    if (s == "bupa") return DatasetFormat::bupa;
    if (s == "generic-csv" || s == "csv") return DatasetFormat::generic_csv;
    throw config_error("unknown dataset format: " + s);
}

// Immutable after load. labels are canonical {0,1}.
struct Dataset {
    Matrix features;
    std::vector<int> labels;
    std::vector<std::string> attribute_names;
    std::string name;

    std::size_t size() const { return features.rows; }
    std::size_t attributes() const { return features.cols; }

    std::size_t class_count(int label) const {
        std::size_t n = 0;
        for (int l : labels) n += (l == label);
        return n;
    }

    Dataset subset(const std::vector<std::size_t>& idx) const {
        Dataset out;
        out.features = Matrix(idx.size(), features.cols);
        out.labels.reserve(idx.size());
        for (std::size_t i = 0; i < idx.size(); ++i) {
            auto src = features.row(idx[i]);
            std::copy(src.begin(), src.end(), out.features.row(i).begin());
            out.labels.push_back(labels[idx[i]]);
        }
        out.attribute_names = attribute_names;
        out.name = name;
        return out;
    }
};

namespace detail {

inline std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) out.push_back(trim(field));
    if (!line.empty() && line.back() == ',') out.push_back("");
    return out;
}

inline std::optional<double> parse_number(const std::string& s) {
    if (s.empty()) return std::nullopt;
    double v = 0.0;
    const char* b = s.data();
    const char* e = s.data() + s.size();
    auto res = std::from_chars(b, e, v);
    if (res.ec != std::errc() || res.ptr != e) return std::nullopt;
    return v;
}

inline std::vector<std::string> default_names(std::size_t m) {
    std::vector<std::string> names;
    names.reserve(m);
    for (std::size_t i = 0; i < m; ++i) names.push_back("attr" + std::to_string(i + 1));
    return names;
}

// Reads rows of comma-separated numerics, enforcing a uniform column count.
// Returns raw rows; caller extracts the label column.
inline std::vector<std::vector<double>> read_numeric_rows(std::istream& in,
                                                          const std::string& path,
                                                          std::string* header_line) {
    std::vector<std::vector<double>> rows;
    std::string line;
    std::size_t lineno = 0;
    std::size_t expected_cols = 0;
    bool first_content_line = true;
    while (std::getline(in, line)) {
        ++lineno;
        std::string t = trim(line);
        if (t.empty()) continue;
        auto fields = split_csv(t);
        if (first_content_line && header_line) {
            // header rows are detected by a non-numeric first line
            bool numeric = true;
            for (const auto& f : fields)
                if (!parse_number(f)) { numeric = false; break; }
            if (!numeric) {
                *header_line = t;
                first_content_line = false;
                continue;
            }
        }
        first_content_line = false;
        std::vector<double> row;
        row.reserve(fields.size());
        for (const auto& f : fields) {
            auto v = parse_number(f);
            if (!v)
                throw io_error(path + ":" + std::to_string(lineno) +
                               ": cannot parse value '" + f + "'");
            if (!std::isfinite(*v))
                throw io_error(path + ":" + std::to_string(lineno) +
                               ": non-finite value '" + f + "'");
            row.push_back(*v);
        }
        if (expected_cols == 0) {
            expected_cols = row.size();
        } else if (row.size() != expected_cols) {
            throw io_error(path + ":" + std::to_string(lineno) + ": expected " +
                           std::to_string(expected_cols) + " columns, got " +
                           std::to_string(row.size()));
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw io_error(path + ": no data rows");
    return rows;
}

inline Dataset assemble(std::vector<std::vector<double>> rows, std::size_t label_col,
                        const std::string& path, const std::string& name,
                        std::vector<std::string> names) {
    const std::size_t n = rows.size();
    const std::size_t total_cols = rows[0].size();
    if (label_col >= total_cols)
        throw config_error(path + ": label column " + std::to_string(label_col) +
                           " out of range (row has " + std::to_string(total_cols) +
                           " columns)");
    if (total_cols < 2) throw io_error(path + ": need at least one feature column");

    Dataset ds;
    const std::size_t m = total_cols - 1;
    ds.features = Matrix(n, m);
    ds.labels.reserve(n);
    std::set<double> distinct;
    std::vector<double> raw_labels(n);
    for (std::size_t r = 0; r < n; ++r) {
        std::size_t c_out = 0;
        for (std::size_t c = 0; c < total_cols; ++c) {
            if (c == label_col) {
                raw_labels[r] = rows[r][c];
                distinct.insert(rows[r][c]);
            } else {
                ds.features.at(r, c_out++) = rows[r][c];
            }
        }
    }
    if (distinct.size() != 2)
        throw io_error(path + ": expected exactly 2 distinct label values, found " +
                       std::to_string(distinct.size()));
    const double lo = *distinct.begin();
    for (std::size_t r = 0; r < n; ++r) ds.labels.push_back(raw_labels[r] == lo ? 0 : 1);

    if (names.empty()) {
        ds.attribute_names = default_names(m);
    } else {
        // drop the label column's name
        for (std::size_t c = 0; c < names.size(); ++c)
            if (c != label_col) ds.attribute_names.push_back(names[c]);
        if (ds.attribute_names.size() != m) ds.attribute_names = default_names(m);
    }
    ds.name = name;
    return ds;
}

} // namespace detail

// Table IV: the four XOR instances with labels 0,1,1,0.
inline Dataset make_xor_dataset() {
    Dataset ds;
    ds.features = Matrix(4, 2);
    const double vals[4][2] = {{0, 0}, {0, 1}, {1, 0}, {1, 1}};
    for (std::size_t r = 0; r < 4; ++r)
        for (std::size_t c = 0; c < 2; ++c) ds.features.at(r, c) = vals[r][c];
    ds.labels = {0, 1, 1, 0};
    ds.attribute_names = {"attr1", "attr2"};
    ds.name = "xor";
    return ds;
}

// SPECT/SPECTF carry the class in column 0; BUPA's selector {1,2} is the last
// column and maps to {0,1}. generic-csv defaults to a trailing label column and
// autodetects an optional header row.
inline Dataset load_dataset(const std::string& path, DatasetFormat fmt,
                            std::optional<std::size_t> label_column = std::nullopt) {
    if (fmt == DatasetFormat::xor_builtin) return make_xor_dataset();

    std::ifstream in(path);
    if (!in) throw io_error("cannot open dataset file: " + path);

    std::string stem = std::filesystem::path(path).stem().string();
    std::string header;
    auto rows = detail::read_numeric_rows(
        in, path, fmt == DatasetFormat::generic_csv ? &header : nullptr);

    switch (fmt) {
    case DatasetFormat::spect:
    case DatasetFormat::spectf: {
        for (std::size_t r = 0; r < rows.size(); ++r) {
            const double cls = rows[r][0];
            if (cls != 0.0 && cls != 1.0)
                throw io_error(path + ": class value " + format_double(cls) +
                               " outside {0,1} at data row " + std::to_string(r + 1));
        }
        Dataset ds = detail::assemble(std::move(rows), 0, path, stem, {});
        const std::size_t want = fmt == DatasetFormat::spect ? 22 : 44;
        if (ds.attributes() != want)
            throw io_error(path + ": expected " + std::to_string(want) +
                           " feature columns, got " + std::to_string(ds.attributes()));
        return ds;
    }
    case DatasetFormat::bupa: {
        const std::size_t last = rows[0].size() - 1;
        for (std::size_t r = 0; r < rows.size(); ++r) {
            double sel = rows[r][last];
            if (sel != 1.0 && sel != 2.0)
                throw io_error(path + ": selector value " + format_double(sel) +
                               " outside {1,2} at data row " + std::to_string(r + 1));
        }
        Dataset ds = detail::assemble(std::move(rows), last, path, stem, {});
        if (ds.attributes() != 6)
            throw io_error(path + ": expected 6 feature columns, got " +
                           std::to_string(ds.attributes()));
        return ds;
    }
    case DatasetFormat::generic_csv: {
        std::vector<std::string> names;
        if (!header.empty())
            for (auto& f : detail::split_csv(header)) names.push_back(f);
        const std::size_t label = label_column.value_or(rows[0].size() - 1);
        return detail::assemble(std::move(rows), label, path, stem, std::move(names));
    }
    default:
        throw config_error("unhandled format");
    }
}

// Header of attribute names + "label", '.' decimals, '\n' line ends.
// format_double keeps the round trip bit-exact.
inline void write_generic_csv(const Dataset& ds, const std::string& path) {
    std::string out;
    for (std::size_t c = 0; c < ds.attributes(); ++c) {
        out += ds.attribute_names[c];
        out += ',';
    }
    out += "label\n";
    for (std::size_t r = 0; r < ds.size(); ++r) {
        for (std::size_t c = 0; c < ds.attributes(); ++c) {
            out += format_double(ds.features.at(r, c));
            out += ',';
        }
        out += std::to_string(ds.labels[r]);
        out += '\n';
    }
    write_text_atomic(path, out);
}

} // namespace pwla
