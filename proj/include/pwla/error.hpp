#pragma once

#include <stdexcept>
#include <string>

namespace pwla {

// I/O and data failures: missing files, malformed rows, bad labels. CLI exit 1.
struct io_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Bad configuration: unknown method, out-of-range k, length mismatches. CLI exit 2.
struct config_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Numeric failure during training (divergent MSE). CLI exit 3.
struct numeric_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace pwla
