#pragma once

#include <stdexcept>
#include <string>

namespace sparsespec {

/// Malformed or inconsistent input data (files, CSV rows, manifests).
/// Distinct from std::invalid_argument, which is reserved for violated
/// API preconditions; the CLI maps DataError to exit code 2.
class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace sparsespec
