#pragma once

#include <stdexcept>
#include <string>

namespace scan {

/// Malformed or inconsistent input data (CSV schema violations, grid
/// mismatches, missing files). Maps to CLI exit code 2.
class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

/// Numerical failure inside an algorithm (non-finite intermediate,
/// degenerate decomposition). Maps to CLI exit code 3.
class NumericError : public std::runtime_error {
public:
    explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

/// Bad command-line usage (unknown classifier or variant name, invalid flag
/// combination). Maps to CLI exit code 1.
class UsageError : public std::runtime_error {
public:
    explicit UsageError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace scan
