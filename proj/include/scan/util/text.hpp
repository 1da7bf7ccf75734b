#pragma once

#include <charconv>
#include <cstdio>
#include <string>
#include <string_view>

#include "scan/util/error.hpp"

namespace scan {

/// Formats a double with 9 significant digits, locale-independent
/// (std::to_chars). This is the dataset CSV number contract.
inline std::string format_sig9(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 9);
    return std::string(buf, res.ptr);
}

/// Fixed 6-decimal formatting used for prediction confidences.
inline std::string format_fixed6(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::fixed, 6);
    return std::string(buf, res.ptr);
}

/// Shortest round-trip formatting (report files, manifests).
inline std::string format_full(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

/// Strict full-field double parse; throws DataError with `where` context on
/// trailing garbage or empty input. Non-finite checks are the caller's.
inline double parse_double(std::string_view field, const std::string& where) {
    double v = 0.0;
    const char* first = field.data();
    const char* last = field.data() + field.size();
    auto res = std::from_chars(first, last, v);
    if (res.ec != std::errc() || res.ptr != last) {
        throw DataError("non-numeric cell at " + where + ": '" + std::string(field) + "'");
    }
    return v;
}

inline long long parse_int(std::string_view field, const std::string& where) {
    long long v = 0;
    auto res = std::from_chars(field.data(), field.data() + field.size(), v);
    if (res.ec != std::errc() || res.ptr != field.data() + field.size()) {
        throw DataError("non-integer cell at " + where + ": '" + std::string(field) + "'");
    }
    return v;
}

} // namespace scan
