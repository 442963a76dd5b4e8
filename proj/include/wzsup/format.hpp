#pragma once

#include <charconv>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace wzsup {

/// Render a double with 17 significant digits ('.' decimal separator, never
/// locale-dependent). 17 digits round-trip any IEEE-754 binary64 value, which
/// is what makes re-runs byte-comparable.
inline std::string to_string_17(double value) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 17);
    if (res.ec != std::errc()) throw std::runtime_error("to_string_17: conversion failed");
    return std::string(buf, res.ptr);
}

inline std::string to_string_u64(std::uint64_t value) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, res.ptr);
}

}  // namespace wzsup
