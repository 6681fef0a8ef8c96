#pragma once

#include <array>
#include <charconv>
#include <cstdio>
#include <optional>
#include <string>
#include <string_view>
#include <system_error>

namespace lfmkit {

/// Shortest decimal text that parses back to exactly `v`.
/// Plain notation is used for magnitudes in [1e-5, 1e16).
[[nodiscard]] inline std::string format_exact(double v) {
    std::array<char, 64> buf{};
    const double mag = v < 0 ? -v : v;
    const auto fmt = mag == 0.0 || (mag >= 1e-5 && mag < 1e16) ? std::chars_format::fixed : std::chars_format::general;
    auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v, fmt);
    if (ec != std::errc{}) {
        return std::to_string(v);
    }
    return std::string(buf.data(), end);
}

/// Report-style rendering with six significant digits.
[[nodiscard]] inline std::string format_report(double v) {
    std::array<char, 64> buf{};
    std::snprintf(buf.data(), buf.size(), "%.6g", v);
    return std::string(buf.data());
}

[[nodiscard]] inline std::string_view trim(std::string_view s) {
    constexpr std::string_view ws = " \t\r\n";
    const auto first = s.find_first_not_of(ws);
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(ws);
    return s.substr(first, last - first + 1);
}

[[nodiscard]] inline std::optional<double> parse_double(std::string_view s) {
    s = trim(s);
    if (!s.empty() && s.front() == '+') {
        s.remove_prefix(1);
    }
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) {
        return std::nullopt;
    }
    return v;
}

[[nodiscard]] inline std::optional<int> parse_int(std::string_view s) {
    s = trim(s);
    int v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) {
        return std::nullopt;
    }
    return v;
}

}  // namespace lfmkit
