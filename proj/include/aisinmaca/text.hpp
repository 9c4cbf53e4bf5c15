#pragma once

// Small text helpers shared by the parsers and report writers.

#include <charconv>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

namespace aisinmaca::text {

inline std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

// Splits on LF; a trailing CR on each line is dropped. A final empty
// segment after the last LF is not returned.
inline std::vector<std::string_view> lines(std::string_view s) {
    std::vector<std::string_view> out;
    std::size_t pos = 0;
    while (pos < s.size()) {
        auto end = s.find('\n', pos);
        if (end == std::string_view::npos) end = s.size();
        auto line = s.substr(pos, end - pos);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        out.push_back(line);
        pos = end + 1;
    }
    return out;
}

inline std::vector<std::string_view> split(std::string_view s, std::string_view delims) {
    std::vector<std::string_view> out;
    std::size_t pos = 0;
    while (true) {
        const auto end = s.find_first_of(delims, pos);
        if (end == std::string_view::npos) {
            out.push_back(s.substr(pos));
            return out;
        }
        out.push_back(s.substr(pos, end - pos));
        pos = end + 1;
    }
}

template <typename Int>
std::optional<Int> parse_int(std::string_view s) {
    Int value{};
    const auto* end = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(s.data(), end, value);
    if (ec != std::errc{} || ptr != end || s.empty()) return std::nullopt;
    return value;
}

inline std::optional<double> parse_double(std::string_view s) {
    double value = 0.0;
    const auto* end = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(s.data(), end, value);
    if (ec != std::errc{} || ptr != end || s.empty()) return std::nullopt;
    return value;
}

inline std::string fixed(double value, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, value);
    return buf;
}

// Shortest representation that parses back to the same double.
inline std::string shortest(double value) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, ptr);
}

inline bool has_whitespace(std::string_view s) {
    return s.find_first_of(" \t\r\n\v\f") != std::string_view::npos;
}

}  // namespace aisinmaca::text
