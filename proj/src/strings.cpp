#include "wordopt/strings.hpp"

#include <charconv>
#include <cstdio>
#include <vector>

#include "wordopt/errors.hpp"

namespace wordopt {

std::string format_double(double v) {
    char buf[40];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::optional<double> parse_double(std::string_view text) {
    text = trim(text);
    if (text.empty()) return std::nullopt;
    double value{};
    auto res = std::from_chars(text.data(), text.data() + text.size(), value);
    if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) return std::nullopt;
    return value;
}

std::optional<std::int64_t> parse_int(std::string_view text) {
    text = trim(text);
    if (text.empty()) return std::nullopt;
    std::int64_t value{};
    auto res = std::from_chars(text.data(), text.data() + text.size(), value);
    if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) return std::nullopt;
    return value;
}

std::optional<std::uint64_t> parse_uint(std::string_view text) {
    text = trim(text);
    if (text.empty()) return std::nullopt;
    std::uint64_t value{};
    auto res = std::from_chars(text.data(), text.data() + text.size(), value);
    if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) return std::nullopt;
    return value;
}

std::optional<bool> parse_bool(std::string_view text) {
    text = trim(text);
    if (text == "true" || text == "1" || text == "yes") return true;
    if (text == "false" || text == "0" || text == "no") return false;
    return std::nullopt;
}

std::vector<std::string> split_list(std::string_view text, char delim) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find(delim, start);
        if (end == std::string_view::npos) end = text.size();
        auto piece = trim(text.substr(start, end - start));
        if (!piece.empty()) out.emplace_back(piece);
        start = end + 1;
    }
    return out;
}

std::string_view trim(std::string_view text) {
    while (!text.empty() && (text.front() == ' ' || text.front() == '\t' || text.front() == '\n' || text.front() == '\r'))
        text.remove_prefix(1);
    while (!text.empty() && (text.back() == ' ' || text.back() == '\t' || text.back() == '\n' || text.back() == '\r'))
        text.remove_suffix(1);
    return text;
}

std::string digest_hex(std::string_view text) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

namespace {

[[noreturn]] void bad_param(const std::string& key, const std::string& value, const char* type) {
    throw ConfigError("parameter '" + key + "': cannot parse '" + value + "' as " + type);
}

}  // namespace

double param_double(const ParamMap& p, const std::string& key, double fallback) {
    auto it = p.find(key);
    if (it == p.end()) return fallback;
    auto v = parse_double(it->second);
    if (!v) bad_param(key, it->second, "a number");
    return *v;
}

std::uint64_t param_uint(const ParamMap& p, const std::string& key, std::uint64_t fallback) {
    auto it = p.find(key);
    if (it == p.end()) return fallback;
    auto v = parse_uint(it->second);
    if (!v) bad_param(key, it->second, "a nonnegative integer");
    return *v;
}

std::int64_t param_int(const ParamMap& p, const std::string& key, std::int64_t fallback) {
    auto it = p.find(key);
    if (it == p.end()) return fallback;
    auto v = parse_int(it->second);
    if (!v) bad_param(key, it->second, "an integer");
    return *v;
}

bool param_bool(const ParamMap& p, const std::string& key, bool fallback) {
    auto it = p.find(key);
    if (it == p.end()) return fallback;
    auto v = parse_bool(it->second);
    if (!v) bad_param(key, it->second, "a boolean");
    return *v;
}

std::string param_str(const ParamMap& p, const std::string& key, const std::string& fallback) {
    auto it = p.find(key);
    return it == p.end() ? fallback : it->second;
}

std::optional<double> param_opt_double(const ParamMap& p, const std::string& key) {
    auto it = p.find(key);
    if (it == p.end()) return std::nullopt;
    auto v = parse_double(it->second);
    if (!v) bad_param(key, it->second, "a number");
    return v;
}

}  // namespace wordopt
