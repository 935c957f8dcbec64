#ifndef WORDOPT_STRINGS_HPP
#define WORDOPT_STRINGS_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace wordopt {

// Parameter bags carried through configs and tokens. Values stay as text;
// numeric accessors parse on demand and round-trip doubles exactly.
using ParamMap = std::map<std::string, std::string>;

/// Shortest decimal form that parses back to the identical double.
std::string format_double(double v);

/// Strict full-string parses; nullopt when the text is not a clean number.
std::optional<double> parse_double(std::string_view text);
std::optional<std::int64_t> parse_int(std::string_view text);
std::optional<std::uint64_t> parse_uint(std::string_view text);
std::optional<bool> parse_bool(std::string_view text);

/// Splits on a delimiter, trimming surrounding spaces from each piece;
/// empty pieces are dropped.
std::vector<std::string> split_list(std::string_view text, char delim);

std::string_view trim(std::string_view text);

/// FNV-1a 64 as a fixed-width hex string; used for spec digests.
std::string digest_hex(std::string_view text);

// ParamMap helpers; `path` names the owner in error messages.
double param_double(const ParamMap& p, const std::string& key, double fallback);
std::uint64_t param_uint(const ParamMap& p, const std::string& key, std::uint64_t fallback);
std::int64_t param_int(const ParamMap& p, const std::string& key, std::int64_t fallback);
bool param_bool(const ParamMap& p, const std::string& key, bool fallback);
std::string param_str(const ParamMap& p, const std::string& key, const std::string& fallback);
std::optional<double> param_opt_double(const ParamMap& p, const std::string& key);

}  // namespace wordopt

#endif
