#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

// Small tokenizing helpers shared by the text encodings of transforms,
// scores, identification functions, functionals and distributions.
namespace elicit::text {

std::string_view trim(std::string_view s);

/// Splits on `sep` at parenthesis depth zero.
std::vector<std::string_view> split_top(std::string_view s, char sep);

/// Strict full-string double parse; throws ParseError naming `what`.
double parse_double(std::string_view s, std::string_view what);

/// Strict unsigned integer parse (accepts forms like 1e6 when integral).
std::size_t parse_count(std::string_view s, std::string_view what);

/// Full-string unsigned 64-bit decimal integer.
std::uint64_t parse_u64(std::string_view s, std::string_view what);

/// Shortest representation that parses back to the same double.
std::string format_double(double v);

/// `name(a,b,...)` or bare `name`.
struct Call {
    std::string name;
    std::vector<double> args;
};

Call parse_call(std::string_view s);

/// Family head plus `key=value` options, from `head:key=value:key=value`.
struct Tagged {
    std::string head;
    std::map<std::string, std::string, std::less<>> options;
};

Tagged parse_tagged(std::string_view s);

}  // namespace elicit::text
