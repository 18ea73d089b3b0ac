#include "elicit/text.hpp"

#include <charconv>
#include <cmath>
#include <string>

#include "elicit/error.hpp"

namespace elicit::text {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_top(std::string_view s, char sep) {
    std::vector<std::string_view> parts;
    int depth = 0;
    std::size_t start = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        const char c = s[i];
        if (c == '(') {
            ++depth;
        } else if (c == ')') {
            --depth;
        } else if (c == sep && depth == 0) {
            parts.push_back(s.substr(start, i - start));
            start = i + 1;
        }
    }
    parts.push_back(s.substr(start));
    return parts;
}

double parse_double(std::string_view s, std::string_view what) {
    s = trim(s);
    if (!s.empty() && s.front() == '+') {
        s.remove_prefix(1);
    }
    double value = 0.0;
    const auto* end = s.data() + s.size();
    const auto [ptr, ec] = std::from_chars(s.data(), end, value);
    if (s.empty() || ec != std::errc() || ptr != end) {
        throw ParseError("cannot parse " + std::string(what) + " from '" + std::string(s) + "'");
    }
    return value;
}

std::size_t parse_count(std::string_view s, std::string_view what) {
    const double v = parse_double(s, what);
    if (!(v >= 0.0) || v != std::floor(v) || v > 1e15) {
        throw ParseError("expected a non-negative integer for " + std::string(what) + ", got '" +
                         std::string(trim(s)) + "'");
    }
    return static_cast<std::size_t>(v);
}

std::uint64_t parse_u64(std::string_view s, std::string_view what) {
    s = trim(s);
    std::uint64_t value = 0;
    const auto* end = s.data() + s.size();
    const auto [ptr, ec] = std::from_chars(s.data(), end, value);
    if (s.empty() || ec != std::errc() || ptr != end) {
        throw ParseError("cannot parse " + std::string(what) + " from '" + std::string(s) + "'");
    }
    return value;
}

std::string format_double(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

Call parse_call(std::string_view s) {
    s = trim(s);
    Call call;
    const auto open = s.find('(');
    if (open == std::string_view::npos) {
        call.name = std::string(s);
    } else {
        if (s.back() != ')') {
            throw ParseError("missing ')' in '" + std::string(s) + "'");
        }
        call.name = std::string(trim(s.substr(0, open)));
        const auto inner = trim(s.substr(open + 1, s.size() - open - 2));
        if (!inner.empty()) {
            for (auto part : split_top(inner, ',')) {
                call.args.push_back(parse_double(part, "argument of " + call.name));
            }
        }
    }
    if (call.name.empty()) {
        throw ParseError("empty name in '" + std::string(s) + "'");
    }
    return call;
}

Tagged parse_tagged(std::string_view s) {
    const auto parts = split_top(trim(s), ':');
    Tagged tagged;
    tagged.head = std::string(trim(parts.front()));
    if (tagged.head.empty()) {
        throw ParseError("empty family name in '" + std::string(s) + "'");
    }
    for (std::size_t i = 1; i < parts.size(); ++i) {
        const auto part = trim(parts[i]);
        const auto eq = part.find('=');
        if (eq == std::string_view::npos) {
            throw ParseError("expected key=value, got '" + std::string(part) + "'");
        }
        auto key = std::string(trim(part.substr(0, eq)));
        auto value = std::string(trim(part.substr(eq + 1)));
        if (!tagged.options.emplace(std::move(key), std::move(value)).second) {
            throw ParseError("duplicate option in '" + std::string(s) + "'");
        }
    }
    return tagged;
}

}  // namespace elicit::text
