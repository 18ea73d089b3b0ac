#include "elicit/csv.hpp"

#include <algorithm>
#include <fstream>

#include "elicit/error.hpp"
#include "elicit/text.hpp"

namespace elicit {

NumericTable::NumericTable(std::vector<std::string> names, std::vector<std::vector<double>> columns)
    : names_(std::move(names)), columns_(std::move(columns)) {}

bool NumericTable::has(std::string_view name) const {
    return std::find(names_.begin(), names_.end(), name) != names_.end();
}

const std::vector<double>& NumericTable::column(std::string_view name) const {
    const auto it = std::find(names_.begin(), names_.end(), name);
    if (it == names_.end()) {
        throw ParseError("missing column '" + std::string(name) + "'");
    }
    return columns_[static_cast<std::size_t>(it - names_.begin())];
}

NumericTable read_csv(std::istream& in) {
    std::string line;
    std::size_t line_no = 0;
    std::vector<std::string> names;
    while (names.empty() && std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line_no == 1 && line.starts_with("\xEF\xBB\xBF")) {
            line.erase(0, 3);
        }
        if (text::trim(line).empty()) {
            continue;
        }
        for (auto cell : text::split_top(line, ',')) {
            names.emplace_back(text::trim(cell));
        }
    }
    if (names.empty()) {
        throw ParseError("csv has no header row");
    }
    std::vector<std::vector<double>> columns(names.size());
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (text::trim(line).empty()) {
            continue;
        }
        const auto cells = text::split_top(line, ',');
        if (cells.size() != names.size()) {
            throw ParseError("row " + std::to_string(line_no) + ": expected " +
                             std::to_string(names.size()) + " cells, got " +
                             std::to_string(cells.size()));
        }
        for (std::size_t c = 0; c < cells.size(); ++c) {
            try {
                columns[c].push_back(text::parse_double(text::trim(cells[c]), names[c]));
            } catch (const ParseError& e) {
                throw ParseError("row " + std::to_string(line_no) + ": " + e.what());
            }
        }
    }
    return {std::move(names), std::move(columns)};
}

NumericTable read_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ParseError("cannot open '" + path + "'");
    }
    return read_csv(in);
}

void write_csv(std::ostream& out, std::span<const std::string> names,
               std::span<const std::vector<double>> columns) {
    for (std::size_t c = 0; c < names.size(); ++c) {
        out << (c ? "," : "") << names[c];
    }
    out << '\n';
    const std::size_t rows = columns.empty() ? 0 : columns.front().size();
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < columns.size(); ++c) {
            out << (c ? "," : "") << text::format_double(columns[c][r]);
        }
        out << '\n';
    }
}

}  // namespace elicit
