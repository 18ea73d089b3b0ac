#pragma once

#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace elicit {

/// Numeric table read from comma-separated text with a header row.
class NumericTable {
public:
    NumericTable() = default;
    NumericTable(std::vector<std::string> names, std::vector<std::vector<double>> columns);

    const std::vector<std::string>& names() const { return names_; }
    std::size_t rows() const { return columns_.empty() ? 0 : columns_.front().size(); }
    bool has(std::string_view name) const;
    /// Throws ParseError naming the missing column.
    const std::vector<double>& column(std::string_view name) const;

private:
    std::vector<std::string> names_;
    std::vector<std::vector<double>> columns_;
};

/// Parse errors name the 1-based line and the column.
NumericTable read_csv(std::istream& in);
NumericTable read_csv_file(const std::string& path);

/// Writes a header and rows; numbers use the shortest round-trip form.
void write_csv(std::ostream& out, std::span<const std::string> names,
               std::span<const std::vector<double>> columns);

}  // namespace elicit
