#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace ramsey::cli {

/// Shortest decimal string that parses back to exactly `value`.
std::string format_number(double value);

/// Parses a number written by format_number. Throws std::invalid_argument.
double parse_number(const std::string& text);

/// A cell is a number or empty (no value for that row).
using Cell = std::optional<double>;

class CsvWriter {
public:
    explicit CsvWriter(std::vector<std::string> header);

    void row(const std::vector<Cell>& cells);
    void row_text(const std::vector<std::string>& cells);
    std::string str() const { return text_; }
    void save(const std::filesystem::path& path) const;

private:
    std::size_t columns_;
    std::string text_;
};

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    /// Column index by name; throws std::out_of_range.
    std::size_t column(const std::string& name) const;
    Cell number(std::size_t row, std::size_t col) const;
};

CsvTable read_csv(const std::filesystem::path& path);
CsvTable parse_csv(const std::string& text);

}  // namespace ramsey::cli
