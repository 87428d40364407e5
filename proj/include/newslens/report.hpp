#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

namespace newslens::report {

/// Null, integer, real or text.
using Cell = std::variant<std::monostate, std::int64_t, double, std::string>;

enum class ColumnType { integer, real, text };

struct Column {
    std::string name;
    ColumnType type = ColumnType::text;
};

struct Provenance {
    std::string config_hash;
    std::string corpus_hash;
    std::uint64_t seed = 0;
};

struct ReportTable {
    std::string report_id;
    std::vector<Column> columns;
    std::vector<std::vector<Cell>> rows;
    Provenance provenance;

    /// Throws std::out_of_range for unknown column names.
    std::size_t column(std::string_view name) const;
    Cell const &at(std::size_t row, std::string_view name) const { return rows.at(row).at(column(name)); }
};

bool is_null(Cell const &cell);

/// Shortest representation that round-trips; negative zero prints as 0.
std::string format_real(double value);
std::string format_cell(Cell const &cell);

/// RFC 4180: header row, CRLF-free '\n' line endings, fields quoted only when
/// they hold a comma, quote, CR or LF. Nulls are empty fields.
std::string to_csv(ReportTable const &table);
nlohmann::ordered_json to_json(ReportTable const &table);

}  // namespace newslens::report
