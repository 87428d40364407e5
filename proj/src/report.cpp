#include "newslens/report.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <stdexcept>

namespace newslens::report {

std::size_t ReportTable::column(std::string_view name) const
{
    for (std::size_t i = 0; i < columns.size(); ++i) {
        if (columns[i].name == name) {
            return i;
        }
    }
    throw std::out_of_range("report `" + report_id + "` has no column `" + std::string(name) + "`");
}

bool is_null(Cell const &cell) { return std::holds_alternative<std::monostate>(cell); }

std::string format_real(double value)
{
    if (value == 0.0) {
        return "0";
    }
    if (!std::isfinite(value)) {
        return std::isnan(value) ? "nan" : (value > 0 ? "inf" : "-inf");
    }
    std::array<char, 64> buf{};
    auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    if (ec != std::errc{}) {
        throw std::runtime_error("format_real: conversion failed");
    }
    return std::string(buf.data(), end);
}

std::string format_cell(Cell const &cell)
{
    struct Visitor {
        std::string operator()(std::monostate) const { return {}; }
        std::string operator()(std::int64_t v) const { return std::to_string(v); }
        std::string operator()(double v) const { return format_real(v); }
        std::string operator()(std::string const &v) const { return v; }
    };
    return std::visit(Visitor{}, cell);
}

namespace {

void append_csv_field(std::string &out, std::string const &field)
{
    if (field.find_first_of(",\"\r\n") == std::string::npos) {
        out += field;
        return;
    }
    out += '"';
    for (char c : field) {
        if (c == '"') {
            out += '"';
        }
        out += c;
    }
    out += '"';
}

}  // namespace

std::string to_csv(ReportTable const &table)
{
    std::string out;
    for (std::size_t i = 0; i < table.columns.size(); ++i) {
        if (i != 0) {
            out += ',';
        }
        append_csv_field(out, table.columns[i].name);
    }
    out += '\n';
    for (auto const &row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i != 0) {
                out += ',';
            }
            append_csv_field(out, format_cell(row[i]));
        }
        out += '\n';
    }
    return out;
}

nlohmann::ordered_json to_json(ReportTable const &table)
{
    nlohmann::ordered_json doc;
    doc["report_id"] = table.report_id;
    auto &columns = doc["columns"] = nlohmann::ordered_json::array();
    for (auto const &c : table.columns) {
        columns.push_back({{"name", c.name},
                           {"type", c.type == ColumnType::integer ? "integer"
                                    : c.type == ColumnType::real  ? "real"
                                                                  : "text"}});
    }
    auto &rows = doc["rows"] = nlohmann::ordered_json::array();
    for (auto const &row : table.rows) {
        auto obj = nlohmann::ordered_json::object();
        for (std::size_t i = 0; i < row.size(); ++i) {
            auto const &name = table.columns[i].name;
            std::visit(
                [&](auto const &v) {
                    using T = std::decay_t<decltype(v)>;
                    if constexpr (std::is_same_v<T, std::monostate>) {
                        obj[name] = nullptr;
                    } else {
                        obj[name] = v;
                    }
                },
                row[i]);
        }
        rows.push_back(std::move(obj));
    }
    doc["provenance"] = {{"config_hash", table.provenance.config_hash},
                         {"corpus_hash", table.provenance.corpus_hash},
                         {"seed", table.provenance.seed}};
    return doc;
}

}  // namespace newslens::report
