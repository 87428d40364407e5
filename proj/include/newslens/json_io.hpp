#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace newslens::json_io {

/// Whole-file read; throws DataError when the file cannot be opened.
std::string read_file(std::filesystem::path const &path);

/// Splits on '\n', dropping one trailing '\r' per line. A final empty line is
/// not reported.
std::vector<std::string_view> split_lines(std::string_view content);

bool is_blank(std::string_view line);

/// Parses a JSON object; nullopt on syntax errors or non-object values.
std::optional<nlohmann::json> parse_object(std::string_view line);

/// Writes `content` to `path` via a sibling temporary file and a rename, so a
/// failed write never clobbers an existing complete file.
void write_file_atomic(std::filesystem::path const &path, std::string_view content);

}  // namespace newslens::json_io
