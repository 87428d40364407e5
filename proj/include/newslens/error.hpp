#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace newslens {

/// Base for every error raised by the engine.
class Error : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

/// Invalid configuration, missing inputs, bad command-line usage.
class ConfigError : public Error {
   public:
    using Error::Error;
};

/// Input data that violates a file schema or a referential constraint.
class DataError : public Error {
   public:
    using Error::Error;
};

/// One problem found while reading a line-delimited record file.
struct RecordIssue {
    std::size_t line = 0;  // 1-based
    std::string field;     // empty when the whole line is at fault
    std::string message;

    bool operator==(RecordIssue const &) const = default;
};

std::string describe(RecordIssue const &issue);

/// Throws DataError summarising `issues` when it is non-empty.
void raise_if_any(std::vector<RecordIssue> const &issues, std::string const &what);

}  // namespace newslens
