#include "newslens/date.hpp"
#include "newslens/error.hpp"
#include "newslens/hash.hpp"

#include <array>
#include <charconv>
#include <cstdio>

namespace newslens {

std::string describe(RecordIssue const &issue)
{
    std::string out = "line " + std::to_string(issue.line);
    if (!issue.field.empty()) {
        out += ", field `" + issue.field + "`";
    }
    return out + ": " + issue.message;
}

void raise_if_any(std::vector<RecordIssue> const &issues, std::string const &what)
{
    if (issues.empty()) {
        return;
    }
    std::string msg = what + ": " + std::to_string(issues.size()) + " invalid record(s); first at " +
                      describe(issues.front());
    throw DataError(msg);
}

Date::Date(int year, unsigned month, unsigned day)
{
    std::chrono::year_month_day ymd{std::chrono::year{year}, std::chrono::month{month},
                                    std::chrono::day{day}};
    if (!ymd.ok()) {
        throw std::invalid_argument("invalid calendar date");
    }
    days_ = std::chrono::sys_days{ymd};
}

std::optional<Date> Date::parse(std::string_view text)
{
    if (text.size() != 10 || text[4] != '-' || text[7] != '-') {
        return std::nullopt;
    }
    auto number = [&](std::size_t pos, std::size_t len) -> std::optional<int> {
        int value = 0;
        auto const *first = text.data() + pos;
        auto const *last = first + len;
        for (auto const *p = first; p != last; ++p) {
            if (*p < '0' || *p > '9') {
                return std::nullopt;
            }
        }
        std::from_chars(first, last, value);
        return value;
    };
    auto y = number(0, 4);
    auto m = number(5, 2);
    auto d = number(8, 2);
    if (!y || !m || !d) {
        return std::nullopt;
    }
    std::chrono::year_month_day ymd{std::chrono::year{*y}, std::chrono::month{static_cast<unsigned>(*m)},
                                    std::chrono::day{static_cast<unsigned>(*d)}};
    if (!ymd.ok()) {
        return std::nullopt;
    }
    return Date{std::chrono::sys_days{ymd}};
}

std::string Date::to_string() const
{
    std::chrono::year_month_day ymd{days_};
    std::array<char, 16> buf{};
    std::snprintf(buf.data(), buf.size(), "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
    return buf.data();
}

int Date::year() const { return static_cast<int>(std::chrono::year_month_day{days_}.year()); }

std::string to_hex(std::uint64_t value)
{
    std::array<char, 17> buf{};
    std::snprintf(buf.data(), buf.size(), "%016llx", static_cast<unsigned long long>(value));
    return buf.data();
}

}  // namespace newslens
