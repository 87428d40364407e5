#pragma once

#include <chrono>
#include <compare>
#include <optional>
#include <string>
#include <string_view>

namespace newslens {

/// A calendar day in UTC.
class Date {
   public:
    constexpr Date() = default;
    constexpr explicit Date(std::chrono::sys_days days) : days_(days) {}
    Date(int year, unsigned month, unsigned day);

    /// Parses a strict `YYYY-MM-DD` string; returns nullopt for anything else.
    static std::optional<Date> parse(std::string_view text);

    std::string to_string() const;
    int year() const;
    std::int64_t days_since_epoch() const { return days_.time_since_epoch().count(); }
    std::chrono::sys_days sys_days() const { return days_; }

    auto operator<=>(Date const &) const = default;

   private:
    std::chrono::sys_days days_{};
};

struct DateWindow {
    Date start;
    Date end;

    bool contains(Date d) const { return start <= d && d <= end; }
    bool operator==(DateWindow const &) const = default;
};

}  // namespace newslens
