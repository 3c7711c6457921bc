#pragma once

#include <chrono>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <string_view>

namespace sentivol {

using Date = std::chrono::sys_days;

/// Parses a strict ISO-8601 calendar date (YYYY-MM-DD).
std::optional<Date> parse_date(std::string_view text);
std::string format_date(Date d);

/// Actual/365 year fraction between two dates.
double year_fraction(Date from, Date to);

/// Weekdays minus an explicit holiday set.
class TradingCalendar {
public:
    TradingCalendar() = default;
    explicit TradingCalendar(std::set<Date> holidays) : holidays_(std::move(holidays)) {}

    bool is_trading_day(Date d) const;

    /// Number of trading days d with from < d <= to (0 when to <= from).
    int trading_days_between(Date from, Date to) const;

    /// First trading day strictly after d.
    Date next_trading_day(Date d) const;

    const std::set<Date>& holidays() const { return holidays_; }

private:
    std::set<Date> holidays_;
};

/// Holiday file: header `date`, one ISO date per line.
TradingCalendar load_calendar(const std::filesystem::path& holidays_path);

} // namespace sentivol
