#include "sentivol/calendar.hpp"

#include "sentivol/csv.hpp"
#include "sentivol/error.hpp"

#include <charconv>
#include <cstdio>

namespace sentivol {

namespace {

bool parse_int(std::string_view s, int& out) {
    if (s.empty()) {
        return false;
    }
    for (char c : s) {
        if (c < '0' || c > '9') {
            return false;
        }
    }
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc{} && ptr == s.data() + s.size();
}

} // namespace

std::optional<Date> parse_date(std::string_view text) {
    if (text.size() != 10 || text[4] != '-' || text[7] != '-') {
        return std::nullopt;
    }
    int y = 0;
    int m = 0;
    int d = 0;
    if (!parse_int(text.substr(0, 4), y) || !parse_int(text.substr(5, 2), m) ||
        !parse_int(text.substr(8, 2), d)) {
        return std::nullopt;
    }
    const std::chrono::year_month_day ymd{std::chrono::year{y}, std::chrono::month{static_cast<unsigned>(m)},
                                          std::chrono::day{static_cast<unsigned>(d)}};
    if (!ymd.ok()) {
        return std::nullopt;
    }
    return Date{ymd};
}

std::string format_date(Date d) {
    const std::chrono::year_month_day ymd{d};
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
    return buf;
}

double year_fraction(Date from, Date to) {
    return static_cast<double>((to - from).count()) / 365.0;
}

bool TradingCalendar::is_trading_day(Date d) const {
    const std::chrono::weekday wd{d};
    if (wd == std::chrono::Saturday || wd == std::chrono::Sunday) {
        return false;
    }
    return !holidays_.contains(d);
}

int TradingCalendar::trading_days_between(Date from, Date to) const {
    int count = 0;
    for (Date d = from + std::chrono::days{1}; d <= to; d += std::chrono::days{1}) {
        if (is_trading_day(d)) {
            ++count;
        }
    }
    return count;
}

Date TradingCalendar::next_trading_day(Date d) const {
    Date next = d + std::chrono::days{1};
    while (!is_trading_day(next)) {
        next += std::chrono::days{1};
    }
    return next;
}

TradingCalendar load_calendar(const std::filesystem::path& holidays_path) {
    const CsvTable table = read_csv(holidays_path);
    const std::size_t col = table.require_column("date");
    std::set<Date> holidays;
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto d = parse_date(table.rows[r][col]);
        if (!d) {
            fail(ErrorCode::UnparsableValue,
                 holidays_path.string() + " line " + std::to_string(table.line_numbers[r]));
        }
        holidays.insert(*d);
    }
    return TradingCalendar(std::move(holidays));
}

} // namespace sentivol
