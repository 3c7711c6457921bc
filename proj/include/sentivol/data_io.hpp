#pragma once

#include "sentivol/calendar.hpp"
#include "sentivol/error.hpp"
#include "sentivol/series.hpp"

#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace sentivol::io {

enum class OptionKind { Call, Put };

std::string_view to_string(OptionKind kind);

struct OptionQuote {
    Date trade_date;
    Date expiry_date;
    double strike = 0.0;
    OptionKind kind = OptionKind::Call;
    double price = 0.0;
    double underlying_price = 0.0;

    bool operator==(const OptionQuote&) const = default;
};

struct RatePoint {
    Date date;
    double rate = 0.0;

    bool operator==(const RatePoint&) const = default;
};

struct RateBounds {
    double lower = -0.05;
    double upper = 0.5;
};

struct ProxyPanel {
    std::vector<Date> dates;
    std::vector<long long> n_up;
    std::vector<long long> n_down;
    std::vector<double> volume;
    std::vector<double> float_cap;
    std::vector<double> cef_nav;
    std::vector<double> cef_price;

    std::size_t size() const { return dates.size(); }
    bool operator==(const ProxyPanel&) const = default;
};

/// Calendar-aligned named columns over a common date set.
struct AlignedPanel {
    std::vector<Date> dates;
    std::vector<std::string> names;
    std::vector<std::vector<double>> columns;
    /// Dates removed from each input, keyed by input label.
    std::map<std::string, std::vector<Date>> dropped;

    const std::vector<double>& column(std::string_view name) const;
    Series series(std::string_view name) const;
};

/// Maps the canonical quote fields onto header names in a particular file.
struct QuoteSchema {
    std::string trade_date = "trade_date";
    std::string expiry_date = "expiry_date";
    std::string strike = "strike";
    std::string kind = "kind";
    std::string price = "price";
    std::string underlying_price = "underlying_price";
};

struct RowReject {
    int line = 0;
    ErrorCode code = ErrorCode::InvariantViolation;
    std::string message;
};

struct QuoteLoadResult {
    std::vector<OptionQuote> quotes;
    std::vector<RowReject> rejects;
};

/// Loads quotes. Bad rows are reported in `rejects` rather than aborting; a
/// missing column throws MissingColumn.
QuoteLoadResult load_option_quotes(const std::filesystem::path& path, const QuoteSchema& schema = {});
QuoteLoadResult parse_option_quotes(std::string_view text, const QuoteSchema& schema = {});

std::vector<RatePoint> load_rates(const std::filesystem::path& path, const RateBounds& bounds = {});
ProxyPanel load_proxies(const std::filesystem::path& path);

std::string write_quotes(const std::vector<OptionQuote>& quotes);
std::string write_rates(const std::vector<RatePoint>& rates);
std::string write_proxies(const ProxyPanel& panel);

/// Keeps quotes with at least `min_days_to_expiry` trading days remaining.
std::vector<OptionQuote> filter_quotes(const std::vector<OptionQuote>& quotes, const TradingCalendar& calendar,
                                       int min_days_to_expiry = 5);

/// Intersects the date sets of all inputs. Throws EmptyIntersection.
AlignedPanel align_calendar(const std::vector<Series>& series);

Series rate_series(const std::vector<RatePoint>& rates);

} // namespace sentivol::io
