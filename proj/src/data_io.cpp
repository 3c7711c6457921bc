#include "sentivol/data_io.hpp"

#include "sentivol/csv.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace sentivol {

void Series::validate() const {
    if (dates.size() != values.size()) {
        fail(ErrorCode::InvariantViolation, "series '" + label + "' has mismatched date/value lengths");
    }
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!std::isfinite(values[i])) {
            fail(ErrorCode::InvariantViolation, "series '" + label + "' has a non-finite value at " +
                                                    format_date(dates[i]));
        }
        if (i > 0 && dates[i] <= dates[i - 1]) {
            fail(ErrorCode::InvariantViolation, "series '" + label + "' dates not strictly increasing at " +
                                                    format_date(dates[i]));
        }
    }
}

namespace io {

std::string_view to_string(OptionKind kind) {
    return kind == OptionKind::Call ? "call" : "put";
}

const std::vector<double>& AlignedPanel::column(std::string_view name) const {
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (names[i] == name) {
            return columns[i];
        }
    }
    fail(ErrorCode::UnknownVariable, std::string(name));
}

Series AlignedPanel::series(std::string_view name) const {
    return Series{std::string(name), dates, column(name)};
}

namespace {

class RowReader {
public:
    RowReader(const std::vector<std::string>& row, int line) : row_(row), line_(line) {}

    Date date(std::size_t col) const {
        const auto d = parse_date(row_[col]);
        if (!d) {
            throw Error(ErrorCode::UnparsableValue, "line " + std::to_string(line_) + ": bad date '" + row_[col] + "'");
        }
        return *d;
    }

    double number(std::size_t col) const {
        double v = 0.0;
        if (!parse_double(row_[col], v) || !std::isfinite(v)) {
            throw Error(ErrorCode::UnparsableValue,
                        "line " + std::to_string(line_) + ": bad number '" + row_[col] + "'");
        }
        return v;
    }

    long long integer(std::size_t col) const {
        long long v = 0;
        if (!parse_long(row_[col], v)) {
            throw Error(ErrorCode::UnparsableValue,
                        "line " + std::to_string(line_) + ": bad integer '" + row_[col] + "'");
        }
        return v;
    }

private:
    const std::vector<std::string>& row_;
    int line_;
};

QuoteLoadResult quotes_from_table(const CsvTable& table, const QuoteSchema& schema) {
    const std::size_t c_trade = table.require_column(schema.trade_date);
    const std::size_t c_expiry = table.require_column(schema.expiry_date);
    const std::size_t c_strike = table.require_column(schema.strike);
    const std::size_t c_kind = table.require_column(schema.kind);
    const std::size_t c_price = table.require_column(schema.price);
    const std::size_t c_spot = table.require_column(schema.underlying_price);

    QuoteLoadResult result;
    result.quotes.reserve(table.rows.size());
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const int line = table.line_numbers[r];
        const RowReader row(table.rows[r], line);
        try {
            OptionQuote q;
            q.trade_date = row.date(c_trade);
            q.expiry_date = row.date(c_expiry);
            q.strike = row.number(c_strike);
            const std::string& kind = table.rows[r][c_kind];
            if (kind == "call") {
                q.kind = OptionKind::Call;
            } else if (kind == "put") {
                q.kind = OptionKind::Put;
            } else {
                throw Error(ErrorCode::UnparsableValue, "line " + std::to_string(line) + ": bad kind '" + kind + "'");
            }
            q.price = row.number(c_price);
            q.underlying_price = row.number(c_spot);
            if (q.expiry_date <= q.trade_date) {
                throw Error(ErrorCode::InvariantViolation,
                            "line " + std::to_string(line) + ": expiry_date not after trade_date");
            }
            if (q.strike <= 0.0 || q.underlying_price <= 0.0 || q.price < 0.0) {
                throw Error(ErrorCode::InvariantViolation,
                            "line " + std::to_string(line) + ": strike/underlying must be > 0 and price >= 0");
            }
            result.quotes.push_back(q);
        } catch (const Error& e) {
            result.rejects.push_back(RowReject{line, e.code(), e.what()});
        }
    }
    return result;
}

} // namespace

QuoteLoadResult load_option_quotes(const std::filesystem::path& path, const QuoteSchema& schema) {
    return quotes_from_table(read_csv(path), schema);
}

QuoteLoadResult parse_option_quotes(std::string_view text, const QuoteSchema& schema) {
    return quotes_from_table(parse_csv(text), schema);
}

std::vector<RatePoint> load_rates(const std::filesystem::path& path, const RateBounds& bounds) {
    const CsvTable table = read_csv(path);
    const std::size_t c_date = table.require_column("date");
    const std::size_t c_rate = table.require_column("rate");
    std::vector<RatePoint> out;
    out.reserve(table.rows.size());
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const int line = table.line_numbers[r];
        const RowReader row(table.rows[r], line);
        RatePoint p{row.date(c_date), row.number(c_rate)};
        if (!(p.rate > bounds.lower && p.rate < bounds.upper)) {
            fail(ErrorCode::InvariantViolation,
                 path.string() + " line " + std::to_string(line) + ": rate outside sanity bounds");
        }
        if (!out.empty() && p.date <= out.back().date) {
            fail(ErrorCode::InvariantViolation,
                 path.string() + " line " + std::to_string(line) + ": dates not strictly increasing");
        }
        out.push_back(p);
    }
    return out;
}

ProxyPanel load_proxies(const std::filesystem::path& path) {
    const CsvTable table = read_csv(path);
    const std::size_t c_date = table.require_column("date");
    const std::size_t c_up = table.require_column("n_up");
    const std::size_t c_down = table.require_column("n_down");
    const std::size_t c_vol = table.require_column("volume");
    const std::size_t c_cap = table.require_column("float_cap");
    const std::size_t c_nav = table.require_column("cef_nav");
    const std::size_t c_px = table.require_column("cef_price");

    ProxyPanel panel;
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const int line = table.line_numbers[r];
        const RowReader row(table.rows[r], line);
        const Date d = row.date(c_date);
        const long long up = row.integer(c_up);
        const long long down = row.integer(c_down);
        const double vol = row.number(c_vol);
        const double cap = row.number(c_cap);
        const double nav = row.number(c_nav);
        const double px = row.number(c_px);
        const std::string where = path.string() + " line " + std::to_string(line);
        if (!panel.dates.empty() && d <= panel.dates.back()) {
            fail(ErrorCode::InvariantViolation, where + ": dates not strictly increasing");
        }
        if (up < 0 || down < 0 || vol < 0.0 || cap <= 0.0 || nav <= 0.0 || px <= 0.0) {
            fail(ErrorCode::InvariantViolation, where + ": proxy value out of domain");
        }
        panel.dates.push_back(d);
        panel.n_up.push_back(up);
        panel.n_down.push_back(down);
        panel.volume.push_back(vol);
        panel.float_cap.push_back(cap);
        panel.cef_nav.push_back(nav);
        panel.cef_price.push_back(px);
    }
    return panel;
}

std::string write_quotes(const std::vector<OptionQuote>& quotes) {
    std::string out = "trade_date,expiry_date,strike,kind,price,underlying_price\n";
    for (const auto& q : quotes) {
        out += format_date(q.trade_date) + "," + format_date(q.expiry_date) + "," + format_double(q.strike) + "," +
               std::string(to_string(q.kind)) + "," + format_double(q.price) + "," +
               format_double(q.underlying_price) + "\n";
    }
    return out;
}

std::string write_rates(const std::vector<RatePoint>& rates) {
    std::string out = "date,rate\n";
    for (const auto& p : rates) {
        out += format_date(p.date) + "," + format_double(p.rate) + "\n";
    }
    return out;
}

std::string write_proxies(const ProxyPanel& panel) {
    std::string out = "date,n_up,n_down,volume,float_cap,cef_nav,cef_price\n";
    for (std::size_t i = 0; i < panel.size(); ++i) {
        out += format_date(panel.dates[i]) + "," + std::to_string(panel.n_up[i]) + "," +
               std::to_string(panel.n_down[i]) + "," + format_double(panel.volume[i]) + "," +
               format_double(panel.float_cap[i]) + "," + format_double(panel.cef_nav[i]) + "," +
               format_double(panel.cef_price[i]) + "\n";
    }
    return out;
}

std::vector<OptionQuote> filter_quotes(const std::vector<OptionQuote>& quotes, const TradingCalendar& calendar,
                                       int min_days_to_expiry) {
    std::vector<OptionQuote> out;
    out.reserve(quotes.size());
    for (const auto& q : quotes) {
        if (calendar.trading_days_between(q.trade_date, q.expiry_date) >= min_days_to_expiry) {
            out.push_back(q);
        }
    }
    return out;
}

AlignedPanel align_calendar(const std::vector<Series>& series) {
    if (series.empty()) {
        fail(ErrorCode::EmptyIntersection, "no input series");
    }
    for (const auto& s : series) {
        s.validate();
    }
    std::vector<Date> common = series.front().dates;
    for (std::size_t k = 1; k < series.size(); ++k) {
        std::vector<Date> next;
        std::set_intersection(common.begin(), common.end(), series[k].dates.begin(), series[k].dates.end(),
                              std::back_inserter(next));
        common = std::move(next);
    }
    if (common.empty()) {
        fail(ErrorCode::EmptyIntersection, "input date sets are disjoint");
    }

    AlignedPanel panel;
    panel.dates = common;
    for (const auto& s : series) {
        std::vector<double> col;
        col.reserve(common.size());
        std::vector<Date> dropped;
        std::size_t j = 0;
        for (std::size_t i = 0; i < s.dates.size(); ++i) {
            if (j < common.size() && s.dates[i] == common[j]) {
                col.push_back(s.values[i]);
                ++j;
            } else {
                dropped.push_back(s.dates[i]);
            }
        }
        panel.names.push_back(s.label);
        panel.columns.push_back(std::move(col));
        panel.dropped[s.label] = std::move(dropped);
    }
    return panel;
}

Series rate_series(const std::vector<RatePoint>& rates) {
    Series s;
    s.label = "rate";
    for (const auto& p : rates) {
        s.dates.push_back(p.date);
        s.values.push_back(p.rate);
    }
    return s;
}

} // namespace io
} // namespace sentivol
