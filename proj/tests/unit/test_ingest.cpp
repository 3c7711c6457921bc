#include "../support.hpp"

#include "sentivol/data_io.hpp"
#include "sentivol/error.hpp"
#include "sentivol/rng.hpp"

#include <catch_amalgamated.hpp>

#include <algorithm>

using namespace sentivol;
using testing::day;

namespace {

const char* kThreeQuotes = "trade_date,expiry_date,strike,kind,price,underlying_price\n"
                           "2020-01-02,2020-02-21,2.9,put,0.05,3.0\n"
                           "2020-01-02,2020-02-21,3.0,call,0.08,3.0\n"
                           "2020-01-02,2020-03-20,3.1,call,0.06,3.0\n";

} // namespace

TEST_CASE("csv parsing keeps metadata and line numbers") {
    const auto t = parse_csv("# tool: x\n# seed: 3\na,b\n1,2\n\n3,4\n");
    CHECK(t.metadata.at("tool") == "x");
    CHECK(t.metadata.at("seed") == "3");
    REQUIRE(t.rows.size() == 2);
    CHECK(t.line_numbers == std::vector<int>{4, 6});
    CHECK(t.find_column("b") == 1);
    CHECK(t.find_column("c") == -1);
    CHECK_THROWS_AS(t.require_column("c"), Error);
    CHECK_THROWS_AS(parse_csv("a,b\n1\n"), Error);
}

TEST_CASE("strict number parsing and round-trip formatting") {
    double v = 0.0;
    CHECK(parse_double("1.5", v));
    CHECK(v == 1.5);
    CHECK_FALSE(parse_double("1.5x", v));
    CHECK_FALSE(parse_double("", v));
    long long n = 0;
    CHECK(parse_long("-42", n));
    CHECK(n == -42);
    CHECK_FALSE(parse_long("4.2", n));
    Rng rng(7);
    for (int i = 0; i < 1000; ++i) {
        const double x = rng.normal() * std::pow(10.0, rng.uniform(-12, 12));
        double back = 0.0;
        REQUIRE(parse_double(format_double(x), back));
        CHECK(back == x);
    }
}

TEST_CASE("calendar arithmetic over weekdays and holidays") {
    CHECK(format_date(day("2020-02-29")) == "2020-02-29");
    CHECK_FALSE(parse_date("2020-02-30"));
    CHECK_FALSE(parse_date("2020-1-05"));
    CHECK(year_fraction(day("2020-01-01"), day("2021-01-01")) == Catch::Approx(366.0 / 365.0));
    TradingCalendar cal({day("2020-01-06")});
    CHECK_FALSE(cal.is_trading_day(day("2020-01-04"))); // Saturday
    CHECK_FALSE(cal.is_trading_day(day("2020-01-06"))); // holiday
    CHECK(cal.is_trading_day(day("2020-01-07")));
    // Fri 3rd -> Fri 10th: Mon holiday, so Tue..Fri
    CHECK(cal.trading_days_between(day("2020-01-03"), day("2020-01-10")) == 4);
    CHECK(cal.next_trading_day(day("2020-01-03")) == day("2020-01-07"));
}

TEST_CASE("quote loading accepts well-formed rows and rejects bad ones") {
    const auto r = io::parse_option_quotes(kThreeQuotes);
    CHECK(r.quotes.size() == 3);
    CHECK(r.rejects.empty());

    const auto bad = io::parse_option_quotes("trade_date,expiry_date,strike,kind,price,underlying_price\n"
                                             "2020-01-02,2020-02-21,2.9,put,0.05,3.0\n"
                                             "2020-01-02,2020-01-02,3.0,call,0.08,3.0\n");
    CHECK(bad.quotes.size() == 1);
    REQUIRE(bad.rejects.size() == 1);
    CHECK(bad.rejects[0].line == 3);
    CHECK(bad.rejects[0].code == ErrorCode::InvariantViolation);

    CHECK_THROWS_AS(io::parse_option_quotes("trade_date,strike\n2020-01-02,1\n"), Error);
}

TEST_CASE("shuffled column order loads the same quotes") {
    // Reorder columns by an explicit permutation and compare with the canonical load.
    const auto canonical = parse_csv(kThreeQuotes);
    const std::vector<std::size_t> perm{5, 3, 0, 4, 2, 1};
    std::string shuffled;
    auto emit = [&](const std::vector<std::string>& fields) {
        for (std::size_t i = 0; i < perm.size(); ++i) {
            shuffled += (i ? "," : "") + fields[perm[i]];
        }
        shuffled += "\n";
    };
    emit(canonical.header);
    for (const auto& row : canonical.rows) {
        emit(row);
    }
    CHECK(io::parse_option_quotes(shuffled).quotes == io::parse_option_quotes(kThreeQuotes).quotes);
}

TEST_CASE("custom schema maps header names") {
    io::QuoteSchema schema;
    schema.underlying_price = "spot";
    const auto r = io::parse_option_quotes("trade_date,expiry_date,strike,kind,price,spot\n"
                                           "2020-01-02,2020-02-21,2.9,put,0.05,3.0\n",
                                           schema);
    REQUIRE(r.quotes.size() == 1);
    CHECK(r.quotes[0].underlying_price == 3.0);
}

TEST_CASE("filter_quotes drops quotes within a week of expiry") {
    const TradingCalendar cal;
    io::OptionQuote q{day("2020-01-06"), day("2020-01-10"), 3.0, io::OptionKind::Call, 0.1, 3.0}; // 4 trading days
    io::OptionQuote keep = q;
    keep.expiry_date = day("2020-01-20"); // 10 trading days
    const auto out = io::filter_quotes({q, keep}, cal, 5);
    REQUIRE(out.size() == 1);
    CHECK(out[0] == keep);
    CHECK(io::filter_quotes({}, cal, 5).empty());
}

TEST_CASE("filter_quotes is idempotent") {
    Rng rng(11);
    std::vector<io::OptionQuote> quotes;
    const Date base = day("2020-01-01");
    for (int i = 0; i < 500; ++i) {
        const Date trade = base + std::chrono::days(static_cast<int>(rng.uniform(0, 60)));
        const Date expiry = trade + std::chrono::days(1 + static_cast<int>(rng.uniform(0, 30)));
        quotes.push_back({trade, expiry, rng.uniform(2, 4), io::OptionKind::Put, rng.uniform(0, 1), 3.0});
    }
    const TradingCalendar cal({day("2020-01-20"), day("2020-02-17")});
    const auto once = io::filter_quotes(quotes, cal, 5);
    CHECK(io::filter_quotes(once, cal, 5) == once);
    CHECK(once.size() < quotes.size());
}

TEST_CASE("align_calendar intersects and reports drops") {
    Series a{"a", {day("2020-01-02"), day("2020-01-03"), day("2020-01-06")}, {1, 2, 3}};
    Series b{"b", {day("2020-01-02"), day("2020-01-06")}, {10, 30}};
    const auto same = io::align_calendar({a, a});
    CHECK(same.dates == a.dates);

    const auto p = io::align_calendar({a, b});
    CHECK(p.dates == b.dates);
    REQUIRE(p.dropped.at("a").size() == 1);
    CHECK(p.dropped.at("a")[0] == day("2020-01-03"));
    CHECK(p.column("a") == std::vector<double>{1, 3});

    Series c{"c", {day("2021-01-01")}, {1}};
    CHECK_THROWS_AS(io::align_calendar({a, c}), Error);
}

TEST_CASE("align_calendar output is a strictly increasing subset of every input") {
    Rng rng(5);
    std::vector<Series> inputs;
    for (int s = 0; s < 4; ++s) {
        Series x{"s" + std::to_string(s), {}, {}};
        for (int d = 0; d < 200; ++d) {
            if (rng.uniform() < 0.8) {
                x.dates.push_back(day("2020-01-01") + std::chrono::days(d));
                x.values.push_back(rng.normal());
            }
        }
        inputs.push_back(x);
    }
    const auto p = io::align_calendar(inputs);
    REQUIRE_FALSE(p.dates.empty());
    CHECK(std::is_sorted(p.dates.begin(), p.dates.end()));
    CHECK(std::adjacent_find(p.dates.begin(), p.dates.end()) == p.dates.end());
    for (const auto& s : inputs) {
        for (Date d : p.dates) {
            CHECK(std::binary_search(s.dates.begin(), s.dates.end(), d));
        }
    }
}

TEST_CASE("write then load round trips quotes, rates and proxies") {
    const auto dir = testing::scratch_dir("ingest");
    Rng rng(3);
    std::vector<io::OptionQuote> quotes;
    std::vector<io::RatePoint> rates;
    io::ProxyPanel proxies;
    for (int i = 0; i < 50; ++i) {
        const Date d = day("2020-01-01") + std::chrono::days(i);
        quotes.push_back({d, d + std::chrono::days(30), rng.uniform(1, 5),
                          i % 2 ? io::OptionKind::Call : io::OptionKind::Put, rng.uniform(0, 1), rng.uniform(2, 4)});
        rates.push_back({d, rng.uniform(0, 0.05)});
        proxies.dates.push_back(d);
        proxies.n_up.push_back(static_cast<long long>(rng.uniform(0, 2000)));
        proxies.n_down.push_back(static_cast<long long>(rng.uniform(0, 2000)));
        proxies.volume.push_back(rng.uniform(1e9, 1e11));
        proxies.float_cap.push_back(rng.uniform(1e12, 1e13));
        proxies.cef_nav.push_back(rng.uniform(0.9, 1.1));
        proxies.cef_price.push_back(rng.uniform(0.8, 1.0));
    }
    const auto q = io::load_option_quotes(testing::write_file(dir / "q.csv", io::write_quotes(quotes)));
    CHECK(q.quotes == quotes);
    CHECK(io::load_rates(testing::write_file(dir / "r.csv", io::write_rates(rates))) == rates);
    CHECK(io::load_proxies(testing::write_file(dir / "p.csv", io::write_proxies(proxies))) == proxies);
    CHECK_THROWS_AS(io::load_rates(dir / "missing.csv"), Error);
    std::filesystem::remove_all(dir);
}

TEST_CASE("rates outside sanity bounds are rejected") {
    const auto dir = testing::scratch_dir("rates");
    const auto path = testing::write_file(dir / "r.csv", "date,rate\n2020-01-02,0.9\n");
    CHECK_THROWS_AS(io::load_rates(path), Error);
    std::filesystem::remove_all(dir);
}

TEST_CASE("error codes map to exit categories") {
    CHECK(category_of(ErrorCode::ConfigError) == ErrorCategory::Config);
    CHECK(category_of(ErrorCode::MissingColumn) == ErrorCategory::Data);
    CHECK(category_of(ErrorCode::RankDeficient) == ErrorCategory::Numeric);
}
