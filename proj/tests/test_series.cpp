#include "sentimark/series.hpp"

#include "sentimark/errors.hpp"
#include "sentimark/rng.hpp"

#include <doctest.h>

#include <cmath>
#include <sstream>

using namespace sentimark;

namespace {

Date d(const char* iso) {
    return Date::parse_or_throw(iso);
}

Timestamp ts(const char* iso) {
    return *Timestamp::parse(iso);
}

} // namespace

TEST_SUITE_BEGIN("series");

TEST_CASE("daily_mean averages by UTC date") {
    std::vector<std::pair<Timestamp, double>> scored = {
        {ts("2020-01-01T08:00:00Z"), 1.0},
        {ts("2020-01-01T20:00:00Z"), 3.0},
        {ts("2020-01-02T12:00:00Z"), 5.0},
    };
    auto s = daily_mean(scored, DateRange(d("2020-01-01"), d("2020-01-02")),
                        MissingDayPolicy::fail, "x");
    REQUIRE(s.size() == 2);
    CHECK(s.values[0] == doctest::Approx(2.0));
    CHECK(s.values[1] == doctest::Approx(5.0));
}

TEST_CASE("daily_mean empty-day policies") {
    std::vector<std::pair<Timestamp, double>> scored = {
        {ts("2020-01-01T08:00:00Z"), 2.0},
        {ts("2020-01-03T08:00:00Z"), 6.0},
    };
    DateRange range(d("2020-01-01"), d("2020-01-03"));
    CHECK_THROWS_WITH_AS(daily_mean(scored, range, MissingDayPolicy::fail, "x"),
                         doctest::Contains("2020-01-02"), DataError);
    auto filled = daily_mean(scored, range, MissingDayPolicy::interpolate, "x");
    CHECK(filled.values[1] == doctest::Approx(4.0));

    // missing boundary cannot be interpolated
    DateRange wider(d("2019-12-31"), d("2020-01-03"));
    CHECK_THROWS_AS(daily_mean(scored, wider, MissingDayPolicy::interpolate, "x"), DataError);
}

TEST_CASE("daily_mean is order invariant") {
    SplitMix64 rng(42);
    std::vector<std::pair<Timestamp, double>> scored;
    Date start = d("2020-03-01");
    for (int i = 0; i < 300; ++i) {
        std::int64_t day = static_cast<std::int64_t>(rng.below(10));
        Timestamp t{(start.days() + day) * 86400 + static_cast<std::int64_t>(rng.below(86400))};
        scored.emplace_back(t, rng.normal());
    }
    DateRange range(start, start + 9);
    auto a = daily_mean(scored, range, MissingDayPolicy::interpolate, "x");
    rng.shuffle(scored);
    auto b = daily_mean(scored, range, MissingDayPolicy::interpolate, "x");
    for (std::size_t i = 0; i < a.size(); ++i)
        CHECK(a.values[i] == doctest::Approx(b.values[i]).epsilon(1e-12));
}

TEST_CASE("zscore hits mean 0 sd 1 within 1e-12 and is idempotent") {
    DailySeries s{d("2020-01-01"), {1, 2, 3}, "x"};
    auto z = zscore(s);
    CHECK(z.values[0] == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(z.values[1] == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(z.values[2] == doctest::Approx(1.0).epsilon(1e-12));

    SplitMix64 rng(9);
    for (int rep = 0; rep < 50; ++rep) {
        DailySeries r{d("2020-01-01"), {}, "r"};
        for (int i = 0; i < 100; ++i)
            r.values.push_back(rng.normal(3.0, 7.0));
        auto rz = zscore(r);
        double mean = 0, ss = 0;
        for (double v : rz.values)
            mean += v;
        mean /= static_cast<double>(rz.size());
        for (double v : rz.values)
            ss += (v - mean) * (v - mean);
        double sd = std::sqrt(ss / static_cast<double>(rz.size() - 1));
        CHECK(std::abs(mean) < 1e-12);
        CHECK(std::abs(sd - 1.0) < 1e-12);

        auto rzz = zscore(rz);
        for (std::size_t i = 0; i < rz.size(); ++i)
            CHECK(std::abs(rzz.values[i] - rz.values[i]) < 1e-12);
    }

    DailySeries flat{d("2020-01-01"), {5, 5, 5}, "flat"};
    CHECK_THROWS_WITH_AS(zscore(flat), doctest::Contains("zero variance"), DataError);
    DailySeries single{d("2020-01-01"), {5}, "one"};
    CHECK_THROWS_AS(zscore(single), DataError);
}

TEST_CASE("interpolate_calendar fills weekend gaps linearly") {
    std::vector<MarketQuote> quotes = {
        {d("2020-01-03"), 100.0}, // Friday
        {d("2020-01-06"), 106.0}, // Monday
    };
    auto s = interpolate_calendar(quotes, DateRange(d("2020-01-03"), d("2020-01-06")));
    REQUIRE(s.size() == 4);
    CHECK(s.values[0] == doctest::Approx(100.0));
    CHECK(s.values[1] == doctest::Approx(102.0));
    CHECK(s.values[2] == doctest::Approx(104.0));
    CHECK(s.values[3] == doctest::Approx(106.0));

    CHECK_THROWS_WITH_AS(
        interpolate_calendar(quotes, DateRange(d("2020-01-02"), d("2020-01-06"))),
        doctest::Contains("anchor"), DataError);
}

TEST_CASE("interpolation preserves quoted values and stays within anchor bounds") {
    SplitMix64 rng(31);
    for (int rep = 0; rep < 60; ++rep) {
        Date start = d("2020-01-01");
        std::int64_t len = 10 + static_cast<std::int64_t>(rng.below(40));
        std::vector<MarketQuote> quotes;
        quotes.push_back({start, 50 + 100 * rng.next_double()});
        for (std::int64_t day = 1; day < len - 1; ++day)
            if (rng.next_double() < 0.5)
                quotes.push_back({start + day, 50 + 100 * rng.next_double()});
        quotes.push_back({start + len - 1, 50 + 100 * rng.next_double()});

        auto s = interpolate_calendar(quotes, DateRange(start, start + len - 1));
        for (const auto& q : quotes)
            CHECK(s.values[static_cast<std::size_t>(q.date - start)] == q.close);
        // every non-quoted day sits between its anchors
        for (std::size_t i = 0, qi = 0; i < s.size(); ++i) {
            if (qi + 1 < quotes.size() && s.date_at(i) == quotes[qi + 1].date) ++qi;
            if (s.date_at(i) == quotes[qi].date) continue;
            double lo = std::min(quotes[qi].close, quotes[qi + 1].close);
            double hi = std::max(quotes[qi].close, quotes[qi + 1].close);
            CHECK(s.values[i] >= lo - 1e-12);
            CHECK(s.values[i] <= hi + 1e-12);
        }
    }
}

TEST_CASE("split_periods matches the study window arithmetic") {
    DailySeries s{d("2019-10-01"), std::vector<double>(244, 0.0), "x"};
    for (std::size_t i = 0; i < s.values.size(); ++i)
        s.values[i] = static_cast<double>(i);
    auto split = split_periods(s, d("2020-02-21"));
    CHECK(split.period_a.size() == 143);
    CHECK(split.period_b.size() == 101);
    CHECK(split.period_a.start == d("2019-10-01"));
    CHECK(split.period_b.start == d("2020-02-21"));
    CHECK(split.period_a.end() + 1 == split.break_date);
    CHECK(split.period_a.size() + split.period_b.size() == s.size());
    CHECK(split.period_b.values.front() == doctest::Approx(143.0));

    CHECK_THROWS_AS(split_periods(s, d("2019-10-01")), DataError);
    CHECK_THROWS_AS(split_periods(s, d("2020-06-01")), DataError);
    auto last = split_periods(s, d("2020-05-31"));
    CHECK(last.period_b.size() == 1);
}

TEST_CASE("series csv round-trip") {
    DailySeries s{d("2020-02-28"), {1.5, -2.25, 0.0, 1e-9}, "x"};
    std::ostringstream out;
    write_series_csv(out, s);
    std::istringstream in(out.str());
    auto back = read_series_csv(in, "x");
    CHECK(back.start == s.start);
    REQUIRE(back.size() == s.size());
    for (std::size_t i = 0; i < s.size(); ++i)
        CHECK(back.values[i] == s.values[i]);

    std::istringstream gap("date,value\n2020-01-01,1\n2020-01-03,2\n");
    CHECK_THROWS_WITH_AS(read_series_csv(gap, "g"), doctest::Contains("gap"), DataError);

    std::istringstream naned("date,value\n2020-01-01,nan\n");
    CHECK_THROWS_WITH_AS(read_series_csv(naned, "n"), doctest::Contains("non-finite"), DataError);
}

TEST_SUITE_END();
