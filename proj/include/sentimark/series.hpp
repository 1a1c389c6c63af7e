#pragma once

#include "sentimark/dates.hpp"
#include "sentimark/ingest.hpp"

#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace sentimark {

// Gap-free date-indexed series: one value per consecutive calendar day.
struct DailySeries {
    Date start;
    std::vector<double> values;
    std::string label;

    std::size_t size() const { return values.size(); }
    Date date_at(std::size_t i) const { return start + static_cast<std::int64_t>(i); }
    Date end() const { return start + static_cast<std::int64_t>(values.size()) - 1; }
    DateRange range() const { return DateRange(start, end()); }
};

enum class MissingDayPolicy { fail, interpolate };

// Per-day arithmetic mean of scores bucketed by UTC date. Days inside the
// range with no documents are fatal under `fail`, linearly filled under
// `interpolate` (boundary days must still be populated).
DailySeries daily_mean(std::span<const std::pair<Timestamp, double>> scored, DateRange range,
                       MissingDayPolicy policy, std::string label);

// Standardizes to mean 0, sample (n-1) standard deviation 1. Zero variance
// is fatal.
DailySeries zscore(const DailySeries& series);

// Quoted days keep their close; gap days (weekends, festive days) get the
// linear interpolation between the nearest quoted neighbors. Both range
// boundaries must be quoted.
DailySeries interpolate_calendar(std::span<const MarketQuote> quotes, DateRange range,
                                 std::string label = "market");

struct PeriodSplit {
    DailySeries period_a; // days strictly before the break date
    DailySeries period_b; // days from the break date onward
    Date break_date;
};

// break_date must lie strictly inside the series range.
PeriodSplit split_periods(const DailySeries& series, Date break_date);

// "date,value" CSV, one row per calendar day.
void write_series_csv(std::ostream& out, const DailySeries& series);
DailySeries read_series_csv(std::istream& in, std::string label);

} // namespace sentimark
