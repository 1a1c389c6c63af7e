#include "sentimark/series.hpp"

#include "sentimark/csv.hpp"
#include "sentimark/errors.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>

namespace sentimark {

namespace {

// Linearly fills gaps (NaN slots) between anchor values in place. Boundary
// slots must be anchors.
void fill_gaps_linear(std::vector<double>& values, const std::string& what) {
    const std::size_t n = values.size();
    if (n == 0) return;
    if (std::isnan(values.front()) || std::isnan(values.back()))
        throw DataError(what + ": no anchor value at range boundary");
    std::size_t prev = 0;
    for (std::size_t i = 1; i < n; ++i) {
        if (std::isnan(values[i])) continue;
        if (i > prev + 1) {
            double lo = values[prev], hi = values[i];
            auto span = static_cast<double>(i - prev);
            for (std::size_t k = prev + 1; k < i; ++k)
                values[k] = lo + (hi - lo) * static_cast<double>(k - prev) / span;
        }
        prev = i;
    }
}

} // namespace

DailySeries daily_mean(std::span<const std::pair<Timestamp, double>> scored, DateRange range,
                       MissingDayPolicy policy, std::string label) {
    const auto n = static_cast<std::size_t>(range.length());
    std::vector<double> sums(n, 0.0);
    std::vector<std::size_t> counts(n, 0);

    for (const auto& [ts, score] : scored) {
        Date d = ts.utc_date();
        if (!range.contains(d)) continue;
        auto i = static_cast<std::size_t>(d - range.first);
        sums[i] += score;
        ++counts[i];
    }

    DailySeries out;
    out.start = range.first;
    out.label = std::move(label);
    out.values.resize(n);

    std::vector<Date> missing;
    for (std::size_t i = 0; i < n; ++i) {
        if (counts[i] == 0) {
            out.values[i] = std::nan("");
            missing.push_back(range.first + static_cast<std::int64_t>(i));
        } else {
            out.values[i] = sums[i] / static_cast<double>(counts[i]);
        }
    }

    if (!missing.empty()) {
        if (policy == MissingDayPolicy::fail) {
            std::string msg = "no documents on";
            for (const auto& d : missing) {
                msg += ' ' + d.to_string();
                if (msg.size() > 300) {
                    msg += " ...";
                    break;
                }
            }
            msg += " (" + std::to_string(missing.size()) + " empty days)";
            throw DataError(out.label + ": " + msg);
        }
        fill_gaps_linear(out.values, out.label);
    }
    return out;
}

DailySeries zscore(const DailySeries& series) {
    const std::size_t n = series.size();
    if (n < 2) throw DataError(series.label + ": zscore needs at least 2 values");

    double mean = 0.0;
    for (double v : series.values)
        mean += v;
    mean /= static_cast<double>(n);

    double ss = 0.0;
    for (double v : series.values)
        ss += (v - mean) * (v - mean);
    double sd = std::sqrt(ss / static_cast<double>(n - 1));
    if (sd == 0.0) throw DataError(series.label + ": zero variance, cannot standardize");

    DailySeries out = series;
    for (double& v : out.values)
        v = (v - mean) / sd;
    return out;
}

DailySeries interpolate_calendar(std::span<const MarketQuote> quotes, DateRange range,
                                 std::string label) {
    DailySeries out;
    out.start = range.first;
    out.label = std::move(label);
    out.values.assign(static_cast<std::size_t>(range.length()), std::nan(""));

    for (const auto& q : quotes) {
        if (!range.contains(q.date)) continue;
        out.values[static_cast<std::size_t>(q.date - range.first)] = q.close;
    }
    if (std::isnan(out.values.front()) || std::isnan(out.values.back()))
        throw DataError(out.label + ": no anchor quote at range boundary");
    fill_gaps_linear(out.values, out.label);
    return out;
}

PeriodSplit split_periods(const DailySeries& series, Date break_date) {
    if (!(break_date > series.start && break_date <= series.end()))
        throw DataError(series.label + ": break date " + break_date.to_string() +
                        " not strictly inside " + series.start.to_string() + " .. " +
                        series.end().to_string());

    auto cut = static_cast<std::size_t>(break_date - series.start);
    PeriodSplit split{.period_a = {}, .period_b = {}, .break_date = break_date};
    split.period_a.start = series.start;
    split.period_a.label = series.label + ":A";
    split.period_a.values.assign(series.values.begin(), series.values.begin() + cut);
    split.period_b.start = break_date;
    split.period_b.label = series.label + ":B";
    split.period_b.values.assign(series.values.begin() + cut, series.values.end());
    return split;
}

void write_series_csv(std::ostream& out, const DailySeries& series) {
    out << "date,value\n";
    for (std::size_t i = 0; i < series.size(); ++i) {
        const std::string row[] = {series.date_at(i).to_string(), csv::fmt_double(series.values[i])};
        csv::write_record(out, row);
    }
}

DailySeries read_series_csv(std::istream& in, std::string label) {
    std::vector<std::string> fields;
    if (!csv::read_record(in, fields) || fields != std::vector<std::string>{"date", "value"})
        throw DataError("series CSV must start with header \"date,value\"");

    DailySeries s;
    s.label = std::move(label);
    Date expected{};
    bool first = true;
    while (csv::read_record(in, fields)) {
        if (fields.size() == 1 && fields[0].empty()) continue;
        if (fields.size() != 2) throw DataError("series CSV row needs 2 fields");
        Date d = Date::parse_or_throw(fields[0]);
        if (first) {
            s.start = d;
            first = false;
        } else if (d != expected) {
            throw DataError("series CSV has a gap at " + expected.to_string());
        }
        expected = d + 1;
        double value;
        try {
            value = std::stod(fields[1]);
        } catch (const std::exception&) {
            throw DataError("unparsable value '" + fields[1] + "' on " + fields[0]);
        }
        if (!std::isfinite(value))
            throw DataError("non-finite value '" + fields[1] + "' on " + fields[0]);
        s.values.push_back(value);
    }
    if (s.values.empty()) throw DataError("series CSV has no rows");
    return s;
}

} // namespace sentimark
