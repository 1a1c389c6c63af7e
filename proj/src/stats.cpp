#include "sentimark/stats.hpp"

#include "sentimark/csv.hpp"
#include "sentimark/errors.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <numeric>

namespace sentimark {

namespace {

constexpr double kMinP = std::numeric_limits<double>::min(); // p is never 0

double clamp_p(double p) {
    return std::min(1.0, std::max(p, kMinP));
}

// Midranks of the pooled sample (1-based average ranks on ties).
std::vector<double> midranks(std::span<const double> pooled) {
    const std::size_t n = pooled.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return pooled[a] < pooled[b]; });

    std::vector<double> ranks(n);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j < n && pooled[order[j]] == pooled[order[i]])
            ++j;
        double rank = static_cast<double>(i + j + 1) / 2.0; // average of ranks i+1 .. j
        for (std::size_t k = i; k < j; ++k)
            ranks[order[k]] = rank;
        i = j;
    }
    return ranks;
}

// Continued fraction for the incomplete beta function (modified Lentz).
double betacf(double a, double b, double x) {
    constexpr int kMaxIter = 500;
    constexpr double kEps = 3e-16;
    constexpr double kFpMin = 1e-300;

    double qab = a + b, qap = a + 1.0, qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::abs(d) < kFpMin) d = kFpMin;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIter; ++m) {
        double m2 = 2.0 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kFpMin) d = kFpMin;
        c = 1.0 + aa / c;
        if (std::abs(c) < kFpMin) c = kFpMin;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kFpMin) d = kFpMin;
        c = 1.0 + aa / c;
        if (std::abs(c) < kFpMin) c = kFpMin;
        d = 1.0 / d;
        double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < kEps) break;
    }
    return h;
}

} // namespace

double regularized_incomplete_beta(double a, double b, double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    double ln_bt = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) +
                   b * std::log1p(-x);
    double bt = std::exp(ln_bt);
    if (x < (a + 1.0) / (a + b + 2.0)) return bt * betacf(a, b, x) / a;
    return 1.0 - bt * betacf(b, a, 1.0 - x) / b;
}

double student_t_sf(double t, double df) {
    if (df <= 0.0) throw DataError("student_t_sf: df must be positive");
    if (std::isnan(t)) return std::numeric_limits<double>::quiet_NaN();
    if (std::isinf(t)) return t > 0 ? 0.0 : 1.0;
    if (t == 0.0) return 0.5;
    double x = df / (df + t * t);
    double tail = 0.5 * regularized_incomplete_beta(df / 2.0, 0.5, x);
    return t > 0 ? tail : 1.0 - tail;
}

double student_t_two_sided_p(double t, double df) {
    return clamp_p(2.0 * student_t_sf(std::abs(t), df));
}

double normal_sf(double z) {
    return 0.5 * std::erfc(z / std::sqrt(2.0));
}

std::string format_p_value(double p) {
    if (p < 1e-15) return "< 1e-15";
    return csv::fmt_double(p);
}

OlsFit ols_simple(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw DataError("ols_simple: length mismatch");
    const std::size_t n = x.size();
    if (n < 3) throw DataError("ols_simple: need at least 3 observations");

    double mx = 0, my = 0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);

    double sxx = 0, syy = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        double dx = x[i] - mx, dy = y[i] - my;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if (sxx == 0.0) throw DataError("ols_simple: zero variance in x");
    if (syy == 0.0) throw DataError("ols_simple: zero variance in y");

    OlsFit fit;
    fit.n = n;
    fit.beta = sxy / sxx;
    fit.alpha = my - fit.beta * mx;
    fit.beta_std = std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
    fit.r2 = fit.beta_std * fit.beta_std;

    fit.residuals.resize(n);
    double rss = 0;
    for (std::size_t i = 0; i < n; ++i) {
        fit.residuals[i] = y[i] - fit.alpha - fit.beta * x[i];
        rss += fit.residuals[i] * fit.residuals[i];
    }

    double df = static_cast<double>(n - 2);
    if (rss <= 0.0) {
        fit.se_beta = 0.0;
        fit.t_stat = fit.beta >= 0 ? std::numeric_limits<double>::infinity()
                                   : -std::numeric_limits<double>::infinity();
        fit.p_value = kMinP;
    } else {
        fit.se_beta = std::sqrt(rss / df / sxx);
        fit.t_stat = fit.beta / fit.se_beta;
        fit.p_value = student_t_two_sided_p(fit.t_stat, df);
    }
    return fit;
}

std::vector<LagRegressionResult> lag_sweep(const DailySeries& x, const DailySeries& y,
                                           std::size_t k_max) {
    if (x.start != y.start || x.size() != y.size())
        throw DataError("lag_sweep: series '" + x.label + "' and '" + y.label +
                        "' are not aligned on the same calendar");
    const std::size_t n = x.size();
    if (n <= k_max + 2)
        throw DataError("lag_sweep: need length > k_max + 2 (" + std::to_string(n) + " <= " +
                        std::to_string(k_max + 2) + ")");

    std::vector<LagRegressionResult> results;
    results.reserve(k_max + 1);
    for (std::size_t k = 0; k <= k_max; ++k) {
        std::span<const double> xs(x.values.data(), n - k);
        std::span<const double> ys(y.values.data() + k, n - k);
        LagRegressionResult r;
        r.label = x.label;
        r.k = k;
        try {
            r.fit = ols_simple(xs, ys);
        } catch (const DataError& e) {
            throw DataError("lag_sweep at k=" + std::to_string(k) + ": " + e.what());
        }
        results.push_back(std::move(r));
    }
    return results;
}

MannWhitneyResult mann_whitney(std::span<const double> a, std::span<const double> b, MwMode mode) {
    const std::size_t na = a.size(), nb = b.size();
    if (na == 0 || nb == 0) throw DataError("mann_whitney: both samples must be nonempty");
    const std::size_t n = na + nb;

    std::vector<double> pooled(a.begin(), a.end());
    pooled.insert(pooled.end(), b.begin(), b.end());
    std::vector<double> ranks = midranks(pooled);

    double rank_sum_a = 0;
    for (std::size_t i = 0; i < na; ++i)
        rank_sum_a += ranks[i];

    MannWhitneyResult res;
    res.u_a = rank_sum_a - static_cast<double>(na) * (static_cast<double>(na) + 1.0) / 2.0;
    res.u_b = static_cast<double>(na) * static_cast<double>(nb) - res.u_a;

    const double mu = static_cast<double>(na) * static_cast<double>(nb) / 2.0;
    const double observed_dev = std::abs(res.u_a - mu);

    bool all_tied = true;
    for (std::size_t i = 1; i < n; ++i)
        if (pooled[i] != pooled[0]) {
            all_tied = false;
            break;
        }
    if (all_tied) {
        res.degenerate = true;
        res.p_value = 1.0;
        res.method = mode == MwMode::normal_approx ? MwMethod::normal_approx : MwMethod::exact;
        return res;
    }

    bool use_exact = mode == MwMode::exact || (mode == MwMode::automatic && n <= 16);
    if (use_exact) {
        if (n > 30) throw DataError("mann_whitney: exact enumeration limited to pooled n <= 30");
        // Every size-na subset of pooled positions is one labeling; count
        // those with |U - mu| at least the observed deviation.
        std::size_t extreme = 0, total = 0;
        double offset = static_cast<double>(na) * (static_cast<double>(na) + 1.0) / 2.0;
        const auto full = static_cast<std::uint32_t>(n);
        for (std::uint32_t mask = 0; mask < (1u << full); ++mask) {
            if (static_cast<std::size_t>(__builtin_popcount(mask)) != na) continue;
            ++total;
            double rs = 0;
            for (std::uint32_t i = 0; i < full; ++i)
                if (mask & (1u << i)) rs += ranks[i];
            double u = rs - offset;
            if (std::abs(u - mu) >= observed_dev - 1e-12) ++extreme;
        }
        res.method = MwMethod::exact;
        res.p_value = clamp_p(static_cast<double>(extreme) / static_cast<double>(total));
        return res;
    }

    // Normal approximation: tie-corrected variance, continuity correction,
    // and an Edgeworth kurtosis term. The plain normal tail is off by up to
    // ~0.02 at pooled sizes near the exact/approx crossover; the fourth-
    // moment term brings the worst case under 0.01 there and vanishes as
    // O(1/n).
    double tie_sum = 0; // sum of t^3 - t over tie groups
    {
        std::vector<double> sorted(pooled);
        std::sort(sorted.begin(), sorted.end());
        std::size_t i = 0;
        while (i < n) {
            std::size_t j = i;
            while (j < n && sorted[j] == sorted[i])
                ++j;
            auto t = static_cast<double>(j - i);
            tie_sum += t * t * t - t;
            i = j;
        }
    }
    const double fa = static_cast<double>(na), fb = static_cast<double>(nb);
    const double nn = static_cast<double>(n);
    double var = (fa * fb / 12.0) * (nn + 1.0 - tie_sum / (nn * (nn - 1.0)));
    res.method = MwMethod::normal_approx;
    if (var <= 0.0) {
        res.degenerate = true;
        res.p_value = 1.0;
        return res;
    }
    if (observed_dev < 0.5) {
        res.p_value = 1.0;
        return res;
    }
    // Exact excess kurtosis of U for tie-free data; with ties this is an
    // upper-magnitude estimate and the term only shrinks.
    double g2 = -(6.0 / 5.0) * (fa * fa + fb * fb + fa * fb + fa + fb) / (fa * fb * (nn + 1.0));
    double zl = -(observed_dev - 0.5) / std::sqrt(var);
    double phi = std::exp(-0.5 * zl * zl) / std::sqrt(2.0 * 3.14159265358979323846);
    double lower_cdf = (1.0 - normal_sf(zl)) - phi * (g2 / 24.0) * (zl * zl * zl - 3.0 * zl);
    res.p_value = clamp_p(2.0 * std::max(0.0, lower_cdf));
    return res;
}

std::vector<PairCheck> check_reported_pairs(std::span<const ReportedPair> rows) {
    std::vector<PairCheck> checks;
    checks.reserve(rows.size());
    for (const auto& row : rows) {
        PairCheck c;
        c.row = row;
        c.expected_r2 = std::round(row.beta_std * row.beta_std * 100.0) / 100.0;
        // Both columns are printed at 2 decimals, so a correctly computed
        // pair can drift apart by up to 0.005 + 0.01*|beta|, at most 0.015
        // anywhere in the statistic's |beta| <= 1 range. Gaps beyond that
        // flat bound are impossible under rounding alone.
        c.consistent = std::abs(row.r2 - row.beta_std * row.beta_std) <= 0.015 + 1e-12;
        checks.push_back(c);
    }
    return checks;
}

std::vector<ReportedPair> read_reported_pairs(std::istream& in) {
    std::vector<std::string> fields;
    if (!csv::read_record(in, fields) || fields.size() < 4 || fields[0] != "lexicon" ||
        fields[1] != "k" || fields[2] != "beta_std" || fields[3] != "r2")
        throw DataError("coefficient table must start with header \"lexicon,k,beta_std,r2[,...]\"");
    std::vector<ReportedPair> rows;
    while (csv::read_record(in, fields)) {
        if (fields.size() == 1 && fields[0].empty()) continue;
        if (fields.size() < 4) throw DataError("coefficient table row needs at least 4 fields");
        ReportedPair p;
        p.label = fields[0];
        try {
            p.k = static_cast<std::size_t>(std::stoul(fields[1]));
            p.beta_std = std::stod(fields[2]);
            p.r2 = std::stod(fields[3]);
        } catch (const std::exception&) {
            throw DataError("unparsable coefficient row for label '" + fields[0] + "'");
        }
        rows.push_back(std::move(p));
    }
    return rows;
}

} // namespace sentimark
