// Test-only reference implementations, deliberately independent of the
// library code paths they check.
#pragma once

#include "sentimark/classify.hpp"

#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

namespace sentimark::oracles {

// ---- segmentation: exhaustive enumeration over breakpoint placements ----

inline double naive_cost(std::span<const double> y, std::size_t i, std::size_t j) {
    double mean = 0;
    for (std::size_t t = i; t <= j; ++t)
        mean += y[t - 1];
    mean /= static_cast<double>(j - i + 1);
    double rss = 0;
    for (std::size_t t = i; t <= j; ++t)
        rss += (y[t - 1] - mean) * (y[t - 1] - mean);
    return rss;
}

struct EnumResult {
    double rss = std::numeric_limits<double>::infinity();
    std::vector<std::size_t> breakpoints;
};

inline void enumerate_rec(std::span<const double> y, std::size_t m, std::size_t h_min,
                          std::size_t next_start, std::vector<std::size_t>& current,
                          double rss_so_far, EnumResult& best) {
    const std::size_t n = y.size();
    if (current.size() == m) {
        double total = rss_so_far + naive_cost(y, next_start, n);
        if (total < best.rss) {
            best.rss = total;
            best.breakpoints = current;
        }
        return;
    }
    std::size_t remaining = m - current.size();
    for (std::size_t b = next_start + h_min - 1; b + remaining * h_min <= n; ++b) {
        current.push_back(b);
        enumerate_rec(y, m, h_min, b + 1, current, rss_so_far + naive_cost(y, next_start, b), best);
        current.pop_back();
    }
}

inline EnumResult enumerate_optimal(std::span<const double> y, std::size_t m, std::size_t h_min) {
    EnumResult best;
    std::vector<std::size_t> current;
    enumerate_rec(y, m, h_min, 1, current, 0.0, best);
    return best;
}

// ---- Student t: adaptive-Simpson quadrature of the density ----

inline double t_density(double x, double df) {
    double c = std::lgamma((df + 1) / 2) - std::lgamma(df / 2) -
               0.5 * std::log(df * std::acos(-1.0));
    return std::exp(c - (df + 1) / 2 * std::log1p(x * x / df));
}

inline double t_simpson(double df, double a, double b, double fa, double fb, double fm, double eps,
                        int depth) {
    double m = (a + b) / 2;
    double lm = (a + m) / 2, rm = (m + b) / 2;
    double flm = t_density(lm, df), frm = t_density(rm, df);
    double whole = (b - a) / 6 * (fa + 4 * fm + fb);
    double left = (m - a) / 6 * (fa + 4 * flm + fm);
    double right = (b - m) / 6 * (fm + 4 * frm + fb);
    if (depth <= 0 || std::abs(left + right - whole) < 15 * eps)
        return left + right + (left + right - whole) / 15;
    return t_simpson(df, a, m, fa, fm, flm, eps / 2, depth - 1) +
           t_simpson(df, m, b, fm, fb, frm, eps / 2, depth - 1);
}

// Upper tail for t >= 0 via sf(t) = 0.5 - integral_0^t density.
inline double t_sf_quadrature(double t, double df) {
    double body = t_simpson(df, 0.0, t, t_density(0.0, df), t_density(t, df),
                            t_density(t / 2, df), 1e-12, 40);
    return 0.5 - body;
}

// ---- naive Bayes: posterior with the evidence denominator kept ----

inline Polarity nb_posterior(const NbModel& model, const SparseRow& row,
                             std::array<double, 2>& posteriors) {
    double evidence = 0;
    std::array<double, 2> joint{};
    for (std::size_t c = 0; c < 2; ++c) {
        double p = std::exp(model.class_log_priors[c]);
        for (const auto& [idx, count] : row)
            for (std::uint32_t r = 0; r < count; ++r)
                p *= std::exp(model.feature_log_likelihoods[c][idx]);
        joint[c] = p;
        evidence += p;
    }
    for (std::size_t c = 0; c < 2; ++c)
        posteriors[c] = joint[c] / evidence;
    return posteriors[1] > posteriors[0] ? Polarity::positive : Polarity::negative;
}

// ---- soft-margin SVM: coarse-to-fine grid search over (w, b) ----

inline double svm_grid_minimum(std::span<const SparseRow> rows, std::span<const Polarity> labels,
                               double c_penalty, std::size_t dims) {
    auto objective = [&](const std::vector<double>& w, double b) {
        double obj = 0;
        for (double wj : w)
            obj += wj * wj;
        obj *= 0.5;
        for (std::size_t i = 0; i < rows.size(); ++i) {
            double y = labels[i] == Polarity::positive ? 1.0 : -1.0;
            double dot = b;
            for (const auto& [idx, count] : rows[i])
                dot += w[idx] * count;
            double margin = y * dot;
            if (margin < 1) obj += c_penalty * (1 - margin);
        }
        return obj;
    };

    std::vector<double> center(dims, 0.0);
    double b_center = 0;
    double span = 8.0;
    double best = std::numeric_limits<double>::infinity();
    std::vector<double> best_w(dims, 0.0);
    double best_b = 0;
    for (int stage = 0; stage < 12; ++stage) {
        const int steps = 10;
        std::vector<double> w(dims);
        for (int i1 = -steps; i1 <= steps; ++i1) {
            w[0] = center[0] + span * i1 / steps;
            for (int i2 = (dims > 1 ? -steps : 0); i2 <= (dims > 1 ? steps : 0); ++i2) {
                if (dims > 1) w[1] = center[1] + span * i2 / steps;
                for (int i3 = -steps; i3 <= steps; ++i3) {
                    double b = b_center + span * i3 / steps;
                    double obj = objective(w, b);
                    if (obj < best) {
                        best = obj;
                        best_w = w;
                        best_b = b;
                    }
                }
            }
        }
        center = best_w;
        b_center = best_b;
        span *= 0.35;
    }
    return best;
}

} // namespace sentimark::oracles
