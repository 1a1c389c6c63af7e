#include "sentimark/breaks.hpp"

#include "sentimark/errors.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace sentimark {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Near-tie tolerance when picking a reconstruction path; keeps the
// "earliest break" rule deterministic on flat stretches where float noise
// would otherwise pick an arbitrary placement.
double tie_tol(double best) {
    return 1e-9 * (1.0 + std::abs(best));
}

} // namespace

SegmentCost::SegmentCost(std::span<const double> y) {
    sum_.resize(y.size() + 1, 0.0);
    sumsq_.resize(y.size() + 1, 0.0);
    for (std::size_t k = 0; k < y.size(); ++k) {
        sum_[k + 1] = sum_[k] + y[k];
        sumsq_[k + 1] = sumsq_[k] + y[k] * y[k];
    }
}

// Bellman segmentation over suffixes: dp[k][i] is the minimal RSS of
// splitting y[i..n] into k segments of length >= h_min. Reconstruction then
// walks left to right, taking at each level the earliest boundary that is
// still optimal, which yields the lexicographically smallest breakpoint
// list among ties.
Segmentation optimal_breakpoints(std::span<const double> y, std::size_t m, std::size_t h_min) {
    const std::size_t n = y.size();
    if (h_min < 1) throw DataError("optimal_breakpoints: h_min must be >= 1");
    if ((m + 1) * h_min > n)
        throw DataError("optimal_breakpoints: infeasible m=" + std::to_string(m) +
                        ", h_min=" + std::to_string(h_min) + " for n=" + std::to_string(n));

    SegmentCost cost(y);
    const std::size_t segments = m + 1;

    // dp[k-1][i-1] = min RSS over y[i..n] in k segments; kInf = infeasible.
    std::vector<std::vector<double>> dp(segments, std::vector<double>(n + 2, kInf));
    for (std::size_t i = 1; i + h_min - 1 <= n; ++i)
        dp[0][i] = cost(i, n);
    for (std::size_t k = 2; k <= segments; ++k) {
        for (std::size_t i = 1; i + k * h_min - 1 <= n; ++i) {
            double best = kInf;
            // first segment [i, j]; the rest need (k-1)*h_min days
            for (std::size_t j = i + h_min - 1; j + (k - 1) * h_min <= n; ++j) {
                double total = cost(i, j) + dp[k - 2][j + 1];
                if (total < best) best = total;
            }
            dp[k - 1][i] = best;
        }
    }

    Segmentation result;
    result.rss = dp[segments - 1][1];

    std::size_t i = 1;
    for (std::size_t k = segments; k >= 2; --k) {
        double target = dp[k - 1][i];
        double tol = tie_tol(target);
        for (std::size_t j = i + h_min - 1; j + (k - 1) * h_min <= n; ++j) {
            if (cost(i, j) + dp[k - 2][j + 1] <= target + tol) {
                result.breakpoints.push_back(j);
                i = j + 1;
                break;
            }
        }
    }
    if (result.breakpoints.size() != m)
        throw DataError("optimal_breakpoints: reconstruction failed"); // unreachable
    return result;
}

SegmentationResult select_m_bic(std::span<const double> y, std::size_t m_max, std::size_t h_min) {
    const std::size_t n = y.size();
    if ((m_max + 1) * h_min > n)
        throw DataError("select_m_bic: infeasible m_max=" + std::to_string(m_max) +
                        ", h_min=" + std::to_string(h_min) + " for n=" + std::to_string(n));

    SegmentationResult result;
    result.n = n;
    result.h_min = h_min;

    const double log_n = std::log(static_cast<double>(n));
    double best_bic = kInf;
    for (std::size_t m = 0; m <= m_max; ++m) {
        auto seg = optimal_breakpoints(y, m, h_min);
        SegmentationCandidate c;
        c.m = m;
        c.breakpoints = std::move(seg.breakpoints);
        c.rss = seg.rss;
        double params = static_cast<double>(2 * m + 1);
        c.bic = seg.rss == 0.0 ? -kInf
                               : static_cast<double>(n) * std::log(seg.rss / static_cast<double>(n)) +
                                     params * log_n;
        if (c.bic < best_bic) {
            best_bic = c.bic;
            result.chosen_m = m;
        }
        result.per_m.push_back(std::move(c));
    }
    return result;
}

std::size_t default_h_min(std::size_t n) {
    return static_cast<std::size_t>(std::ceil(0.15 * static_cast<double>(n)));
}

std::vector<double> segment_means(std::span<const double> y,
                                  std::span<const std::size_t> breakpoints) {
    std::vector<double> means(y.size());
    std::size_t begin = 0; // 0-based inclusive
    for (std::size_t s = 0; s <= breakpoints.size(); ++s) {
        std::size_t end = s < breakpoints.size() ? breakpoints[s] : y.size(); // 0-based exclusive
        double sum = 0.0;
        for (std::size_t t = begin; t < end; ++t)
            sum += y[t];
        double mean = sum / static_cast<double>(end - begin);
        for (std::size_t t = begin; t < end; ++t)
            means[t] = mean;
        begin = end;
    }
    return means;
}

} // namespace sentimark
