#pragma once

#include "sentimark/series.hpp"

#include <span>
#include <string>
#include <vector>

namespace sentimark {

struct OlsFit {
    double alpha = 0;    // intercept, response units
    double beta = 0;     // slope, response units per predictor unit
    double beta_std = 0; // standardized slope = Pearson correlation
    double r2 = 0;       // beta_std^2
    double se_beta = 0;
    double t_stat = 0;
    double p_value = 1; // two-sided, always in (0, 1]
    std::size_t n = 0;
    std::vector<double> residuals;
};

// Simple least squares y = alpha + beta * x. Needs n >= 3 and positive
// variance in both series.
OlsFit ols_simple(std::span<const double> x, std::span<const double> y);

struct LagRegressionResult {
    std::string label; // predictor series label
    std::size_t k = 0; // lag in days: x_{t-k} predicts y_t
    OlsFit fit;
};

// Fits ols_simple(x shifted back by k, y) for every k = 0..k_max. Series
// must share the same calendar; length must exceed k_max + 2.
std::vector<LagRegressionResult> lag_sweep(const DailySeries& x, const DailySeries& y,
                                           std::size_t k_max);

// Upper-tail survival function of Student's t with df degrees of freedom,
// via the regularized incomplete beta function.
double student_t_sf(double t, double df);
double student_t_two_sided_p(double t, double df);

// Regularized incomplete beta I_x(a, b), continued-fraction evaluation.
double regularized_incomplete_beta(double a, double b, double x);

// Standard normal upper tail.
double normal_sf(double z);

// Human-facing rendering: p below 1e-15 prints as "< 1e-15"; machine
// outputs always carry the numeric value instead.
std::string format_p_value(double p);

enum class MwMode { automatic, exact, normal_approx };
enum class MwMethod { exact, normal_approx };

struct MannWhitneyResult {
    double u_a = 0;
    double u_b = 0;
    double p_value = 1; // two-sided
    MwMethod method = MwMethod::exact;
    bool degenerate = false; // all pooled values tied
};

// Rank-sum test with midranks. Exact p by enumerating all C(|a|+|b|, |a|)
// labelings when the pooled size is at most 16 (mode automatic), otherwise
// normal approximation with continuity correction and tie-corrected
// variance. Two-sided p counts |U - n_a*n_b/2| at least as extreme as
// observed.
MannWhitneyResult mann_whitney(std::span<const double> a, std::span<const double> b,
                               MwMode mode = MwMode::automatic);

// ---- consistency checking of reported coefficient tables ----

struct ReportedPair {
    std::string label;
    std::size_t k = 0;
    double beta_std = 0;
    double r2 = 0;
};

struct PairCheck {
    ReportedPair row;
    double expected_r2 = 0; // beta_std^2 rounded to 2 decimals
    bool consistent = false;
};

// Verifies r2 against round(beta_std^2, 2) for each printed pair, allowing
// only the drift that 2-decimal rounding of both columns can introduce
// (at most 0.015 for |beta_std| <= 1). Flagged rows cannot come from any
// correctly computed fit.
std::vector<PairCheck> check_reported_pairs(std::span<const ReportedPair> rows);

// "label,k,beta_std,r2" with a header, as produced by the lag-sweep CSV.
std::vector<ReportedPair> read_reported_pairs(std::istream& in);

} // namespace sentimark
