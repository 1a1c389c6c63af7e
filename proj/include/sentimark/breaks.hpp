#pragma once

#include <span>
#include <utility>
#include <vector>

namespace sentimark {

// Residual sum of squares of a constant fit over segments [i, j], 1-based
// inclusive, in O(1) per query from prefix sums.
class SegmentCost {
public:
    explicit SegmentCost(std::span<const double> y);

    double operator()(std::size_t i, std::size_t j) const {
        double s = sum_[j] - sum_[i - 1];
        double len = static_cast<double>(j - i + 1);
        double rss = (sumsq_[j] - sumsq_[i - 1]) - s * s / len;
        return rss > 0.0 ? rss : 0.0;
    }

    std::size_t n() const { return sum_.size() - 1; }

private:
    std::vector<double> sum_;   // sum_[k] = y_1 + ... + y_k
    std::vector<double> sumsq_; // sumsq_[k] = y_1^2 + ... + y_k^2
};

struct Segmentation {
    std::vector<std::size_t> breakpoints; // 1-based last index of each segment but the final one
    double rss = 0.0;
};

// Globally RSS-minimal placement of m breaks with every segment at least
// h_min long. Ties resolve to the lexicographically smallest breakpoint
// list. Infeasible (m + 1) * h_min > n is fatal.
Segmentation optimal_breakpoints(std::span<const double> y, std::size_t m, std::size_t h_min);

struct SegmentationCandidate {
    std::size_t m = 0;
    std::vector<std::size_t> breakpoints;
    double rss = 0.0;
    double bic = 0.0; // -inf sentinel when rss is exactly 0
};

struct SegmentationResult {
    std::size_t n = 0;
    std::size_t h_min = 0;
    std::vector<SegmentationCandidate> per_m; // m = 0 .. m_max
    std::size_t chosen_m = 0;                 // argmin BIC, smallest m on ties
};

// Fits every break count m = 0..m_max and selects the count minimizing
//     BIC(m) = n*ln(rss_m / n) + (2m + 1)*ln(n)
// (m break positions plus m+1 segment means).
SegmentationResult select_m_bic(std::span<const double> y, std::size_t m_max, std::size_t h_min);

// ceil(0.15 * n), the conventional trimming fraction.
std::size_t default_h_min(std::size_t n);

// Per-day fitted segment means implied by a breakpoint list.
std::vector<double> segment_means(std::span<const double> y,
                                  std::span<const std::size_t> breakpoints);

} // namespace sentimark
