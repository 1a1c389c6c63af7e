#pragma once

#include "sentimark/ingest.hpp"
#include "sentimark/lexicon.hpp"
#include "sentimark/series.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace sentimark {

// Piecewise-constant mean schedule. break_indices are 1-based day indices:
// day b is the first day governed by the next segment mean, so
// |segment_means| = |break_indices| + 1 and every index lies strictly inside
// (1, n].
struct RegimeSchedule {
    std::vector<double> segment_means;
    std::vector<std::int64_t> break_indices;
    double noise_sd = 0.0;
    std::uint64_t seed = 0;

    void validate(std::int64_t n_days) const; // throws DataError
    double mean_for_day(std::int64_t day_1based) const;
};

// value_t = regime mean of day t + Gaussian(0, noise_sd) from the seeded
// generator.
DailySeries gen_step_series(std::int64_t n_days, const RegimeSchedule& schedule, Date start,
                            std::string label);

// Synthetic corpus whose per-document expected unigram score under `lex`
// equals the day's scheduled mean. Documents carry link/mention/hashtag
// decorations so the cleaning path is exercised. The lexicon must contain
// both positive and negative valences.
std::vector<TweetRecord> gen_corpus(std::int64_t n_days, const RegimeSchedule& schedule, Date start,
                                    const ValenceLexicon& lex, std::int64_t docs_per_day);

} // namespace sentimark
