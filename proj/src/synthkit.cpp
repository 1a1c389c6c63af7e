#include "sentimark/synthkit.hpp"

#include "sentimark/errors.hpp"
#include "sentimark/rng.hpp"

#include <algorithm>
#include <cmath>

namespace sentimark {

namespace {

// Separate stream tag so corpus token draws never alias the step-series
// noise draws made from the same seed.
constexpr std::uint64_t kCorpusStreamTag = 0x746f6b656e73ULL; // "tokens"

const std::vector<std::string> kFillerWords = {
    "the", "a",  "of",   "in",    "on",   "and",  "to",    "for",
    "it",  "is", "this", "about", "with", "from", "today", "news",
};

} // namespace

void RegimeSchedule::validate(std::int64_t n_days) const {
    if (n_days < 1) throw DataError("regime schedule: need at least one day");
    if (segment_means.empty()) throw DataError("regime schedule: no segment means");
    if (segment_means.size() != break_indices.size() + 1)
        throw DataError("regime schedule: need exactly one more mean than break indices");
    if (noise_sd < 0) throw DataError("regime schedule: negative noise sd");
    std::int64_t prev = 1;
    for (std::int64_t b : break_indices) {
        if (b <= prev) throw DataError("regime schedule: break indices must be increasing and > 1");
        if (b > n_days) throw DataError("regime schedule: break index past the last day");
        prev = b;
    }
    for (double m : segment_means)
        if (!std::isfinite(m)) throw DataError("regime schedule: non-finite segment mean");
}

double RegimeSchedule::mean_for_day(std::int64_t day_1based) const {
    std::size_t regime = 0;
    for (std::int64_t b : break_indices) {
        if (day_1based >= b)
            ++regime;
        else
            break;
    }
    return segment_means[regime];
}

DailySeries gen_step_series(std::int64_t n_days, const RegimeSchedule& schedule, Date start,
                            std::string label) {
    schedule.validate(n_days);
    DailySeries s;
    s.start = start;
    s.label = std::move(label);
    s.values.reserve(static_cast<std::size_t>(n_days));
    SplitMix64 rng(schedule.seed);
    for (std::int64_t day = 1; day <= n_days; ++day)
        s.values.push_back(schedule.mean_for_day(day) +
                           (schedule.noise_sd > 0 ? rng.normal(0.0, schedule.noise_sd) : 0.0));
    return s;
}

std::vector<TweetRecord> gen_corpus(std::int64_t n_days, const RegimeSchedule& schedule, Date start,
                                    const ValenceLexicon& lex, std::int64_t docs_per_day) {
    schedule.validate(n_days);
    if (docs_per_day < 1) throw DataError("gen_corpus: docs_per_day must be >= 1");

    std::vector<std::string> pos_tokens, neg_tokens;
    double pos_sum = 0, neg_sum = 0;
    for (const auto& [token, valence] : lex.entries) {
        if (valence > 0) {
            pos_tokens.push_back(token);
            pos_sum += valence;
        } else if (valence < 0) {
            neg_tokens.push_back(token);
            neg_sum += valence;
        }
    }
    if (pos_tokens.empty() || neg_tokens.empty())
        throw DataError("gen_corpus: lexicon '" + lex.name +
                        "' must contain both positive and negative valences");
    // Deterministic iteration order regardless of hash-map layout.
    std::sort(pos_tokens.begin(), pos_tokens.end());
    std::sort(neg_tokens.begin(), neg_tokens.end());
    const double mean_pos = pos_sum / static_cast<double>(pos_tokens.size());
    const double mean_neg = neg_sum / static_cast<double>(neg_tokens.size());

    std::vector<std::string> fillers;
    for (const auto& w : kFillerWords)
        if (!lex.has(w)) fillers.push_back(w);

    // Day targets reproduce gen_step_series with the same seed.
    DailySeries targets = gen_step_series(n_days, schedule, start, lex.name);
    SplitMix64 rng(schedule.seed ^ kCorpusStreamTag);

    constexpr std::int64_t kPolarPerDoc = 6;
    constexpr std::int64_t kFillerPerDoc = 4;
    const std::int64_t spacing = std::max<std::int64_t>(1, 86400 / docs_per_day);

    std::vector<TweetRecord> corpus;
    corpus.reserve(static_cast<std::size_t>(n_days * docs_per_day));
    std::int64_t next_id = 0;

    for (std::int64_t day = 0; day < n_days; ++day) {
        double target = targets.values[static_cast<std::size_t>(day)];
        // Solve E[score] = K*(q*mean_pos + (1-q)*mean_neg) = target for the
        // positive-draw probability q; targets outside the achievable range
        // saturate.
        double q = (target / static_cast<double>(kPolarPerDoc) - mean_neg) / (mean_pos - mean_neg);
        q = std::clamp(q, 0.0, 1.0);

        for (std::int64_t d = 0; d < docs_per_day; ++d) {
            TweetRecord rec;
            rec.id = "syn" + std::to_string(next_id++);
            rec.created_at.seconds = (start.days() + day) * 86400 + d * spacing;

            std::vector<std::string> words;
            words.reserve(kPolarPerDoc + kFillerPerDoc);
            for (std::int64_t p = 0; p < kPolarPerDoc; ++p) {
                const auto& pool = rng.next_double() < q ? pos_tokens : neg_tokens;
                words.push_back(pool[rng.below(pool.size())]);
            }
            for (std::int64_t f = 0; f < kFillerPerDoc; ++f)
                words.push_back(fillers[rng.below(fillers.size())]);
            rng.shuffle(words);

            std::string text;
            for (const auto& w : words) {
                if (!text.empty()) text += ' ';
                text += w;
            }
            // Decorations the cleaning pass must strip.
            switch (next_id % 5) {
            case 0: text += " #daily"; break;
            case 1: text += " @someone"; break;
            case 2: text += " https://example.com/x"; break;
            default: break;
            }
            rec.raw_text = std::move(text);
            corpus.push_back(std::move(rec));
        }
    }
    return corpus;
}

} // namespace sentimark
