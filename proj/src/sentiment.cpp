#include "sentimark/sentiment.hpp"

#include "sentimark/errors.hpp"

#include <cmath>

namespace sentimark {

double score_unigram(std::span<const std::string> tokens, const ValenceLexicon& lex) {
    double sum = 0.0;
    for (const auto& t : tokens)
        sum += lex.valence(t);
    return sum;
}

EmotionVector score_emotions(std::span<const std::string> tokens, const EmotionLexicon& lex) {
    EmotionVector v;
    for (const auto& t : tokens) {
        std::uint16_t mask = lex.labels(t);
        while (mask) {
            unsigned bit = static_cast<unsigned>(__builtin_ctz(mask));
            ++v.counts[bit];
            mask = static_cast<std::uint16_t>(mask & (mask - 1));
        }
    }
    return v;
}

double polarity(const EmotionVector& v) {
    return static_cast<double>(v[Emotion::positive] - v[Emotion::negative]);
}

double score_shifted(std::span<const std::string> tokens, const ValenceLexicon& lex,
                     const ShifterLexicon& shifters, int window) {
    if (window < 0) throw DataError("score_shifted: negative window");
    if (tokens.empty()) return 0.0;

    double sum = 0.0;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        auto it = lex.entries.find(tokens[i]);
        if (it == lex.entries.end()) continue;
        double valence = it->second;

        int negations = 0;
        double amp = 0.0, deamp = 0.0;
        std::size_t begin = i > static_cast<std::size_t>(window) ? i - window : 0;
        for (std::size_t j = begin; j < i; ++j) {
            const auto& w = tokens[j];
            if (lex.has(w)) continue; // valence role wins over shifter role
            if (shifters.negators.count(w)) {
                ++negations;
            } else if (auto a = shifters.amplifiers.find(w); a != shifters.amplifiers.end()) {
                amp += a->second;
            } else if (auto d = shifters.deamplifiers.find(w); d != shifters.deamplifiers.end()) {
                deamp += d->second;
            }
        }

        double sign = (negations % 2 == 0) ? 1.0 : -1.0;
        double scale = std::max(0.1, 1.0 + amp - deamp);
        sum += valence * sign * scale;
    }
    return sum / std::sqrt(static_cast<double>(tokens.size()));
}

} // namespace sentimark
