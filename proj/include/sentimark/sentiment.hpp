#pragma once

#include "sentimark/lexicon.hpp"

#include <array>
#include <cstdint>
#include <span>
#include <string>

namespace sentimark {

// Per-document label counts over the ten emotion labels.
struct EmotionVector {
    std::array<std::int64_t, kEmotionCount> counts{};

    std::int64_t operator[](Emotion e) const { return counts[static_cast<std::size_t>(e)]; }
    std::int64_t& operator[](Emotion e) { return counts[static_cast<std::size_t>(e)]; }
};

// Sum of the valences of matched tokens; unmatched tokens contribute 0.
double score_unigram(std::span<const std::string> tokens, const ValenceLexicon& lex);

// counts[l] = number of tokens whose label set contains l.
EmotionVector score_emotions(std::span<const std::string> tokens, const EmotionLexicon& lex);

// positive count minus negative count — the polarity reading of an emotion
// lexicon.
double polarity(const EmotionVector& v);

// Valence-shifted polarity. For each polarized token, the `window` preceding
// tokens are scanned for shifters: with g negators, amplifier weight sum A
// and deamplifier weight sum D, the contribution is
//     valence * (-1)^g * max(0.1, 1 + A - D)
// and the document score is the contribution sum divided by sqrt(token
// count). Tokens that carry a valence never also act as shifters.
double score_shifted(std::span<const std::string> tokens, const ValenceLexicon& lex,
                     const ShifterLexicon& shifters, int window = 4);

} // namespace sentimark
