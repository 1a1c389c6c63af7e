#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>

namespace sentimark {

// The ten labels of the emotion lexicon: eight basic emotions plus the two
// polarity labels.
enum class Emotion : std::uint8_t {
    anger,
    disgust,
    fear,
    sadness,
    anticipation,
    joy,
    surprise,
    trust,
    positive,
    negative,
};

inline constexpr std::size_t kEmotionCount = 10;

inline constexpr std::array<std::string_view, kEmotionCount> kEmotionNames = {
    "anger", "disgust", "fear",     "sadness",  "anticipation",
    "joy",   "surprise", "trust",   "positive", "negative",
};

std::string_view emotion_name(Emotion e);

// Token -> valence score. Scores may be integers in [-5, 5], plain +/-1, or
// fractional; the scale is the lexicon's own.
struct ValenceLexicon {
    std::string name;
    std::unordered_map<std::string, double> entries;

    double valence(const std::string& token) const {
        auto it = entries.find(token);
        return it == entries.end() ? 0.0 : it->second;
    }
    bool has(const std::string& token) const { return entries.count(token) > 0; }

    // TSV "token<TAB>score". Keys must be lowercase and nonempty, scores
    // finite, and the file nonempty.
    static ValenceLexicon load(std::istream& in, std::string name);
    static ValenceLexicon load_file(const std::string& path, std::string name);
};

// Token -> label set, stored as a bitmask over Emotion.
struct EmotionLexicon {
    std::string name;
    std::unordered_map<std::string, std::uint16_t> entries;

    std::uint16_t labels(const std::string& token) const {
        auto it = entries.find(token);
        return it == entries.end() ? std::uint16_t{0} : it->second;
    }

    // TSV "token<TAB>label", one row per token-label pair.
    static EmotionLexicon load(std::istream& in, std::string name);
    static EmotionLexicon load_file(const std::string& path, std::string name);
};

// Context words that flip or rescale a nearby polarized word.
struct ShifterLexicon {
    std::unordered_set<std::string> negators;
    std::unordered_map<std::string, double> amplifiers;   // weight in (0, 1]
    std::unordered_map<std::string, double> deamplifiers; // weight in (0, 1]

    // TSV "token<TAB>role<TAB>weight", role in {negator, amplifier,
    // deamplifier}. The three sets must be pairwise disjoint; negator
    // weights are ignored.
    static ShifterLexicon load(std::istream& in);
    static ShifterLexicon load_file(const std::string& path);
};

} // namespace sentimark
