#pragma once

#include "sentimark/dates.hpp"

#include <iosfwd>
#include <span>
#include <string>
#include <unordered_set>
#include <vector>

namespace sentimark {

// One timestamped document. clean_text/tokens start empty and are filled by
// the cleaning and tokenization passes.
struct TweetRecord {
    std::string id;
    Timestamp created_at;
    std::string raw_text;
    std::string clean_text;
    std::vector<std::string> tokens;
};

struct MarketQuote {
    Date date;
    double close = 0; // index points, > 0
};

struct StopList {
    std::unordered_set<std::string> words;

    bool contains(const std::string& w) const { return words.count(w) > 0; }

    // One lowercase token per line; blank lines ignored.
    static StopList load(std::istream& in);
    static StopList load_file(const std::string& path);
};

enum class TweetFormat { jsonl, csv };

struct TweetParseResult {
    std::vector<TweetRecord> records;
    std::size_t skipped = 0; // malformed lines/rows dropped with a warning
};

// JSONL: one object per line with string keys id, created_at (ISO-8601),
// text. CSV: header "id,created_at,text", RFC-4180 quoting. Malformed
// records are skipped and counted; an unreadable stream is fatal.
TweetParseResult parse_tweets(std::istream& in, TweetFormat format);

// Inverse of parse_tweets for id / created_at / raw_text.
void serialize_tweets(std::ostream& out, std::span<const TweetRecord> records, TweetFormat format);

// Lowercases; removes URL ("http://", "https://", "www."), mention ("@") and
// hashtag ("#") tokens whole; replaces remaining punctuation with spaces;
// collapses whitespace. Idempotent.
std::string clean_text(std::string_view raw);

// Whitespace split of already-cleaned text; never yields empty tokens.
std::vector<std::string> tokenize(std::string_view clean);

// Order-preserving filter. drop_numbers additionally removes digit-only tokens.
std::vector<std::string> remove_stopwords(std::span<const std::string> tokens, const StopList& stops,
                                          bool drop_numbers);

// CSV with header "date,close". Duplicate dates, non-positive closes and
// unparsable dates are fatal. Result is sorted ascending by date.
std::vector<MarketQuote> parse_market(std::istream& in);

} // namespace sentimark
