#include "sentimark/ingest.hpp"

#include "sentimark/csv.hpp"
#include "sentimark/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace sentimark {

namespace {

bool is_ascii_punct(char c) {
    return std::ispunct(static_cast<unsigned char>(c)) != 0;
}

bool is_ascii_space(char c) {
    return std::isspace(static_cast<unsigned char>(c)) != 0;
}

bool starts_with(std::string_view s, std::string_view prefix) {
    return s.substr(0, prefix.size()) == prefix;
}

// Tokens removed whole during cleaning: links, mentions, hashtags.
bool is_dropped_chunk(std::string_view chunk) {
    return starts_with(chunk, "http://") || starts_with(chunk, "https://") ||
           starts_with(chunk, "www.") || starts_with(chunk, "@") || starts_with(chunk, "#");
}

std::optional<TweetRecord> record_from_fields(std::string&& id, std::string_view created_at,
                                              std::string&& text) {
    auto ts = Timestamp::parse(created_at);
    if (!ts) return std::nullopt;
    TweetRecord rec;
    rec.id = std::move(id);
    rec.created_at = *ts;
    rec.raw_text = std::move(text);
    return rec;
}

} // namespace

StopList StopList::load(std::istream& in) {
    StopList sl;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        for (char& c : line) {
            if (is_ascii_space(c))
                throw DataError("stop list line " + std::to_string(line_no) +
                                ": entry contains whitespace");
            c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        }
        sl.words.insert(line);
    }
    return sl;
}

StopList StopList::load_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open stop list: " + path);
    return load(in);
}

TweetParseResult parse_tweets(std::istream& in, TweetFormat format) {
    if (!in) throw DataError("unreadable tweet stream");
    TweetParseResult result;

    if (format == TweetFormat::jsonl) {
        std::string line;
        while (std::getline(in, line)) {
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (line.empty()) continue;
            auto j = nlohmann::json::parse(line, nullptr, /*allow_exceptions=*/false);
            if (j.is_discarded() || !j.is_object() || !j.contains("id") || !j.contains("created_at") ||
                !j.contains("text") || !j["id"].is_string() || !j["created_at"].is_string() ||
                !j["text"].is_string()) {
                ++result.skipped;
                continue;
            }
            auto rec = record_from_fields(j["id"].get<std::string>(),
                                          j["created_at"].get_ref<const std::string&>(),
                                          j["text"].get<std::string>());
            if (!rec) {
                ++result.skipped;
                continue;
            }
            result.records.push_back(std::move(*rec));
        }
        if (in.bad()) throw DataError("I/O error while reading tweet stream");
        return result;
    }

    // CSV
    std::vector<std::string> fields;
    if (!csv::read_record(in, fields) || fields != std::vector<std::string>{"id", "created_at", "text"})
        throw DataError("tweet CSV must start with header \"id,created_at,text\"");
    while (csv::read_record(in, fields)) {
        if (fields.size() == 1 && fields[0].empty()) continue; // blank line
        if (fields.size() != 3) {
            ++result.skipped;
            continue;
        }
        auto rec = record_from_fields(std::move(fields[0]), fields[1], std::move(fields[2]));
        if (!rec) {
            ++result.skipped;
            continue;
        }
        result.records.push_back(std::move(*rec));
    }
    if (in.bad()) throw DataError("I/O error while reading tweet stream");
    return result;
}

void serialize_tweets(std::ostream& out, std::span<const TweetRecord> records, TweetFormat format) {
    if (format == TweetFormat::jsonl) {
        for (const auto& r : records) {
            nlohmann::ordered_json j;
            j["id"] = r.id;
            j["created_at"] = r.created_at.to_string();
            j["text"] = r.raw_text;
            out << j.dump() << '\n';
        }
        return;
    }
    out << "id,created_at,text\n";
    for (const auto& r : records) {
        const std::string row[] = {r.id, r.created_at.to_string(), r.raw_text};
        csv::write_record(out, row);
    }
}

std::string clean_text(std::string_view raw) {
    // Lowercase ASCII first so the drop-prefixes match case-insensitively.
    std::string lower(raw);
    for (char& c : lower)
        c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));

    std::string out;
    out.reserve(lower.size());
    std::size_t i = 0;
    const std::size_t n = lower.size();
    while (i < n) {
        while (i < n && is_ascii_space(lower[i])) ++i;
        std::size_t start = i;
        while (i < n && !is_ascii_space(lower[i])) ++i;
        if (i == start) break;
        std::string_view chunk(lower.data() + start, i - start);
        if (is_dropped_chunk(chunk)) continue;
        for (char c : chunk) {
            if (is_ascii_punct(c)) c = ' ';
            out.push_back(c);
        }
        out.push_back(' ');
    }

    // Collapse whitespace runs introduced by punctuation replacement.
    std::string collapsed;
    collapsed.reserve(out.size());
    bool pending_space = false;
    for (char c : out) {
        if (is_ascii_space(c)) {
            pending_space = !collapsed.empty();
        } else {
            if (pending_space) collapsed.push_back(' ');
            pending_space = false;
            collapsed.push_back(c);
        }
    }
    return collapsed;
}

std::vector<std::string> tokenize(std::string_view clean) {
    std::vector<std::string> tokens;
    std::size_t i = 0;
    const std::size_t n = clean.size();
    while (i < n) {
        while (i < n && is_ascii_space(clean[i])) ++i;
        std::size_t start = i;
        while (i < n && !is_ascii_space(clean[i])) ++i;
        if (i > start) tokens.emplace_back(clean.substr(start, i - start));
    }
    return tokens;
}

std::vector<std::string> remove_stopwords(std::span<const std::string> tokens, const StopList& stops,
                                          bool drop_numbers) {
    std::vector<std::string> kept;
    kept.reserve(tokens.size());
    for (const auto& t : tokens) {
        if (stops.contains(t)) continue;
        if (drop_numbers && !t.empty() &&
            std::all_of(t.begin(), t.end(),
                        [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
            continue;
        kept.push_back(t);
    }
    return kept;
}

std::vector<MarketQuote> parse_market(std::istream& in) {
    if (!in) throw DataError("unreadable market stream");
    std::vector<std::string> fields;
    if (!csv::read_record(in, fields) || fields != std::vector<std::string>{"date", "close"})
        throw DataError("market CSV must start with header \"date,close\"");

    std::vector<MarketQuote> quotes;
    while (csv::read_record(in, fields)) {
        if (fields.size() == 1 && fields[0].empty()) continue;
        if (fields.size() != 2)
            throw DataError("market CSV row has " + std::to_string(fields.size()) +
                            " fields, expected 2");
        MarketQuote q;
        q.date = Date::parse_or_throw(fields[0]);
        try {
            std::size_t used = 0;
            q.close = std::stod(fields[1], &used);
            if (used != fields[1].size()) throw std::invalid_argument("trailing junk");
        } catch (const std::exception&) {
            throw DataError("unparsable close '" + fields[1] + "' on " + fields[0]);
        }
        if (!(q.close > 0))
            throw DataError("non-positive close " + fields[1] + " on " + fields[0]);
        quotes.push_back(q);
    }
    if (in.bad()) throw DataError("I/O error while reading market stream");

    std::sort(quotes.begin(), quotes.end(),
              [](const MarketQuote& a, const MarketQuote& b) { return a.date < b.date; });
    for (std::size_t i = 1; i < quotes.size(); ++i)
        if (quotes[i].date == quotes[i - 1].date)
            throw DataError("duplicate date " + quotes[i].date.to_string() + " in market data");
    return quotes;
}

} // namespace sentimark
