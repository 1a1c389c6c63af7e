#include "sentimark/lexicon.hpp"

#include "sentimark/errors.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <istream>
#include <vector>

namespace sentimark {

namespace {

// Splits a TSV line; trims a trailing '\r'.
std::vector<std::string> tsv_fields(std::string line) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::vector<std::string> fields;
    std::size_t start = 0;
    for (;;) {
        std::size_t tab = line.find('\t', start);
        if (tab == std::string::npos) {
            fields.push_back(line.substr(start));
            return fields;
        }
        fields.push_back(line.substr(start, tab - start));
        start = tab + 1;
    }
}

void require_valid_key(const std::string& token, const std::string& where) {
    if (token.empty()) throw DataError(where + ": empty token");
    for (char c : token) {
        if (std::isupper(static_cast<unsigned char>(c)))
            throw DataError(where + ": token '" + token + "' is not lowercase");
        if (std::isspace(static_cast<unsigned char>(c)))
            throw DataError(where + ": token '" + token + "' contains whitespace");
    }
}

double parse_weight(const std::string& s, const std::string& where) {
    try {
        std::size_t used = 0;
        double v = std::stod(s, &used);
        if (used != s.size()) throw std::invalid_argument("trailing junk");
        if (!std::isfinite(v)) throw std::invalid_argument("not finite");
        return v;
    } catch (const std::exception&) {
        throw DataError(where + ": unparsable number '" + s + "'");
    }
}

} // namespace

std::string_view emotion_name(Emotion e) {
    return kEmotionNames[static_cast<std::size_t>(e)];
}

ValenceLexicon ValenceLexicon::load(std::istream& in, std::string name) {
    ValenceLexicon lex;
    lex.name = std::move(name);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        auto fields = tsv_fields(std::move(line));
        if (fields.size() == 1 && fields[0].empty()) continue;
        std::string where = "valence lexicon '" + lex.name + "' line " + std::to_string(line_no);
        if (fields.size() != 2) throw DataError(where + ": expected token<TAB>score");
        require_valid_key(fields[0], where);
        double score = parse_weight(fields[1], where);
        lex.entries[fields[0]] = score;
    }
    if (lex.entries.empty())
        throw DataError("valence lexicon '" + lex.name + "' has no entries");
    return lex;
}

ValenceLexicon ValenceLexicon::load_file(const std::string& path, std::string name) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open valence lexicon: " + path);
    return load(in, std::move(name));
}

EmotionLexicon EmotionLexicon::load(std::istream& in, std::string name) {
    EmotionLexicon lex;
    lex.name = std::move(name);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        auto fields = tsv_fields(std::move(line));
        if (fields.size() == 1 && fields[0].empty()) continue;
        std::string where = "emotion lexicon '" + lex.name + "' line " + std::to_string(line_no);
        if (fields.size() != 2) throw DataError(where + ": expected token<TAB>label");
        require_valid_key(fields[0], where);
        std::uint16_t bit = 0;
        for (std::size_t i = 0; i < kEmotionCount; ++i) {
            if (fields[1] == kEmotionNames[i]) {
                bit = static_cast<std::uint16_t>(1u << i);
                break;
            }
        }
        if (bit == 0) throw DataError(where + ": unknown label '" + fields[1] + "'");
        lex.entries[fields[0]] |= bit;
    }
    if (lex.entries.empty())
        throw DataError("emotion lexicon '" + lex.name + "' has no entries");
    return lex;
}

EmotionLexicon EmotionLexicon::load_file(const std::string& path, std::string name) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open emotion lexicon: " + path);
    return load(in, std::move(name));
}

ShifterLexicon ShifterLexicon::load(std::istream& in) {
    ShifterLexicon lex;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        auto fields = tsv_fields(std::move(line));
        if (fields.size() == 1 && fields[0].empty()) continue;
        std::string where = "shifter lexicon line " + std::to_string(line_no);
        if (fields.size() != 3) throw DataError(where + ": expected token<TAB>role<TAB>weight");
        require_valid_key(fields[0], where);
        const std::string& token = fields[0];
        const std::string& role = fields[1];
        bool seen = lex.negators.count(token) || lex.amplifiers.count(token) ||
                    lex.deamplifiers.count(token);
        if (seen) throw DataError(where + ": token '" + token + "' assigned more than one role");
        if (role == "negator") {
            lex.negators.insert(token);
        } else if (role == "amplifier" || role == "deamplifier") {
            double w = parse_weight(fields[2], where);
            if (!(w > 0.0 && w <= 1.0))
                throw DataError(where + ": weight " + fields[2] + " outside (0, 1]");
            (role == "amplifier" ? lex.amplifiers : lex.deamplifiers)[token] = w;
        } else {
            throw DataError(where + ": unknown role '" + role + "'");
        }
    }
    return lex;
}

ShifterLexicon ShifterLexicon::load_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open shifter lexicon: " + path);
    return load(in);
}

} // namespace sentimark
