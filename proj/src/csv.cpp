#include "sentimark/csv.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>

namespace sentimark::csv {

bool read_record(std::istream& in, std::vector<std::string>& fields) {
    fields.clear();
    std::string field;
    bool any_char = false;
    bool in_quotes = false;

    int ci;
    while ((ci = in.get()) != std::char_traits<char>::eof()) {
        char c = static_cast<char>(ci);
        any_char = true;
        if (in_quotes) {
            if (c == '"') {
                if (in.peek() == '"') {
                    in.get();
                    field.push_back('"');
                } else {
                    in_quotes = false;
                }
            } else {
                field.push_back(c);
            }
            continue;
        }
        switch (c) {
        case ',':
            fields.push_back(std::move(field));
            field.clear();
            break;
        case '\r':
            if (in.peek() == '\n') in.get();
            [[fallthrough]];
        case '\n':
            fields.push_back(std::move(field));
            return true;
        case '"':
            if (field.empty()) {
                in_quotes = true;
            } else {
                field.push_back(c); // stray quote mid-field: keep it
            }
            break;
        default:
            field.push_back(c);
        }
    }
    if (!any_char) return false;
    fields.push_back(std::move(field));
    return true;
}

std::string escape(std::string_view field) {
    bool needs = field.find_first_of(",\"\r\n") != std::string_view::npos;
    if (!needs) return std::string(field);
    std::string out;
    out.reserve(field.size() + 2);
    out.push_back('"');
    for (char c : field) {
        if (c == '"') out.push_back('"');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

void write_record(std::ostream& out, std::span<const std::string> fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out.put(',');
        out << escape(fields[i]);
    }
    out.put('\n');
}

std::string fmt_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

} // namespace sentimark::csv
