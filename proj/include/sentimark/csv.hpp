#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace sentimark::csv {

// Reads one RFC-4180 record (quoted fields may contain commas, doubled
// quotes and embedded newlines). Returns false once the stream is exhausted.
bool read_record(std::istream& in, std::vector<std::string>& fields);

// Quotes a field only when it needs it.
std::string escape(std::string_view field);

void write_record(std::ostream& out, std::span<const std::string> fields);

// Shortest decimal string that round-trips the value. Deterministic.
std::string fmt_double(double v);

} // namespace sentimark::csv
