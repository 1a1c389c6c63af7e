#include "sentimark/csv.hpp"

#include "sentimark/rng.hpp"

#include <doctest.h>

#include <charconv>
#include <sstream>

using namespace sentimark;

TEST_SUITE_BEGIN("csv");

TEST_CASE("records round-trip through quoting") {
    SplitMix64 rng(777);
    const std::string atoms = "ab,\"\n\r x;";
    for (int rep = 0; rep < 300; ++rep) {
        std::vector<std::vector<std::string>> records;
        std::size_t n_records = 1 + rng.below(5);
        for (std::size_t r = 0; r < n_records; ++r) {
            std::vector<std::string> fields;
            std::size_t n_fields = 1 + rng.below(4);
            for (std::size_t f = 0; f < n_fields; ++f) {
                std::string field;
                for (std::size_t c = 0, len = rng.below(8); c < len; ++c)
                    field.push_back(atoms[rng.below(atoms.size())]);
                fields.push_back(std::move(field));
            }
            records.push_back(std::move(fields));
        }

        std::ostringstream out;
        for (const auto& rec : records)
            csv::write_record(out, rec);

        std::istringstream in(out.str());
        std::vector<std::string> fields;
        std::size_t r = 0;
        while (csv::read_record(in, fields)) {
            REQUIRE(r < records.size());
            CHECK(fields == records[r]);
            ++r;
        }
        CHECK(r == records.size());
    }
}

TEST_CASE("escape quotes only when needed") {
    CHECK(csv::escape("plain") == "plain");
    CHECK(csv::escape("with space") == "with space");
    CHECK(csv::escape("a,b") == "\"a,b\"");
    CHECK(csv::escape("say \"hi\"") == "\"say \"\"hi\"\"\"");
    CHECK(csv::escape("line\nbreak") == "\"line\nbreak\"");
    CHECK(csv::escape("") == "");
}

TEST_CASE("fmt_double is shortest round-trip") {
    SplitMix64 rng(888);
    for (int rep = 0; rep < 2000; ++rep) {
        double v = (rng.next_double() - 0.5) * std::pow(10.0, static_cast<double>(rng.below(20)) - 10.0);
        std::string s = csv::fmt_double(v);
        double back = 0;
        auto res = std::from_chars(s.data(), s.data() + s.size(), back);
        REQUIRE(res.ec == std::errc());
        CHECK(back == v);
    }
    CHECK(csv::fmt_double(0.0) == "0");
    CHECK(csv::fmt_double(1.5) == "1.5");
    CHECK(csv::fmt_double(-std::numeric_limits<double>::infinity()) == "-inf");
}

TEST_SUITE_END();
