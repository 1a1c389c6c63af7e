#pragma once

#include <stdexcept>
#include <string>

namespace sentimark {

// Bad or missing configuration. The CLI maps this to exit code 2.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Invalid or inconsistent input data, or a violated precondition at run
// time. The CLI maps this to exit code 1.
class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace sentimark
