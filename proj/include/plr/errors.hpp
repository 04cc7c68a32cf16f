#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace plr {

// Syntactically malformed input file; line numbers are 1-based.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& where, std::size_t line, const std::string& what)
        : std::runtime_error(where + ":" + std::to_string(line) + ": " + what), line_(line) {}
    explicit ParseError(const std::string& what) : std::runtime_error(what) {}

    std::size_t line() const { return line_; }

private:
    std::size_t line_ = 0;
};

// Well-formed input that violates a semantic rule (non-monotone time, out-of-range value).
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A frame contained nothing measurable.
class MeasurementError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace plr
