#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace dvs {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// CSV ingestion
struct ParseError : Error {
    ParseError(std::size_t line, const std::string& what)
        : Error("parse error at line " + std::to_string(line) + ": " + what), line(line) {}
    std::size_t line;
};

struct OrderError : Error {
    OrderError(std::size_t line, const std::string& what)
        : Error("order error at line " + std::to_string(line) + ": " + what), line(line) {}
    std::size_t line;
};

struct TooShortError : Error {
    using Error::Error;
};

struct DegenerateSplitError : Error {
    using Error::Error;
};

// visibility / numeric
struct LengthError : Error {
    using Error::Error;
};

struct NonFiniteError : Error {
    using Error::Error;
};

struct DimensionMismatchError : Error {
    using Error::Error;
};

// network
struct ShapeError : Error {
    using Error::Error;
};

struct TapeMismatchError : Error {
    using Error::Error;
};

// baselines
struct KTooLargeError : Error {
    using Error::Error;
};

struct SingularSystemError : Error {
    using Error::Error;
};

struct DegenerateWalkError : Error {
    using Error::Error;
};

// metrics
struct LengthMismatchError : Error {
    using Error::Error;
};

// configuration / CLI
struct ConfigError : Error {
    using Error::Error;
};

struct IoError : Error {
    using Error::Error;
};

}  // namespace dvs
