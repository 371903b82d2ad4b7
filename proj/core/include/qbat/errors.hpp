#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace qbat {

/// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Band energy below the gap-closing threshold; unit Bloch vector undefined.
struct GapClosingError : Error {
    double k;
    explicit GapClosingError(double k_)
        : Error("band gap closes at k = " + std::to_string(k_)), k(k_) {}
};

/// A numeric evaluation produced NaN or Inf.
struct NonFiniteError : Error {
    using Error::Error;
};

struct InvalidCountError : Error {
    using Error::Error;
};

/// Expression text could not be parsed; offset is a byte index into the input.
struct ParseError : Error {
    std::size_t offset;
    int line;
    int column;
    ParseError(const std::string& what, std::size_t offset_, int line_ = 1, int column_ = -1)
        : Error(what), offset(offset_), line(line_),
          column(column_ >= 0 ? column_ : static_cast<int>(offset_) + 1) {}
};

struct UnboundSymbolError : Error {
    std::string symbol;
    explicit UnboundSymbolError(const std::string& sym)
        : Error("unbound symbol '" + sym + "'"), symbol(sym) {}
};

/// Domain failure during expression evaluation (division by zero, ln of
/// a non-positive value, ...). Evaluation never returns NaN silently.
struct EvalError : Error {
    using Error::Error;
};

struct StepTooLargeError : Error {
    using Error::Error;
};

struct NoDqptError : Error {
    using Error::Error;
};

struct TooFewSamplesError : Error {
    using Error::Error;
};

struct ConfigError : Error {
    using Error::Error;
};

struct IoError : Error {
    using Error::Error;
};

struct MissingColumnError : Error {
    using Error::Error;
};

struct TooFewRowsError : Error {
    using Error::Error;
};

}  // namespace qbat
