#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace colehopf {

/// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Expression-text syntax error. `offset` is the byte position in the input.
struct ParseError : Error {
    ParseError(const std::string& what, std::size_t offset_)
        : Error(what + " (at byte " + std::to_string(offset_) + ")"), offset(offset_) {}
    std::size_t offset;
};

/// Evaluation failure: unbound parameter or a domain violation producing a
/// non-finite value. `subexpr` is the text of the offending subexpression.
struct EvalError : Error {
    EvalError(const std::string& what, std::string subexpr_)
        : Error(what + " in '" + subexpr_ + "'"), subexpr(std::move(subexpr_)) {}
    std::string subexpr;
};

/// A coefficient vanishes (or a transform degenerates) where the derivation
/// formulas divide by it.
struct DegenerateError : Error {
    using Error::Error;
};

/// Numerical failure: step-size underflow, bracketing failure, non-finite
/// intermediate values.
struct NumericError : Error {
    using Error::Error;
};

}  // namespace colehopf
