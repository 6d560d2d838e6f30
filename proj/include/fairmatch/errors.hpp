#pragma once

#include <stdexcept>
#include <string>

namespace fairmatch {

/// Base of all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent input (CLI exit code 2).
struct InputError : Error {
    using Error::Error;
};

/// A solver could not produce a result (CLI exit code 3).
struct SolveError : Error {
    using Error::Error;
};

struct ParseError : InputError {
    ParseError(const std::string& what, int line = -1, int column = -1)
        : InputError(what), line(line), column(column) {}
    int line;
    int column;
};

struct DimensionMismatch : InputError {
    using InputError::InputError;
};
struct DemandMismatch : InputError {
    using InputError::InputError;
};
struct NonPositiveDemand : InputError {
    using InputError::InputError;
};
struct NonPositiveScale : InputError {
    using InputError::InputError;
};
struct NotBivalued : InputError {
    using InputError::InputError;
};
struct UnnormalizablePrices : InputError {
    using InputError::InputError;
};
struct InfeasibleBudget : InputError {
    using InputError::InputError;
};
struct InfeasibleEarnings : InputError {
    using InputError::InputError;
};
struct NonIntegerDemand : InputError {
    using InputError::InputError;
};

struct WrongArity : SolveError {
    using SolveError::SolveError;
};
struct TooLarge : SolveError {
    using SolveError::SolveError;
};
struct NotFound : SolveError {
    using SolveError::SolveError;
};
struct NoPoGridPoint : SolveError {
    using SolveError::SolveError;
};

}  // namespace fairmatch
