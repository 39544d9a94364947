#ifndef QCFL_ERRORS_HPP
#define QCFL_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace qcfl {

/// Base class of all library errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input: bad artifact files, tables violating their laws.
class ValidationError : public Error {
public:
    using Error::Error;
};

/// A weight value handed to a domain it does not belong to.
class DomainMismatchError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

/// Text that does not parse; carries the 1-based line number.
class ParseError : public ValidationError {
public:
    ParseError(const std::string& message, std::size_t line)
        : ValidationError("line " + std::to_string(line) + ": " + message), line_(line) {}

    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

/// An enumeration that provably or practically does not terminate
/// (infinitely many derivations, or budget exhausted).
class DivergenceError : public Error {
public:
    using Error::Error;
};

/// A stated precondition of an operation does not hold.
class PreconditionError : public Error {
public:
    using Error::Error;
};

} // namespace qcfl

#endif
