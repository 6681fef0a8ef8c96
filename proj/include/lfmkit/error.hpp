#pragma once

#include <stdexcept>
#include <string>

namespace lfmkit {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A value lies outside the mathematical domain of an operation
/// (non-positive level, participation rate outside (0, 1], negative lag).
class DomainError : public Error {
public:
    using Error::Error;
};

/// Too few observations for the requested computation.
class InsufficientDataError : public Error {
public:
    using Error::Error;
};

/// A requested year or window lies outside a series' coverage.
class RangeError : public Error {
public:
    using Error::Error;
};

/// Two series do not share the required common years.
class AlignmentError : public Error {
public:
    using Error::Error;
};

/// Malformed text input.  Carries the 1-based line number when known.
class ParseError : public Error {
public:
    ParseError(const std::string& what, int line = 0)
        : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}

    [[nodiscard]] int line() const noexcept { return line_; }

private:
    int line_;
};

class DuplicateError : public Error {
public:
    using Error::Error;
};

/// Missing years inside an annual record set.
class ContiguityError : public Error {
public:
    using Error::Error;
};

class LookupError : public Error {
public:
    using Error::Error;
};

class ConflictError : public Error {
public:
    using Error::Error;
};

/// A series failed validation with error-severity findings.
class ValidationError : public Error {
public:
    using Error::Error;
};

/// Regressor with zero variance.
class DegenerateRegressorError : public Error {
public:
    using Error::Error;
};

/// Inconsistent model or search specification.
class SpecificationError : public Error {
public:
    using Error::Error;
};

/// Data that make an objective unusable everywhere.
class DataError : public Error {
public:
    using Error::Error;
};

}  // namespace lfmkit
