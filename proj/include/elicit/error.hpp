#pragma once

#include <stdexcept>
#include <string>

namespace elicit {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An argument lies outside the domain of a transform, score or distribution.
class DomainError : public Error {
public:
    using Error::Error;
};

/// A function evaluation produced a non-finite value.
class EvaluationError : public Error {
public:
    using Error::Error;
};

/// Root or minimum not bracketed by the supplied interval.
class BracketError : public Error {
public:
    using Error::Error;
};

/// Invalid parameters for a catalog entry, score family or distribution.
class ParameterError : public Error {
public:
    using Error::Error;
};

/// An operation's precondition does not hold (e.g. a kink point for finite differences).
class PreconditionError : public Error {
public:
    using Error::Error;
};

/// Skill-score reference is degenerate (zero denominator).
class DegenerateReferenceError : public Error {
public:
    using Error::Error;
};

/// Malformed text encoding, CSV or suite file.
class ParseError : public Error {
public:
    using Error::Error;
};

}  // namespace elicit
