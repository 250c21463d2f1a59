#pragma once

#include <stdexcept>
#include <string>

namespace orderest {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation
/// (nonpositive scale data, λ below the identity value, t off the ancillary support).
class DomainError : public Error {
public:
    using Error::Error;
};

/// Inconsistent or incomplete configuration (custom loss without W', mode mismatch, bad options).
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Conditional density with zero, infinite or non-finite normalizer.
class DegenerateConditional : public Error {
public:
    DegenerateConditional(double ancillary, const std::string& what)
        : Error(what), ancillary_(ancillary) {}
    double ancillary() const noexcept { return ancillary_; }

private:
    double ancillary_;
};

/// Integral whose tails never become negligible, or that overflows.
class DivergenceError : public Error {
public:
    using Error::Error;
};

/// Root bracket could not be found: the first-order function keeps one sign.
class NoSignChange : public Error {
public:
    using Error::Error;
};

/// Sampled ψ_λ contradicts the monotonicity direction predicted by the likelihood ratio.
class InconsistencyError : public Error {
public:
    using Error::Error;
};

/// Fewer than two usable grid points for a likelihood-ratio check.
class InsufficientSupport : public Error {
public:
    using Error::Error;
};

class LookupError : public Error {
public:
    using Error::Error;
};

/// A named estimator that is well defined as a formula but does not exist for the model.
class NonexistenceError : public Error {
public:
    using Error::Error;
};

/// Estimators or models that cannot be combined (different mode or target).
class IncompatibleError : public Error {
public:
    using Error::Error;
};

/// Envelope with lower(t) > upper(t).
class InvalidBounds : public Error {
public:
    using Error::Error;
};

/// Non-finite loss value during simulation.
class OverflowError : public Error {
public:
    using Error::Error;
};

/// Unusable input data (constant columns, too few rows, non-finite values).
class DataError : public Error {
public:
    using Error::Error;
};

}  // namespace orderest
