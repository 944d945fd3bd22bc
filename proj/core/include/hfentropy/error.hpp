#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hfentropy {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input text (CSV rows, config files).
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line)
        : Error(what + " (line " + std::to_string(line) + ")"), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// A domain type invariant does not hold.
class ValidationError : public Error {
public:
    using Error::Error;
};

/// An operation precondition does not hold for the given input.
class InputError : public Error {
public:
    using Error::Error;
};

/// Invalid process or generator parameters.
class SpecError : public Error {
public:
    using Error::Error;
};

/// Rescaled entropies are undefined because the first-order entropy vanishes.
class RescalingError : public Error {
public:
    using Error::Error;
};

/// Requested string form or order has no closed-form measure.
class NotImplementedError : public Error {
public:
    using Error::Error;
};

class UnsupportedOrderError : public Error {
public:
    using Error::Error;
};

/// ARMA estimation failed. Carries the best objective reached before giving up.
class FitError : public Error {
public:
    FitError(const std::string& what, int p, int q, double best_objective, int iterations)
        : Error(what), p_(p), q_(q), best_objective_(best_objective), iterations_(iterations) {}

    int p() const noexcept { return p_; }
    int q() const noexcept { return q_; }
    double best_objective() const noexcept { return best_objective_; }
    int iterations() const noexcept { return iterations_; }

private:
    int p_;
    int q_;
    double best_objective_;
    int iterations_;
};

class SelectionError : public Error {
public:
    using Error::Error;
};

class DecompositionError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace hfentropy
