#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace heavytail {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed or invalid input data. `line()` is 1-based, 0 when not tied to a line.
class InputError : public Error {
public:
    explicit InputError(const std::string& what, std::size_t line = 0)
        : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Zero variance or otherwise degenerate samples.
class DegenerateInputError : public Error {
public:
    using Error::Error;
};

/// Too few samples for the requested operation.
class InsufficientDataError : public Error {
public:
    using Error::Error;
};

/// Argument outside the documented domain of an operation.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Numerical scheme failure: instability, overflow, negative density.
class NumericalError : public Error {
public:
    using Error::Error;
};

/// Euler-Maruyama stiffness guard tripped.
class StiffnessError : public NumericalError {
public:
    StiffnessError(std::size_t step, double x, double drift_step)
        : NumericalError("stiffness guard tripped at step " + std::to_string(step) + ", x = " +
                         std::to_string(x) + ", |f(x)|*dt = " + std::to_string(drift_step)),
          step_(step), x_(x) {}
    std::size_t step() const noexcept { return step_; }
    double x() const noexcept { return x_; }

private:
    std::size_t step_;
    double x_;
};

}  // namespace heavytail
