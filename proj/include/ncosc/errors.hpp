#pragma once

#include <stdexcept>
#include <string>

namespace ncosc {

// Base for every error raised by the library. Derived types carry the
// category; the message names the offending quantity.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DomainError : public Error {
public:
    using Error::Error;
};

class ConstraintViolation : public Error {
public:
    ConstraintViolation(const std::string& what, double residual)
        : Error(what), residual_(residual) {}
    double residual() const noexcept { return residual_; }

private:
    double residual_;
};

class ProfileMismatch : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    ParseError(const std::string& what, int line)
        : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
    int line() const noexcept { return line_; }

private:
    int line_;
};

class NonPolynomialCase : public Error {
public:
    using Error::Error;
};

class OutOfValidatedDomain : public Error {
public:
    using Error::Error;
};

class NoConvergence : public Error {
public:
    using Error::Error;
};

class ToleranceNotMet : public Error {
public:
    ToleranceNotMet(const std::string& what, double achieved)
        : Error(what + " (achieved error " + std::to_string(achieved) + ")"), achieved_(achieved) {}
    double achieved() const noexcept { return achieved_; }

private:
    double achieved_;
};

// Raised when θ_nc or Ω_nc (and hence c) would be complex at the requested
// time. horizon() is the time at which the offending radicand crosses zero.
class OutsideRealityWindow : public Error {
public:
    OutsideRealityWindow(const std::string& what, double horizon)
        : Error(what), horizon_(horizon) {}
    double horizon() const noexcept { return horizon_; }

private:
    double horizon_;
};

class StepUnderflow : public Error {
public:
    using Error::Error;
};

class InvalidLabel : public Error {
public:
    using Error::Error;
};

class UnsupportedK : public Error {
public:
    using Error::Error;
};

class ConstraintGuard : public Error {
public:
    using Error::Error;
};

}  // namespace ncosc
