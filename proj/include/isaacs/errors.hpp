#ifndef ISAACS_ERRORS_HPP
#define ISAACS_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace isaacs {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Argument outside the range where the quantity is defined or convergent.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Adaptive quadrature could not reach the requested tolerance.
class NonConverged : public Error {
public:
    NonConverged(const std::string& what, double value, double error)
        : Error(what), value_(value), error_(error) {}
    double value() const { return value_; }
    double error() const { return error_; }

private:
    double value_;
    double error_;
};

/// Endpoint signs of a root bracket are not opposite.
class BracketFailure : public Error {
public:
    using Error::Error;
};

class NoRoot : public Error {
public:
    using Error::Error;
};

/// The operator cannot be evaluated classically at this point (cusp).
class SingularityAtPoint : public Error {
public:
    using Error::Error;
};

class CFLViolation : public Error {
public:
    using Error::Error;
};

class InsufficientScales : public Error {
public:
    using Error::Error;
};

class BarrierViolation : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

class IOError : public Error {
public:
    using Error::Error;
};

} // namespace isaacs

#endif
