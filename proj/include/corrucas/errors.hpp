#pragma once

#include <stdexcept>
#include <string>

namespace corrucas {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// A profile that cannot be normalized or has a vanishing segment.
class DegenerateProfile : public Error {
public:
    using Error::Error;
};

class IncompatibleProfiles : public Error {
public:
    using Error::Error;
};

/// Moment order k + l beyond the fourth-order expansion.
class UnsupportedOrder : public Error {
public:
    using Error::Error;
};

class ConvergenceFailure : public Error {
public:
    ConvergenceFailure(const std::string& what, double achieved_error)
        : Error(what), achieved_error_(achieved_error) {}

    double achieved_error() const noexcept { return achieved_error_; }

private:
    double achieved_error_;
};

/// A force curve that is identically zero.
class DegenerateCurve : public Error {
public:
    using Error::Error;
};

class UnsupportedValidation : public Error {
public:
    using Error::Error;
};

} // namespace corrucas
