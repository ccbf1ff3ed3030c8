#pragma once

#include <stdexcept>
#include <string>

namespace circreg {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidInput : public Error {
public:
    using Error::Error;
};

/// Bandwidth matrix is not symmetric positive definite.
class InvalidBandwidth : public Error {
public:
    using Error::Error;
};

/// Asymptotic formula evaluated where f(x) or l(x) vanishes.
class SingularPoint : public Error {
public:
    using Error::Error;
};

/// Curvature matrix is neither positive nor negative definite.
class IndefiniteCurvature : public Error {
public:
    using Error::Error;
};

/// Every bandwidth candidate was fully penalized.
class NoValidBandwidth : public Error {
public:
    using Error::Error;
};

class DomainError : public Error {
public:
    using Error::Error;
};

/// Rate probe hit an identically zero error curve.
class ProbeInvalid : public Error {
public:
    using Error::Error;
};

class SchemaError : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    ParseError(std::size_t row, const std::string& what)
        : Error("row " + std::to_string(row) + ": " + what), row_(row) {}

    std::size_t row() const noexcept { return row_; }

private:
    std::size_t row_;
};

class InsufficientData : public Error {
public:
    using Error::Error;
};

} // namespace circreg
