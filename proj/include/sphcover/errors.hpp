#pragma once

#include <stdexcept>
#include <string>

namespace sphcover {

/// Base class for every failure raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Input violates a documented precondition (bad dimension, non-unit axis, ...).
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// A point coincides with the inversion center.
class DegenerateInput : public Error {
public:
    using Error::Error;
};

/// The inversion center lies on a cap boundary; the caller must rotate first.
class CenterOnBoundary : public Error {
public:
    using Error::Error;
};

class RotationExhausted : public Error {
public:
    using Error::Error;
};

/// Every enlarged problem stayed covered; the uncovered region is too thin to resolve.
class AlphaExhausted : public Error {
public:
    using Error::Error;
};

class MalformedTrace : public Error {
public:
    using Error::Error;
};

/// A QP instance has an all-zero constraint row.
class ZeroRow : public Error {
public:
    using Error::Error;
};

/// A QP instance whose polytope lies in a hyperplane (antipodal constraint pair).
class DegenerateInstance : public Error {
public:
    using Error::Error;
};

class MaxIterations : public Error {
public:
    using Error::Error;
};

class NoCoveringFound : public Error {
public:
    using Error::Error;
};

/// Text input could not be parsed; carries the 1-based line number (0 if unknown).
class ParseError : public Error {
public:
    ParseError(std::size_t line, const std::string& what)
        : Error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line)
    {
    }

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

} // namespace sphcover
