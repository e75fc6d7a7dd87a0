#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace membranes {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidResolution : public Error {
public:
    using Error::Error;
};

/// An expression evaluated to a non-finite value at some node.
class SamplingError : public Error {
public:
    SamplingError(const std::string& what, std::size_t node)
        : Error(what), node_(node) {}
    std::size_t node() const noexcept { return node_; }

private:
    std::size_t node_;
};

class GridMismatch : public Error {
public:
    using Error::Error;
};

class InvalidOperator : public Error {
public:
    using Error::Error;
};

/// Boundary data incompatible with the obstacle (e.g. f < phi on the boundary for a lower obstacle).
class InfeasibleProblem : public Error {
public:
    using Error::Error;
};

class PreconditionError : public Error {
public:
    using Error::Error;
};

/// Syntax error in an expression or config file. `position` is a character
/// offset for expressions and a 1-based line number for config files.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t position)
        : Error(what), position_(position) {}
    std::size_t position() const noexcept { return position_; }

private:
    std::size_t position_;
};

}  // namespace membranes
