#pragma once

#include <stdexcept>
#include <string>

namespace kam {

// Base for every recoverable error raised by the library. Contract
// violations (wrong dimensions, bad indices) throw std::invalid_argument.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Bad run configuration: inverse weights over a zero datum, negative epsilon, ...
class ConfigError : public Error {
public:
    using Error::Error;
};

// A KA score ratio with a zero denominator.
class DegenerateScoreError : public Error {
public:
    using Error::Error;
};

// The solver disagreed with a structural guarantee (e.g. an infeasible KAM
// program for valid data) or ran past its iteration limit.
class SolverError : public Error {
public:
    using Error::Error;
};

} // namespace kam
