#pragma once

#include <stdexcept>
#include <string>

namespace aglab {

// Caller passed something outside an operation's precondition.
class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A construction (sequence search, instance builder) could not be completed.
class ConstructionFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// The requested quantity has no exact route for this input; use Monte Carlo.
class Unsupported : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// An internal consistency assertion failed (analytics mismatch, drift, ...).
class ConsistencyError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

// Malformed or unknown experiment configuration.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace aglab
