#pragma once

#include <stdexcept>
#include <string>

namespace esl {

// Bad input: violated precondition or malformed parameter. CLI exit code 1.
class ArgumentError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A computation would exceed a configured memory or length budget. CLI exit code 2.
class ResourceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Degenerate algebra (e.g. a balance equation without a unique solution).
class ArithmeticError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// A cache entry is absent, stale or corrupt. Callers recompute.
class CacheMiss : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace esl
