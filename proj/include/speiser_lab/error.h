#pragma once

#include <stdexcept>
#include <string>

namespace speiser_lab {

/// Raised when an input violates a documented precondition (malformed
/// graph, bad schedule, wrong face shape, ...). The CLI maps it to exit 2.
class InputError : public std::invalid_argument {
public:
    explicit InputError(const std::string& what) : std::invalid_argument(what) {}
};

/// Raised by iterative solvers that exhaust their iteration budget
/// without reaching the requested tolerance. The CLI maps it to exit 3.
class ConvergenceError : public std::runtime_error {
public:
    explicit ConvergenceError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace speiser_lab
