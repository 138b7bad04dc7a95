#pragma once

#include <stdexcept>
#include <string>

namespace laqcc {

// Bad arguments, malformed files, contract violations. CLI exit code 1.
struct ValidationError : std::runtime_error {
    explicit ValidationError(const std::string &msg) : std::runtime_error(msg) {}
};

// Use of a dead qubit, width mismatch between states, etc. CLI exit code 1.
struct UsageError : std::runtime_error {
    explicit UsageError(const std::string &msg) : std::runtime_error(msg) {}
};

// Engine width limit exceeded. CLI exit code 2.
struct CapacityError : std::runtime_error {
    explicit CapacityError(const std::string &msg) : std::runtime_error(msg) {}
};

// Forcing a zero-probability measurement outcome.
struct BranchError : std::runtime_error {
    explicit BranchError(const std::string &msg) : std::runtime_error(msg) {}
};

// Recycling a qubit that is still entangled.
struct RecycleError : std::runtime_error {
    explicit RecycleError(const std::string &msg) : std::runtime_error(msg) {}
};

// An oracle or input does not satisfy a model assumption (e.g. not a quadratic phase).
struct ModelError : std::runtime_error {
    explicit ModelError(const std::string &msg) : std::runtime_error(msg) {}
};

}  // namespace laqcc
