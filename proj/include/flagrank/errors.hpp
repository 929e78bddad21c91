#pragma once

#include <stdexcept>
#include <string>

namespace flagrank {

// Base class for all library errors.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed shape text or a shape violating its invariants.
struct ShapeError : Error {
    explicit ShapeError(const std::string& msg) : Error(msg) {}
    // byte offset into the shape text where parsing failed, or npos
    std::size_t position = std::string::npos;
    ShapeError(const std::string& msg, std::size_t pos) : Error(msg), position(pos) {}
};

// Precondition violation on an operation (bad argument ranges, wrong mode, ...).
struct UsageError : Error {
    explicit UsageError(const std::string& msg) : Error(msg) {}
};

// Problem size exceeds a configured cap and --force was not given.
struct CapError : Error {
    explicit CapError(const std::string& msg) : Error(msg) {}
};

// Exact-arithmetic cross-checks disagreed (two primes, specialization vs limit, ...).
struct InconsistencyError : Error {
    explicit InconsistencyError(const std::string& msg) : Error(msg) {}
};

// Random sampling kept hitting a degenerate configuration.
struct DegenerateSampleError : Error {
    explicit DegenerateSampleError(const std::string& msg) : Error(msg) {}
};

} // namespace flagrank
