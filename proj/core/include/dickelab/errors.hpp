// errors.hpp — exception hierarchy shared across the library

#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace dickelab {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Requested Hilbert space exceeds the configured dimension cap.
struct CapacityError : Error {
    using Error::Error;
};

// Operator/state built on one basis used with another, or an operator kind
// that the basis reduction cannot represent.
struct BasisError : Error {
    using Error::Error;
};

// ModelSpec invalid or incompatible with the supplied basis.
struct ModelError : Error {
    using Error::Error;
};

// Failure detected while propagating (truncation leak, step underflow,
// trace/positivity loss). Maps to CLI exit code 3.
struct NumericalError : Error {
    using Error::Error;
};

struct TruncationError : NumericalError {
    TruncationError(const std::string& mode_label, double leak, double threshold)
        : NumericalError("Fock truncation leak on mode '" + mode_label + "': top-level occupation " +
                         std::to_string(leak) + " exceeds " + std::to_string(threshold) +
                         "; increase the mode's fock_cutoff"),
          mode(mode_label) {}
    std::string mode;
};

struct StepUnderflowError : NumericalError {
    using NumericalError::NumericalError;
};

// Configuration file rejected; `path` is the dotted location of the offending
// key. Maps to CLI exit code 2.
struct ConfigError : Error {
    explicit ConfigError(const std::string& what_, std::string path_ = "")
        : Error(path_.empty() ? what_ : path_ + ": " + what_), path(std::move(path_)) {}
    std::string path;
};

// A sweep point failed to produce its metric; `failed_n` lists the N values.
struct SweepError : Error {
    SweepError(const std::string& what_, std::vector<int> ns)
        : Error(what_), failed_n(std::move(ns)) {}
    std::vector<int> failed_n;
};

} // namespace dickelab
