#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace extorb {

struct ExtorbError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DimensionMismatch : ExtorbError {
    using ExtorbError::ExtorbError;
};

struct SingularMatrix : ExtorbError {
    using ExtorbError::ExtorbError;
};

// An enumeration would exceed the configured budget; carries both sides
// so callers can report "needed vs allowed".
struct CapExceeded : ExtorbError {
    std::string required;
    std::string cap;
    CapExceeded(std::string req, std::string c)
        : ExtorbError("enumeration of size " + req + " exceeds cap " + c),
          required(std::move(req)), cap(std::move(c)) {}
};

struct FormSyntaxError : ExtorbError {
    std::size_t pos;
    FormSyntaxError(const std::string& what, std::size_t p)
        : ExtorbError(what + " (at position " + std::to_string(p) + ")"), pos(p) {}
};

struct DegenerateForm : ExtorbError {
    using ExtorbError::ExtorbError;
};

struct ZeroForm : ExtorbError {
    using ExtorbError::ExtorbError;
};

struct WitnessSearchCapExceeded : ExtorbError {
    using ExtorbError::ExtorbError;
};

// Raised only if the intersection-orbit product turns out to depend on the
// chosen representative; indicates a bug, never a valid input.
struct WellDefinednessViolation : ExtorbError {
    using ExtorbError::ExtorbError;
};

}  // namespace extorb
