#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace plastiflow {

enum class ErrorKind {
    // configuration / contract violations
    NonPositiveExtent,
    GridMisaligned,
    InvalidParameters,
    InvalidTheta,
    InvalidTiling,
    UnsupportedDomain,
    DomainMismatch,
    CompatibilityError,
    ConfigError,
    BadBracket,
    WindowEmpty,
    SnapshotMissing,
    EmptySeries,
    NonFiniteInput,
    // numerical failures
    CflViolation,
    NoConvergence,
    BlowUp,
    LookbackUnderflow,
    StoppingFailure,
};

std::string_view to_string(ErrorKind kind);

/// True for kinds that indicate a numerical failure rather than bad input.
bool is_numerical(ErrorKind kind);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind)
    {
    }

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

}  // namespace plastiflow
