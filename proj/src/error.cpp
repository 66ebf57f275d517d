#include "plastiflow/error.hpp"

namespace plastiflow {

std::string_view to_string(ErrorKind kind)
{
    switch (kind) {
    case ErrorKind::NonPositiveExtent: return "NonPositiveExtent";
    case ErrorKind::GridMisaligned: return "GridMisaligned";
    case ErrorKind::InvalidParameters: return "InvalidParameters";
    case ErrorKind::InvalidTheta: return "InvalidTheta";
    case ErrorKind::InvalidTiling: return "InvalidTiling";
    case ErrorKind::UnsupportedDomain: return "UnsupportedDomain";
    case ErrorKind::DomainMismatch: return "DomainMismatch";
    case ErrorKind::CompatibilityError: return "CompatibilityError";
    case ErrorKind::ConfigError: return "ConfigError";
    case ErrorKind::BadBracket: return "BadBracket";
    case ErrorKind::WindowEmpty: return "WindowEmpty";
    case ErrorKind::SnapshotMissing: return "SnapshotMissing";
    case ErrorKind::EmptySeries: return "EmptySeries";
    case ErrorKind::NonFiniteInput: return "NonFiniteInput";
    case ErrorKind::CflViolation: return "CflViolation";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::BlowUp: return "BlowUp";
    case ErrorKind::LookbackUnderflow: return "LookbackUnderflow";
    case ErrorKind::StoppingFailure: return "StoppingFailure";
    }
    return "Unknown";
}

bool is_numerical(ErrorKind kind)
{
    switch (kind) {
    case ErrorKind::CflViolation:
    case ErrorKind::NoConvergence:
    case ErrorKind::BlowUp:
    case ErrorKind::LookbackUnderflow:
    case ErrorKind::StoppingFailure:
        return true;
    default:
        return false;
    }
}

}  // namespace plastiflow
