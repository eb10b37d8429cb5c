#include "hypred/errors.hpp"

namespace hypred {

const char* to_string(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::Pole: return "PoleError";
    case ErrorKind::Divergent: return "DivergentError";
    case ErrorKind::BudgetExceeded: return "BudgetExceeded";
    case ErrorKind::SingularReduction: return "SingularReduction";
    case ErrorKind::DegenerateCoefficient: return "DegenerateCoefficient";
    case ErrorKind::NotTerminating: return "NotTerminating";
    case ErrorKind::Shape: return "ShapeError";
    case ErrorKind::IdenticallyZero: return "IdenticallyZero";
    case ErrorKind::NoRealRoot: return "NoRealRoot";
    case ErrorKind::SamplingExhausted: return "SamplingExhausted";
    case ErrorKind::Parse: return "ParseError";
    }
    return "Unknown";
}

} // namespace hypred
