#pragma once

#include <stdexcept>
#include <string>

namespace hypred {

// Machine-readable failure categories; the harness records these as reasons.
enum class ErrorKind {
    Pole,
    Divergent,
    BudgetExceeded,
    SingularReduction,
    DegenerateCoefficient,
    NotTerminating,
    Shape,
    IdenticallyZero,
    NoRealRoot,
    SamplingExhausted,
    Parse,
};

const char* to_string(ErrorKind kind);

class HypError : public std::runtime_error {
public:
    HypError(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

#define HYPRED_DEFINE_ERROR(Name, Kind)                                    \
    class Name : public HypError {                                         \
    public:                                                                \
        explicit Name(const std::string& what) : HypError(Kind, what) {}   \
    };

HYPRED_DEFINE_ERROR(PoleError, ErrorKind::Pole)
HYPRED_DEFINE_ERROR(DivergentError, ErrorKind::Divergent)
HYPRED_DEFINE_ERROR(SingularReduction, ErrorKind::SingularReduction)
HYPRED_DEFINE_ERROR(DegenerateCoefficient, ErrorKind::DegenerateCoefficient)
HYPRED_DEFINE_ERROR(NotTerminating, ErrorKind::NotTerminating)
HYPRED_DEFINE_ERROR(ShapeError, ErrorKind::Shape)
HYPRED_DEFINE_ERROR(IdenticallyZero, ErrorKind::IdenticallyZero)
HYPRED_DEFINE_ERROR(NoRealRoot, ErrorKind::NoRealRoot)
HYPRED_DEFINE_ERROR(SamplingExhausted, ErrorKind::SamplingExhausted)
HYPRED_DEFINE_ERROR(ParseError, ErrorKind::Parse)

#undef HYPRED_DEFINE_ERROR

} // namespace hypred
