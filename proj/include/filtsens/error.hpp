#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace filtsens {

enum class ErrorCode {
    InvalidArgument,
    ZeroPolynomial,
    PoleEvaluation,
    NotConjugateClosed,
    Improper,
    DomainMismatch,
    BoundaryRoot,
    ZeroGx,
    SharedPoleNotCancelled,
    DegreeCollapse,
    DegenerateGain,
    OriginRoot,
    ZeroGain,
    PreconditionUnmet,
    NotConverged,
    Inconclusive,
    ParseError,
    SchemaError,
};

[[nodiscard]] std::string_view to_string(ErrorCode code) noexcept;

/// Every failure raised by the library carries one of the codes above so
/// callers (the CLI in particular) can turn it into a structured finding.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}

    [[nodiscard]] ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace filtsens
