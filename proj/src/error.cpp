#include "filtsens/error.hpp"

namespace filtsens {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::ZeroPolynomial: return "ZeroPolynomial";
        case ErrorCode::PoleEvaluation: return "PoleEvaluation";
        case ErrorCode::NotConjugateClosed: return "NotConjugateClosed";
        case ErrorCode::Improper: return "Improper";
        case ErrorCode::DomainMismatch: return "DomainMismatch";
        case ErrorCode::BoundaryRoot: return "BoundaryRoot";
        case ErrorCode::ZeroGx: return "ZeroGx";
        case ErrorCode::SharedPoleNotCancelled: return "SharedPoleNotCancelled";
        case ErrorCode::DegreeCollapse: return "DegreeCollapse";
        case ErrorCode::DegenerateGain: return "DegenerateGain";
        case ErrorCode::OriginRoot: return "OriginRoot";
        case ErrorCode::ZeroGain: return "ZeroGain";
        case ErrorCode::PreconditionUnmet: return "PreconditionUnmet";
        case ErrorCode::NotConverged: return "NotConverged";
        case ErrorCode::Inconclusive: return "Inconclusive";
        case ErrorCode::ParseError: return "ParseError";
        case ErrorCode::SchemaError: return "SchemaError";
    }
    return "Unknown";
}

}  // namespace filtsens
