#include "localize/error.hpp"
#include "localize/tolerance.hpp"

#include <string>

namespace localize {

std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::ConvergenceFailure: return "ConvergenceFailure";
        case ErrorCode::NegativeEigenvalue: return "NegativeEigenvalue";
        case ErrorCode::DimensionMismatch: return "DimensionMismatch";
        case ErrorCode::NotHermitian: return "NotHermitian";
        case ErrorCode::NotPSD: return "NotPSD";
        case ErrorCode::NotPositiveDefinite: return "NotPositiveDefinite";
        case ErrorCode::NotDensityMatrix: return "NotDensityMatrix";
        case ErrorCode::BlockInconsistency: return "BlockInconsistency";
        case ErrorCode::ZeroVector: return "ZeroVector";
        case ErrorCode::ChainNotNested: return "ChainNotNested";
        case ErrorCode::DomainError: return "DomainError";
        case ErrorCode::Infeasible: return "Infeasible";
        case ErrorCode::UnderdeterminedSystem: return "UnderdeterminedSystem";
        case ErrorCode::InconsistentProbes: return "InconsistentProbes";
        case ErrorCode::SupportViolation: return "SupportViolation";
        case ErrorCode::UnknownSuite: return "UnknownSuite";
        case ErrorCode::ParseError: return "ParseError";
    }
    return "Unknown";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code), message_(what) {}

void ToleranceConfig::validate() const {
    auto check = [](double v, const char* name) {
        if (!(v > 0.0 && v < 1e-2)) {
            throw Error(ErrorCode::DomainError,
                        std::string(name) + " must lie in (0, 1e-2), got " + std::to_string(v));
        }
    };
    check(rank_tol, "rank_tol");
    check(hermitian_tol, "hermitian_tol");
    check(psd_tol, "psd_tol");
    check(agree_tol, "agree_tol");
}

}  // namespace localize
