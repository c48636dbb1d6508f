#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace localize {

enum class ErrorCode {
    ConvergenceFailure,
    NegativeEigenvalue,
    DimensionMismatch,
    NotHermitian,
    NotPSD,
    NotPositiveDefinite,
    NotDensityMatrix,
    BlockInconsistency,
    ZeroVector,
    ChainNotNested,
    DomainError,
    Infeasible,
    UnderdeterminedSystem,
    InconsistentProbes,
    SupportViolation,
    UnknownSuite,
    ParseError,
};

std::string_view to_string(ErrorCode code);

/// Every failure raised by the library carries one of the codes above so
/// that callers (and the CLI exit-code mapping) can dispatch on it.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what);

    ErrorCode code() const noexcept { return code_; }
    /// The message without the code prefix that what() carries.
    const std::string& message() const noexcept { return message_; }

private:
    ErrorCode code_;
    std::string message_;
};

}  // namespace localize
