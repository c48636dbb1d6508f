#pragma once

namespace localize {

/// Numerical thresholds used by every rank, positivity and agreement
/// decision. All cutoffs are relative to the scale of the operand.
struct ToleranceConfig {
    double rank_tol = 1e-10;       ///< eigenvalues with |a| <= rank_tol * max|a| are kernel
    double hermitian_tol = 1e-10;  ///< allowed asymmetry, relative to 1 + max|M|
    double psd_tol = 1e-9;         ///< allowed negative eigenvalue, relative to max|a|
    double agree_tol = 1e-8;       ///< cross-construction agreement, relative Frobenius

    /// Throws Error(DomainError) unless every field lies in (0, 1e-2).
    void validate() const;
};

}  // namespace localize
