#pragma once

#include <span>
#include <vector>

#include "localize/linalg.hpp"

namespace localize {

/// Block form of A with respect to H = V (+) R (+) K, where K is the kernel of
/// the compression of A to V-perp and R is its orthogonal complement there.
/// Blocks: a = V^dagger A V, b = R^dagger A V, c = R^dagger A R, h = K^dagger A V.
struct BlockForm {
    Matrix v_basis;
    Matrix r_basis;
    Matrix k_basis;
    Matrix a;
    Matrix b;
    Matrix c;
    Matrix h;
};

/// A = B + C with ran(B) inside V and ran(C) meeting V only at zero.
struct Decomposition {
    HermitianOperator B;
    HermitianOperator C;
    double tb = 0.0;
    double tc = 0.0;
    Subspace ran_B;
    Subspace ran_C;
};

/// Recursive splitting of A > 0 along a descending chain of subspaces.
struct ChainDecomposition {
    std::vector<HermitianOperator> components;  ///< C_1 ... C_n, summing to A
    std::vector<Subspace> supports;             ///< W_k = ran(C_k)
    std::vector<double> weights;                ///< Tr(C_k)
};

struct TraceBounds {
    double lower = 0.0;
    double upper = 0.0;
    Index n = 0;  ///< dim of V intersected with ran(A)
};

/// Throws NotPSD when the smallest eigenvalue is below -psd_tol * max|a|.
void require_psd(const HermitianOperator& a, const ToleranceConfig& tol = {});
/// Throws NotPositiveDefinite unless min eigenvalue > rank_tol * max eigenvalue.
void require_positive_definite(const HermitianOperator& a, const ToleranceConfig& tol = {});

BlockForm block_form(const HermitianOperator& a, const Subspace& v, const ToleranceConfig& tol = {});

/// Canonical construction: the V-block of B is the Schur complement a - b^dagger c^-1 b.
Decomposition decompose(const HermitianOperator& a, const Subspace& v,
                        const ToleranceConfig& tol = {});
/// B = A^{1/2} Q A^{1/2}, Q the projector onto A^{-1/2}(V intersected with ran A).
Decomposition decompose_via_projection(const HermitianOperator& a, const Subspace& v,
                                       const ToleranceConfig& tol = {});
/// B = (P~ A^-1 P~)^-1 with P~ the projector onto V intersected with ran A.
Decomposition decompose_via_inverse(const HermitianOperator& a, const Subspace& v,
                                    const ToleranceConfig& tol = {});

double tb(const HermitianOperator& a, const Subspace& v, const ToleranceConfig& tol = {});
double tc(const HermitianOperator& a, const Subspace& v, const ToleranceConfig& tol = {});
/// Tr(P A) for the orthogonal projector P onto V.
double tp(const HermitianOperator& a, const Subspace& v);

/// 1 / <psi|A^-1|psi>, or 0 when psi has a component outside ran(A) above rank_tol.
double lambda_one_dim(const HermitianOperator& a, const Vector& psi, const ToleranceConfig& tol = {});

/// x^dagger A^-1 y for A > 0.
Complex ddagger_product(const HermitianOperator& a, const Vector& x, const Vector& y,
                        const ToleranceConfig& tol = {});
/// The projector onto V that is orthogonal in the A^-1 inner product; Pi A = B(A|V).
Matrix oblique_projector(const HermitianOperator& a, const Subspace& v,
                         const ToleranceConfig& tol = {});

/// chain must be strictly descending and end with the zero subspace.
ChainDecomposition chain_decompose(const HermitianOperator& a, std::span<const Subspace> chain,
                                   const ToleranceConfig& tol = {});

/// Sums of the n smallest and n largest eigenvalues of A.
TraceBounds trace_bounds(const HermitianOperator& a, const Subspace& v,
                         const ToleranceConfig& tol = {});

/// D = A - B(A|V) - B(A|V-perp).
HermitianOperator deficiency_operator(const HermitianOperator& a, const Subspace& v,
                                      const ToleranceConfig& tol = {});

}  // namespace localize
