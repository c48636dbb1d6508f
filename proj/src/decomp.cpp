#include "localize/decomp.hpp"

#include <cmath>
#include <string>

namespace localize {

namespace {

double spectral_scale(const HermitianOperator& a) {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(a.matrix(), Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
        throw Error(ErrorCode::ConvergenceFailure, "Hermitian eigensolver did not converge");
    }
    return solver.eigenvalues().cwiseAbs().maxCoeff();
}

void check_inputs(const HermitianOperator& a, const Subspace& v, const ToleranceConfig& tol) {
    require_same_dim(v.ambient_dim(), a.dim(), "subspace ambient dimension vs operator");
    require_psd(a, tol);
}

// Assembles the result from B and applies the degenerate-weight convention:
// a component whose trace is below rank_tol * Tr(A) is exactly zero.
Decomposition finalize(const HermitianOperator& a, const HermitianOperator& b,
                       const ToleranceConfig& tol) {
    const double total = a.trace();
    const double scale = spectral_scale(a);
    HermitianOperator bb = b;
    if (std::abs(bb.trace()) <= tol.rank_tol * total) bb = HermitianOperator::zero(a.dim());
    HermitianOperator cc = a - bb;
    if (std::abs(cc.trace()) <= tol.rank_tol * total) {
        bb = a;
        cc = HermitianOperator::zero(a.dim());
    }
    Decomposition d;
    d.tb = bb.trace();
    d.tc = cc.trace();
    d.ran_B = range_of(bb, scale, tol);
    d.ran_C = range_of(cc, scale, tol);
    d.B = std::move(bb);
    d.C = std::move(cc);
    return d;
}

Subspace localized_part(const HermitianOperator& a, const Subspace& v, const ToleranceConfig& tol) {
    return intersect(v, range_of(a, tol), tol);
}

}  // namespace

void require_psd(const HermitianOperator& a, const ToleranceConfig& tol) {
    if (!is_psd(a, tol)) {
        throw Error(ErrorCode::NotPSD,
                    "operator has eigenvalue " + std::to_string(min_eigenvalue(a)) +
                        " below -psd_tol * scale");
    }
}

void require_positive_definite(const HermitianOperator& a, const ToleranceConfig& tol) {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(a.matrix(), Eigen::EigenvaluesOnly);
    const RealVector& ev = solver.eigenvalues();
    if (!(ev(0) > tol.rank_tol * ev(ev.size() - 1)) || !(ev(ev.size() - 1) > 0.0)) {
        throw Error(ErrorCode::NotPositiveDefinite,
                    "smallest eigenvalue " + std::to_string(ev(0)) + " is not positive");
    }
}

BlockForm block_form(const HermitianOperator& a, const Subspace& v, const ToleranceConfig& tol) {
    check_inputs(a, v, tol);
    const Matrix& m = a.matrix();
    const double scale = spectral_scale(a);
    const Subspace perp = complement(v, tol);

    BlockForm f;
    f.v_basis = v.basis();
    if (perp.is_zero()) {
        f.r_basis = Matrix(a.dim(), 0);
        f.k_basis = Matrix(a.dim(), 0);
    } else {
        // K vs R is decided on the spectrum of A compressed to V-perp.
        const EigenSystem es = eigh(
            HermitianOperator::hermitian_part(perp.basis().adjoint() * m * perp.basis()), tol);
        Index kernel = 0;
        while (kernel < es.values.size() && es.values(kernel) <= tol.rank_tol * scale) ++kernel;
        const Index range = es.values.size() - kernel;
        f.k_basis = perp.basis() * es.vectors.leftCols(kernel);
        f.r_basis = perp.basis() * es.vectors.rightCols(range);
    }
    f.a = f.v_basis.adjoint() * m * f.v_basis;
    f.b = f.r_basis.adjoint() * m * f.v_basis;
    f.c = f.r_basis.adjoint() * m * f.r_basis;
    f.h = f.k_basis.adjoint() * m * f.v_basis;
    return f;
}

Decomposition decompose(const HermitianOperator& a, const Subspace& v, const ToleranceConfig& tol) {
    check_inputs(a, v, tol);
    const Index n = a.dim();
    if (v.is_zero()) return finalize(a, HermitianOperator::zero(n), tol);
    if (v.dim() == n) return finalize(a, a, tol);

    const BlockForm f = block_form(a, v, tol);
    if (f.h.size() > 0 && f.h.norm() > tol.psd_tol * a.norm()) {
        throw Error(ErrorCode::BlockInconsistency,
                    "V-to-K block has norm " + std::to_string(f.h.norm()) +
                        "; operator is not PSD at this tolerance");
    }
    if (f.r_basis.cols() == 0) return finalize(a, a, tol);

    Eigen::LLT<Matrix> llt(f.c);
    if (llt.info() != Eigen::Success) {
        throw Error(ErrorCode::BlockInconsistency, "R block is not positive definite");
    }
    const Matrix schur = f.a - f.b.adjoint() * llt.solve(f.b);
    const HermitianOperator b =
        HermitianOperator::hermitian_part(f.v_basis * schur * f.v_basis.adjoint());
    return finalize(a, b, tol);
}

Decomposition decompose_via_projection(const HermitianOperator& a, const Subspace& v,
                                       const ToleranceConfig& tol) {
    check_inputs(a, v, tol);
    const Subspace vt = localized_part(a, v, tol);
    if (vt.is_zero()) return finalize(a, HermitianOperator::zero(a.dim()), tol);
    const Matrix root = pseudo_power(a, 0.5, tol).matrix();
    const Matrix inv_root = pseudo_power(a, -0.5, tol).matrix();
    const Matrix q = apply_map(inv_root, vt, tol).projector();
    return finalize(a, HermitianOperator::hermitian_part(root * q * root), tol);
}

Decomposition decompose_via_inverse(const HermitianOperator& a, const Subspace& v,
                                    const ToleranceConfig& tol) {
    check_inputs(a, v, tol);
    const Subspace vt = localized_part(a, v, tol);
    if (vt.is_zero()) return finalize(a, HermitianOperator::zero(a.dim()), tol);
    const Matrix p = vt.projector();
    const Matrix inv = pseudo_power(a, -1.0, tol).matrix();
    const HermitianOperator compressed = HermitianOperator::hermitian_part(p * inv * p);
    return finalize(a, pseudo_power(compressed, -1.0, tol), tol);
}

double tb(const HermitianOperator& a, const Subspace& v, const ToleranceConfig& tol) {
    return decompose(a, v, tol).tb;
}

double tc(const HermitianOperator& a, const Subspace& v, const ToleranceConfig& tol) {
    return decompose(a, v, tol).tc;
}

double tp(const HermitianOperator& a, const Subspace& v) {
    require_same_dim(v.ambient_dim(), a.dim(), "subspace ambient dimension vs operator");
    return (v.basis().adjoint() * a.matrix() * v.basis()).trace().real();
}

double lambda_one_dim(const HermitianOperator& a, const Vector& psi, const ToleranceConfig& tol) {
    require_same_dim(psi.size(), a.dim(), "vector vs operator");
    require_psd(a, tol);
    const double norm = psi.norm();
    if (norm == 0.0) throw Error(ErrorCode::ZeroVector, "probe vector is zero");
    const Vector unit = psi / norm;
    if (range_of(a, tol).distance_to(unit) > tol.rank_tol) return 0.0;
    const Complex q = unit.dot(pseudo_power(a, -1.0, tol).matrix() * unit);
    return 1.0 / q.real();
}

Complex ddagger_product(const HermitianOperator& a, const Vector& x, const Vector& y,
                        const ToleranceConfig& tol) {
    require_same_dim(x.size(), a.dim(), "vector vs operator");
    require_same_dim(y.size(), a.dim(), "vector vs operator");
    require_positive_definite(a, tol);
    return x.dot(a.matrix().llt().solve(y));
}

Matrix oblique_projector(const HermitianOperator& a, const Subspace& v, const ToleranceConfig& tol) {
    require_same_dim(v.ambient_dim(), a.dim(), "subspace ambient dimension vs operator");
    require_positive_definite(a, tol);
    const Index n = a.dim();
    if (v.is_zero()) return Matrix::Zero(n, n);
    const Eigen::LLT<Matrix> llt(a.matrix());
    const Matrix inv = llt.solve(Matrix::Identity(n, n));
    const Matrix gram = v.basis().adjoint() * inv * v.basis();
    return v.basis() * gram.llt().solve(v.basis().adjoint() * inv);
}

ChainDecomposition chain_decompose(const HermitianOperator& a, std::span<const Subspace> chain,
                                   const ToleranceConfig& tol) {
    require_positive_definite(a, tol);
    if (chain.empty()) throw Error(ErrorCode::ChainNotNested, "chain is empty");
    for (std::size_t k = 0; k < chain.size(); ++k) {
        require_same_dim(chain[k].ambient_dim(), a.dim(), "chain subspace ambient dimension");
        if (k > 0 && (chain[k].dim() >= chain[k - 1].dim() || !contains(chain[k - 1], chain[k], tol))) {
            throw Error(ErrorCode::ChainNotNested,
                        "element " + std::to_string(k) + " is not strictly inside element " +
                            std::to_string(k - 1));
        }
    }
    if (!chain.back().is_zero()) {
        throw Error(ErrorCode::ChainNotNested, "last chain element must be the zero subspace");
    }

    const double scale = spectral_scale(a);
    ChainDecomposition out;
    HermitianOperator remaining = a;
    for (const Subspace& v : chain) {
        Decomposition d = decompose(remaining, v, tol);
        out.weights.push_back(d.C.trace());
        out.supports.push_back(range_of(d.C, scale, tol));
        out.components.push_back(std::move(d.C));
        remaining = std::move(d.B);
    }

    // Each component must itself be the component of A along its own support.
    for (std::size_t k = 0; k < out.components.size(); ++k) {
        const HermitianOperator along = decompose(a, out.supports[k], tol).B;
        if ((along.matrix() - out.components[k].matrix()).norm() > tol.agree_tol * a.norm()) {
            throw Error(ErrorCode::BlockInconsistency,
                        "chain component " + std::to_string(k) +
                            " differs from the component along its support");
        }
    }
    return out;
}

TraceBounds trace_bounds(const HermitianOperator& a, const Subspace& v, const ToleranceConfig& tol) {
    check_inputs(a, v, tol);
    TraceBounds t;
    t.n = localized_part(a, v, tol).dim();
    Eigen::SelfAdjointEigenSolver<Matrix> solver(a.matrix(), Eigen::EigenvaluesOnly);
    const RealVector& ev = solver.eigenvalues();
    t.lower = ev.head(t.n).sum();
    t.upper = ev.tail(t.n).sum();
    return t;
}

HermitianOperator deficiency_operator(const HermitianOperator& a, const Subspace& v,
                                      const ToleranceConfig& tol) {
    check_inputs(a, v, tol);
    return a - decompose(a, v, tol).B - decompose(a, complement(v, tol), tol).B;
}

}  // namespace localize
