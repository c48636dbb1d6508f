#include <array>
#include <cmath>

#include "trial.hpp"

namespace localize::verify::detail {

namespace {

Positivity positivity_of(Index dim, Index rank) {
    return rank == dim ? Positivity::PositiveDefinite : Positivity::PSD;
}

double rel(const Matrix& x, const Matrix& y, double scale) {
    return scale == 0.0 ? (x - y).norm() : (x - y).norm() / scale;
}

HermitianOperator compress(const HermitianOperator& a, const Subspace& w) {
    const Matrix p = w.projector();
    return HermitianOperator::hermitian_part(p * a.matrix() * p);
}

// Span of the eigenvectors of a picked by the given positions in ascending order.
Subspace eigen_span(const HermitianOperator& a, const std::vector<Index>& picks) {
    const EigenSystem es = eigh(a);
    Matrix cols(a.dim(), Index(picks.size()));
    for (std::size_t i = 0; i < picks.size(); ++i) cols.col(Index(i)) = es.vectors.col(picks[i]);
    return Subspace::from_orthonormal(cols);
}

std::vector<Index> random_subset(Rng& rng, Index n, Index size) {
    std::vector<Index> all;
    for (Index i = 0; i < n; ++i) all.push_back(i);
    for (Index i = 0; i < size; ++i) std::swap(all[std::size_t(i)], all[std::size_t(rng.index(i, n - 1))]);
    all.resize(std::size_t(size));
    return all;
}

}  // namespace

void route_agreement(Trial& t) {
    const ToleranceConfig& tol = t.tol;
    const Index d = 2 + t.index % 7;
    const Index r = t.rng.index(1, d);
    const Index k = t.rng.index(0, d);
    t.spec = {d, r, k, t.seed, positivity_of(d, r)};
    const HermitianOperator a = random_psd(t.rng, d, r);
    const Subspace v = random_subspace(t.rng, d, k);
    t.attach("A", a.matrix());
    t.attach("V", v);

    const Decomposition s = decompose(a, v, tol);
    const Decomposition p = decompose_via_projection(a, v, tol);
    const Decomposition i = decompose_via_inverse(a, v, tol);
    const double fa = a.norm();
    t.check_le("schur-vs-projection", rel(s.B.matrix(), p.B.matrix(), fa), tol.agree_tol);
    t.check_le("schur-vs-inverse", rel(s.B.matrix(), i.B.matrix(), fa), tol.agree_tol);
    t.check_le("projection-vs-inverse", rel(p.B.matrix(), i.B.matrix(), fa), tol.agree_tol);

    const double scale = spectral_norm(a);
    const Subspace ran_a = range_of(a, tol);
    t.check_le("components-sum-to-A", rel((s.B + s.C).matrix(), a.matrix(), fa), tol.agree_tol);
    t.check("components-psd",
            min_eigenvalue(s.B) >= -tol.psd_tol * scale && min_eigenvalue(s.C) >= -tol.psd_tol * scale,
            std::max(0.0, -std::min(min_eigenvalue(s.B), min_eigenvalue(s.C)) / std::max(scale, 1e-300)));
    t.check("range-B-inside-V", contains(v, s.ran_B, tol), 0.0);
    t.check("range-C-meets-V-at-zero", intersect(s.ran_C, v, tol).is_zero(), 0.0);
    t.check("rank-additivity", s.ran_B.dim() + s.ran_C.dim() == ran_a.dim(), 0.0);
    const double d_vt = subspace_distance(s.ran_B, intersect(v, ran_a, tol));
    t.check_le("range-B-is-V-cap-ranA", d_vt, 1e-6);
    const double d_sum = subspace_distance(subspace_sum(s.ran_B, s.ran_C, tol), ran_a);
    t.check_le("ranges-sum-to-ranA", d_sum, 1e-6);
    t.check_le("tb-plus-tc", std::abs(s.tb + s.tc - a.trace()), tol.agree_tol * a.trace());
    t.check_le("tb-below-tp", s.tb - tp(a, v), tol.psd_tol * a.trace());
}

void maximality(Trial& t) {
    const ToleranceConfig& tol = t.tol;
    const Index d = t.rng.index(2, 4);
    const Index r = t.rng.index(1, d);
    // k + r > d, so V meets ran(A) and the falsifier has directions to try.
    const Index k = t.rng.index(d - r + 1, d);
    t.spec = {d, r, k, t.seed, positivity_of(d, r)};
    const HermitianOperator a = random_psd(t.rng, d, r);
    const Subspace v = random_subspace(t.rng, d, k);
    t.attach("A", a.matrix());
    t.attach("V", v);

    const Decomposition dec = decompose(a, v, tol);
    const OracleResult oracle = sdp_oracle_tb(a, v, 2000, tol);
    t.attach("oracle", oracle.value);
    t.check("oracle-converged", oracle.converged, 0.0);
    t.check_le("oracle-matches-tb", std::abs(oracle.value - dec.tb), 1e-4);
    t.check_le("oracle-not-above-tb", oracle.value - dec.tb, tol.psd_tol * a.trace());
    t.merge(maximality_falsifier(a, v, dec, 50, derive_seed(t.seed, 0xfa15), tol));
}

void trace_inequalities(Trial& t) {
    const ToleranceConfig& tol = t.tol;
    const Index d = t.rng.index(2, 6);
    const Index r = t.rng.index(1, d);
    const Index k = t.rng.index(1, d);
    t.spec = {d, r, k, t.seed, positivity_of(d, r)};
    const HermitianOperator a = random_psd(t.rng, d, r);
    const Subspace v = random_subspace(t.rng, d, k);
    t.attach("A", a.matrix());
    t.attach("V", v);
    const double slack = tol.psd_tol * a.trace();

    const Decomposition dec = decompose(a, v, tol);
    const TraceBounds bounds = trace_bounds(a, v, tol);
    t.check_le("eigenvalue-lower-bound", bounds.lower - dec.tb, slack);
    t.check_le("eigenvalue-upper-bound", dec.tb - bounds.upper, slack);

    // Orthogonal split of V.
    const Index n = t.rng.index(1, k);
    const std::vector<Subspace> parts = random_split(t.rng, v, n);
    double sum_tb = 0.0;
    double sum_inv = 0.0;
    for (std::size_t j = 0; j < parts.size(); ++j) {
        t.attach("V_" + std::to_string(j + 1), parts[j]);
        const HermitianOperator bk = decompose(a, parts[j], tol).B;
        const HermitianOperator pbp = compress(dec.B, parts[j]);
        t.check_order("split-compression-dominates", bk, pbp);
        t.check_le("split-trace-dominates", bk.trace() - pbp.trace(), slack);
        sum_tb += bk.trace();
        sum_inv += pseudo_power(bk, -1.0, tol).trace();
    }
    t.check_le("split-trace-superadditive", sum_tb - dec.tb, slack);
    const double inv = pseudo_power(dec.B, -1.0, tol).trace();
    t.check_le("split-inverse-trace", sum_inv - inv, tol.agree_tol * std::max(inv, 1.0));
    if (contains(range_of(a, tol), v, tol)) {
        t.check_le("split-inverse-trace-equality", std::abs(sum_inv - inv), tol.agree_tol * inv);
    }

    // Projector bound and its trace.
    const HermitianOperator pap = compress(a, v);
    t.check_order("projector-compression-dominates", dec.B, pap);
    t.check_le("overlap-dominates-weight", dec.tb - pap.trace(), slack);

    // Deficiency operator.
    const HermitianOperator def = deficiency_operator(a, v, tol);
    t.check_le("deficiency-trace-nonnegative", -def.trace(), slack);

    // Full orthogonal splits of H for a positive-definite operator.
    const HermitianOperator pd = random_psd(t.rng, d, d);
    t.attach("A_pd", pd.matrix());
    const Index m = t.rng.index(1, d);
    const std::vector<Subspace> full = random_split(t.rng, Subspace::full(d), m);
    double sum_full = 0.0;
    for (const Subspace& w : full) sum_full += pseudo_power(decompose(pd, w, tol).B, -1.0, tol).trace();
    const double inv_pd = pseudo_power(pd, -1.0, tol).trace();
    t.check_le("full-split-inverse-trace-equality", std::abs(sum_full - inv_pd) / inv_pd, 1e-8);

    if (d >= 2) {
        const Index kv = t.rng.index(1, d - 1);
        const Subspace w = random_subspace(t.rng, d, kv);
        t.attach("W", w);
        const HermitianOperator dpd = deficiency_operator(pd, w, tol);
        const double scale = spectral_norm(pd);
        t.check_le("deficiency-not-psd", min_eigenvalue(dpd) / scale, -tol.psd_tol);
        std::vector<Index> picks = random_subset(t.rng, d, kv);
        const HermitianOperator dinv = deficiency_operator(pd, eigen_span(pd, picks), tol);
        t.check_le("deficiency-vanishes-invariant", dinv.norm() / pd.norm(), tol.agree_tol);
    }
}

void operator_inequalities(Trial& t) {
    const ToleranceConfig& tol = t.tol;
    const Index d = t.rng.index(2, 6);
    const Index r1 = t.rng.index(1, d);
    const Index r2 = t.rng.index(1, d);
    const Index k = t.rng.index(1, d);
    t.spec = {d, r1, k, t.seed, positivity_of(d, r1)};
    const HermitianOperator a1 = random_psd(t.rng, d, r1);
    const HermitianOperator a2 = random_psd(t.rng, d, r2);
    const Subspace v = random_subspace(t.rng, d, k);
    t.attach("A1", a1.matrix());
    t.attach("A2", a2.matrix());
    t.attach("V", v);

    const HermitianOperator b1 = decompose(a1, v, tol).B;
    const HermitianOperator b2 = decompose(a2, v, tol).B;

    // Monotone in V.
    const Subspace sub = random_split(t.rng, v, t.rng.index(1, k)).front();
    t.attach("V_sub", sub);
    const HermitianOperator b_sub = decompose(a1, sub, tol).B;
    t.check_order("monotone-in-subspace", b_sub, b1);
    const HermitianOperator bb_sub = decompose(b1, sub, tol).B;
    t.check_order("nested-component-ordering", bb_sub, b_sub);

    // Monotone in A.
    const HermitianOperator b12 = decompose(a1 + a2, v, tol).B;
    t.check_order("monotone-in-operator", b1, b12);

    // Super-additivity and concavity.
    const HermitianOperator sum = b1 + b2;
    t.check_order("superadditive", sum, b12);
    for (double s : {0.25, 0.5, 0.75}) {
        const HermitianOperator mixed = decompose(s * a1 + (1.0 - s) * a2, v, tol).B;
        const HermitianOperator avg = s * b1 + (1.0 - s) * b2;
        t.check_order("concave", avg, mixed);
        t.check_le("trace-concave", avg.trace() - mixed.trace(), tol.psd_tol);
    }

    // Tensor products.
    const Index d1 = t.rng.index(2, 3);
    const Index d2 = t.rng.index(2, 3);
    const HermitianOperator t1 = random_psd(t.rng, d1, t.rng.index(1, d1));
    const HermitianOperator t2 = random_psd(t.rng, d2, t.rng.index(1, d2));
    const Subspace w1 = random_subspace(t.rng, d1, t.rng.index(1, d1));
    const Subspace w2 = random_subspace(t.rng, d2, t.rng.index(1, d2));
    t.attach("T1", t1.matrix());
    t.attach("T2", t2.matrix());
    t.attach("W1", w1);
    t.attach("W2", w2);
    const Decomposition dt = decompose(tensor(t1, t2), tensor_subspace(w1, w2), tol);
    const HermitianOperator prod = tensor(decompose(t1, w1, tol).B, decompose(t2, w2, tol).B);
    t.check_order("tensor-dominates", prod, dt.B);
    t.check_le("tensor-trace-dominates", prod.trace() - dt.tb, tol.psd_tol);

    // Invariant factors give equality.
    const Subspace i1 = eigen_span(t1, random_subset(t.rng, d1, t.rng.index(1, d1)));
    const Subspace i2 = eigen_span(t2, random_subset(t.rng, d2, t.rng.index(1, d2)));
    const HermitianOperator eq_lhs = decompose(tensor(t1, t2), tensor_subspace(i1, i2), tol).B;
    const HermitianOperator eq_rhs = tensor(decompose(t1, i1, tol).B, decompose(t2, i2, tol).B);
    t.check_le("tensor-invariant-equality", rel(eq_lhs.matrix(), eq_rhs.matrix(), tensor(t1, t2).norm()),
               tol.agree_tol);
}

void covariance(Trial& t) {
    const ToleranceConfig& tol = t.tol;
    const Index d = t.rng.index(2, 6);
    const Index r = t.rng.index(1, d);
    const Index k = t.rng.index(0, d);
    t.spec = {d, r, k, t.seed, positivity_of(d, r)};
    const HermitianOperator a = random_psd(t.rng, d, r);
    const Subspace v = random_subspace(t.rng, d, k);
    t.attach("A", a.matrix());
    t.attach("V", v);
    const Decomposition dec = decompose(a, v, tol);
    const double fa = a.norm();

    const double mu = t.rng.uniform(1e-3, 10.0);
    t.attach("mu", mu);
    const HermitianOperator scaled = decompose(mu * a, v, tol).B;
    t.check_le("scaling", rel(scaled.matrix(), mu * dec.B.matrix(), mu * fa), tol.agree_tol);

    const Matrix u = t.rng.unitary(d);
    t.attach("U", u);
    const HermitianOperator rotated = decompose(a.conjugated_by(u), apply_map(u, v, tol), tol).B;
    t.check_le("unitary-covariance", rel(rotated.matrix(), u * dec.B.matrix() * u.adjoint(), fa),
               tol.agree_tol);

    if (k > 0) {
        const Matrix y = random_psd(t.rng, k, k).matrix();
        const double alpha = t.rng.uniform(0.0, 1.0);
        const double beta = t.rng.uniform(0.0, 1.0);
        const HermitianOperator shift = HermitianOperator::hermitian_part(
            beta * v.basis() * y * v.basis().adjoint() - alpha * dec.B.matrix());
        t.attach("shift", shift.matrix());
        const HermitianOperator shifted = decompose(a + shift, v, tol).B;
        t.check_le("shift-covariance", rel(shifted.matrix(), (dec.B + shift).matrix(), fa), tol.agree_tol);
    }

    const Decomposition back = decompose(a, dec.ran_C, tol);
    t.check_le("reciprocity",
               std::max(rel(back.B.matrix(), dec.C.matrix(), fa), rel(back.C.matrix(), dec.B.matrix(), fa)),
               tol.agree_tol);

    const Index e = t.rng.index(1, 2);
    Matrix big = Matrix::Zero(d + e, d + e);
    big.topLeftCorner(d, d) = a.matrix();
    Matrix vb = Matrix::Zero(d + e, k);
    vb.topRows(d) = v.basis();
    const HermitianOperator ext = decompose(HermitianOperator::hermitian_part(big),
                                            Subspace::from_orthonormal(vb), tol).B;
    Matrix expect = Matrix::Zero(d + e, d + e);
    expect.topLeftCorner(d, d) = dec.B.matrix();
    t.check_le("extension-invariance", rel(ext.matrix(), expect, fa), tol.agree_tol);

    const Decomposition restricted = decompose(a, intersect(v, range_of(a, tol), tol), tol);
    t.check_le("restriction-invariance", rel(restricted.B.matrix(), dec.B.matrix(), fa), tol.agree_tol);

    // Positive-definite identities.
    const HermitianOperator pd = random_psd(t.rng, d, d);
    t.attach("A_pd", pd.matrix());
    const Decomposition dp = decompose(pd, v, tol);
    const Eigen::LLT<Matrix> llt(pd.matrix());
    const double fp = pd.norm();
    const Matrix ainv_b = llt.solve(dp.B.matrix());
    const Matrix ainv_c = llt.solve(dp.C.matrix());
    t.check_le("B-Ainv-B-equals-B", rel(dp.B.matrix() * ainv_b, dp.B.matrix(), fp), tol.agree_tol);
    t.check_le("B-Ainv-C-vanishes", (dp.B.matrix() * ainv_c).norm() / fp, tol.agree_tol);

    const Matrix pi = oblique_projector(pd, v, tol);
    t.check_le("oblique-projector-gives-B", rel(pi * pd.matrix(), dp.B.matrix(), fp), tol.agree_tol);
    t.check_le("oblique-projector-idempotent", (pi * pi - pi).norm() / std::max(1.0, pi.norm()),
               tol.agree_tol);
    const Matrix ainv_pi = llt.solve(pi);
    t.check_le("oblique-projector-self-adjoint",
               (ainv_pi - ainv_pi.adjoint()).norm() / std::max(1.0, ainv_pi.norm()), tol.agree_tol);

    // Chain decomposition along nested random subspaces.
    const Matrix frame = t.rng.unitary(d);
    std::vector<Subspace> chain;
    Index dim = t.rng.index(1, d);
    while (dim > 0) {
        chain.push_back(Subspace::from_orthonormal(frame.leftCols(dim)));
        dim = t.rng.index(0, dim - 1);
    }
    chain.push_back(Subspace::zero(d));
    const ChainDecomposition cd = chain_decompose(pd, chain, tol);
    HermitianOperator total = HermitianOperator::zero(d);
    Index support_dims = 0;
    bool psd = true;
    for (std::size_t j = 0; j < cd.components.size(); ++j) {
        total += cd.components[j];
        support_dims += cd.supports[j].dim();
        psd = psd && min_eigenvalue(cd.components[j]) >= -tol.psd_tol * spectral_norm(pd);
        const HermitianOperator along = decompose(pd, cd.supports[j], tol).B;
        t.check_le("chain-component-is-component-along-support",
                   rel(along.matrix(), cd.components[j].matrix(), fp), tol.agree_tol);
    }
    t.check_le("chain-sums-to-A", rel(total.matrix(), pd.matrix(), fp), tol.agree_tol);
    t.check("chain-supports-direct-sum", support_dims == d, 0.0);
    t.check("chain-components-psd", psd, 0.0);
}

void generators(Trial& t) {
    const Index d = t.rng.index(1, 8);
    const Index r = t.rng.index(1, d);
    const Index k = t.rng.index(0, d);
    t.spec = {d, r, k, t.seed, positivity_of(d, r)};
    const HermitianOperator a = random_psd(t.spec);
    const HermitianOperator again = random_psd(t.spec);
    t.attach("A", a.matrix());
    t.check("psd-deterministic", a.matrix() == again.matrix(), 0.0);
    t.check("psd-rank", range_of(a, t.tol).dim() == r, 0.0);
    const Subspace v = random_subspace(t.spec);
    t.check("subspace-deterministic", v.basis() == random_subspace(t.spec).basis(), 0.0);
    t.check_le("subspace-orthonormal",
               (v.basis().adjoint() * v.basis() - Matrix::Identity(k, k)).norm(), 1e-12);
    const DensityMatrix rho = random_density(t.spec);
    t.check_le("density-unit-trace", std::abs(rho.op().trace() - 1.0), 1e-14);
}

}  // namespace localize::verify::detail
