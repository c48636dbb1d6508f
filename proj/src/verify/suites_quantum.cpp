#include <cmath>
#include <numbers>

#include "trial.hpp"

namespace localize::verify::detail {

namespace {

double frob(const Matrix& x, const Matrix& y) { return (x - y).norm(); }

// Random point of the probability simplex.
std::vector<double> random_weights(Rng& rng, Index n) {
    std::vector<double> w;
    double total = 0.0;
    for (Index i = 0; i < n; ++i) {
        w.push_back(-std::log(rng.uniform(1e-12, 1.0)));
        total += w.back();
    }
    for (double& x : w) x /= total;
    return w;
}

}  // namespace

void quantum_inequalities(Trial& t) {
    const ToleranceConfig& tol = t.tol;
    const Index d = t.rng.index(2, 6);
    const Index r = t.rng.index(1, d);
    const Index k = t.rng.index(0, d);
    t.spec = {d, r, k, t.seed, r == d ? Positivity::PositiveDefinite : Positivity::PSD};
    const DensityMatrix rho = random_density(t.rng, d, r);
    const Subspace v = random_subspace(t.rng, d, k);
    t.attach("rho", rho.matrix());
    t.attach("V", v);

    const ProbabilityTable tab = probability_table(rho, v, tol);
    t.check_le("weight-below-overlap", tab.lam - tab.p, tol.psd_tol);
    t.check_le("overlap-below-complement", tab.p - (1.0 - tab.lam_perp), tol.psd_tol);
    t.check_le("weights-sum-below-one", tab.lam + tab.lam_perp - 1.0, tol.psd_tol);
    t.check_le("deficiency-nonnegative", -tab.deficiency, tol.psd_tol);
    const double margins = std::max({std::abs(tab.v_b + tab.v_c - tab.p),
                                     std::abs(tab.vperp_b + tab.vperp_c - (1.0 - tab.p)),
                                     std::abs(tab.v_b + tab.vperp_b - tab.lam),
                                     std::abs(tab.v_b + tab.v_c + tab.vperp_b + tab.vperp_c - 1.0)});
    t.check_le("table-marginals", margins, tol.agree_tol);

    // Positive-definite state: disjointness under the A^-1 product.
    const DensityMatrix pd = random_density(t.rng, d, d);
    t.attach("rho_pd", pd.matrix());
    const StateDecomposition sd = state_decompose(pd, v, tol);
    if (sd.rho_B && sd.rho_C) {
        const Matrix cross = sd.rho_B->matrix() * pd.matrix().llt().solve(sd.rho_C->matrix());
        t.check_le("components-orthogonal-under-inverse", cross.norm(), tol.agree_tol);
    }

    // Concavity of the weight over random mixtures.
    const Index n = t.rng.index(2, 4);
    const std::vector<double> q = random_weights(t.rng, n);
    HermitianOperator mixed = HermitianOperator::zero(d);
    HermitianOperator avg_b = HermitianOperator::zero(d);
    double avg_lam = 0.0;
    for (Index j = 0; j < n; ++j) {
        const DensityMatrix s = random_density(t.rng, d, t.rng.index(1, d));
        const StateDecomposition sj = state_decompose(s, v, tol);
        mixed += q[std::size_t(j)] * s.op();
        avg_b += q[std::size_t(j)] * sj.B;
        avg_lam += q[std::size_t(j)] * sj.lam;
    }
    const StateDecomposition sm = state_decompose(DensityMatrix::from_operator(mixed, tol), v, tol);
    t.check_le("weight-concave", avg_lam - sm.lam, tol.psd_tol);
    t.check_order("weighted-component-concave", avg_b, sm.B);

    // Chain sum rule.
    const Matrix frame = t.rng.unitary(d);
    std::vector<Subspace> chain;
    Index dim = t.rng.index(1, d);
    while (dim > 0) {
        chain.push_back(Subspace::from_orthonormal(frame.leftCols(dim)));
        dim = t.rng.index(0, dim - 1);
    }
    chain.push_back(Subspace::zero(d));
    const MultiProbabilityTable mt = multi_probability_table(pd, chain, tol);
    const ChainDecomposition cd = chain_decompose(pd.op(), chain, tol);
    double lam_total = 0.0;
    double p_total = 0.0;
    double worst = 0.0;
    for (std::size_t j = 0; j < mt.p.size(); ++j) {
        lam_total += mt.lam[j];
        p_total += mt.p[j];
        const Matrix pj = cd.supports[j].projector();
        double rule = 0.0;
        for (const HermitianOperator& ck : cd.components) rule += (pj * ck.matrix()).trace().real();
        worst = std::max(worst, std::abs(rule - mt.p[j]));
        worst = std::max(worst, std::abs(mt.joint.row(Index(j)).sum() - mt.p[j]));
    }
    t.check_le("chain-weights-sum-to-one", std::abs(lam_total - 1.0), tol.agree_tol);
    t.check_le("chain-overlap-sum-rule", worst, tol.agree_tol);
    t.check_le("chain-overlaps-exceed-one", 1.0 - p_total, tol.psd_tol);

    // Qubit deficiency state has unit trace and is not a state.
    const DensityMatrix qb = random_density(t.rng, 2, 2);
    const Subspace line = random_subspace(t.rng, 2, 1);
    t.attach("qubit", qb.matrix());
    t.attach("qubit_V", line);
    const auto rho_d = deficiency_state(qb, line, tol);
    t.check("qubit-deficiency-state-exists", rho_d.has_value(), 0.0);
    if (rho_d) {
        t.check_le("qubit-deficiency-unit-trace", std::abs(rho_d->trace() - 1.0), tol.agree_tol);
        t.check_le("qubit-deficiency-not-state", min_eigenvalue(*rho_d), -tol.psd_tol);
    }

    // Product states: weight and log-weight are super-multiplicative / super-additive.
    const Index d1 = t.rng.index(2, 3);
    const Index d2 = t.rng.index(2, 3);
    const DensityMatrix r1 = random_density(t.rng, d1, t.rng.index(1, d1));
    const DensityMatrix r2 = random_density(t.rng, d2, t.rng.index(1, d2));
    const Subspace v1 = random_subspace(t.rng, d1, t.rng.index(1, d1));
    const Subspace v2 = random_subspace(t.rng, d2, t.rng.index(1, d2));
    const DensityMatrix r12 = DensityMatrix::from_operator(tensor(r1.op(), r2.op()), tol);
    const double l1 = state_decompose(r1, v1, tol).lam;
    const double l2 = state_decompose(r2, v2, tol).lam;
    const double l12 = state_decompose(r12, tensor_subspace(v1, v2), tol).lam;
    t.check_le("product-weight-supermultiplicative", l1 * l2 - l12, tol.psd_tol);
    if (l1 > 0.0 && l2 > 0.0) {
        const double s12 = log_lambda(r12, tensor_subspace(v1, v2), tol);
        t.check_le("product-log-weight-superadditive",
                   log_lambda(r1, v1, tol) + log_lambda(r2, v2, tol) - s12, tol.agree_tol);
    }
}

void equality(Trial& t) {
    const ToleranceConfig& tol = t.tol;
    const Index d = t.rng.index(2, 6);
    const Index k = t.rng.index(1, d - 1);
    t.spec = {d, d, k, t.seed, Positivity::PositiveDefinite};

    // Commuting: V spanned by eigenvectors of rho.
    {
        const Matrix u = t.rng.unitary(d);
        RealVector mu(d);
        for (Index i = 0; i < d; ++i) mu(i) = t.rng.uniform(0.05, 1.0);
        mu /= mu.sum();
        const DensityMatrix rho = DensityMatrix::from_matrix(u * mu.cast<Complex>().asDiagonal() * u.adjoint(), tol);
        const Subspace v = Subspace::from_orthonormal(u.leftCols(k));
        t.attach("rho_commuting", rho.matrix());
        t.attach("V_commuting", v);
        const ProbabilityTable tab = probability_table(rho, v, tol);
        t.check_le("commuting-weight-equals-overlap", std::abs(tab.p - tab.lam), 1e-9);
    }

    // Non-commuting: each basis vector of V mixes two eigenvectors with distinct eigenvalues.
    {
        const Matrix u = t.rng.unitary(d);
        RealVector mu(d);
        for (Index i = 0; i < d; ++i) mu(i) = double(i + 1);
        mu /= mu.sum();
        const DensityMatrix rho = DensityMatrix::from_matrix(u * mu.cast<Complex>().asDiagonal() * u.adjoint(), tol);
        const Index pairs = t.rng.index(1, d / 2);
        Matrix cols(d, pairs);
        for (Index j = 0; j < pairs; ++j) {
            const double phi = t.rng.uniform(std::numbers::pi / 8.0, 3.0 * std::numbers::pi / 8.0);
            cols.col(j) = std::cos(phi) * u.col(2 * j) + std::sin(phi) * u.col(2 * j + 1);
        }
        const Subspace v = Subspace::from_orthonormal(cols);
        t.attach("rho_noncommuting", rho.matrix());
        t.attach("V_noncommuting", v);
        const ProbabilityTable tab = probability_table(rho, v, tol);
        t.check_le("noncommuting-weight-below-overlap", tab.lam - tab.p, -1e-6);
    }

    // Split of V: aligned with B's eigenvectors gives equality, a tilted line a strict gap.
    {
        const HermitianOperator a = random_psd(t.rng, d, d);
        const Index kv = t.rng.index(2, d);
        const Subspace v = random_subspace(t.rng, d, kv);
        t.attach("A", a.matrix());
        t.attach("V", v);
        const Decomposition dec = decompose(a, v, tol);
        const EigenSystem es = eigh(dec.B, tol);
        // The top kv eigenvectors span ran(B) = V.
        const Matrix top = es.vectors.rightCols(kv);
        const Index m = t.rng.index(1, kv - 1);
        const Subspace aligned = Subspace::from_orthonormal(top.leftCols(m));
        const Matrix pa = aligned.projector();
        const double lhs = (pa * dec.B.matrix()).trace().real();
        const double rhs = decompose(a, aligned, tol).tb;
        t.check_le("split-commuting-equality", std::abs(lhs - rhs), tol.agree_tol * a.trace());

        const double phi = t.rng.uniform(std::numbers::pi / 8.0, 3.0 * std::numbers::pi / 8.0);
        const Vector tilt = std::cos(phi) * top.col(0) + std::sin(phi) * top.col(kv - 1);
        const Subspace tilted = Subspace::span(Matrix(tilt), tol);
        const Matrix pt = tilted.projector();
        const double commutator = (pt * dec.B.matrix() - dec.B.matrix() * pt).norm();
        const double gap = (pt * dec.B.matrix()).trace().real() - decompose(a, tilted, tol).tb;
        t.check("split-noncommuting-gap", commutator > tol.agree_tol && gap > tol.psd_tol,
                std::max(0.0, tol.psd_tol - gap));
    }
}

void reconstruction(Trial& t) {
    const ToleranceConfig& tol = t.tol;
    const Index d = t.rng.index(2, 4);
    t.spec = {d, d, 0, t.seed, Positivity::PositiveDefinite};
    const DensityMatrix rho = random_density(t.rng, d, d);
    t.attach("rho", rho.matrix());

    std::vector<Probe> probes;
    for (const Vector& psi : tomographic_probes(d)) probes.push_back({psi, lambda_one_dim(rho.op(), psi, tol)});
    const HermitianOperator rec = reconstruct(probes, tol);
    t.check_le("tomographic-recovery", relative_difference(rec.matrix(), rho.matrix()), 1e-6);

    std::vector<Probe> random_probes;
    for (Index i = 0; i < d * d + 2; ++i) {
        const Vector psi = t.rng.unit_vector(d);
        random_probes.push_back({psi, lambda_one_dim(rho.op(), psi, tol)});
    }
    const HermitianOperator rec2 = reconstruct(random_probes, tol);
    t.check_le("random-probe-recovery", relative_difference(rec2.matrix(), rho.matrix()), 1e-6);
}

void masking(Trial& t) {
    const ToleranceConfig& tol = t.tol;
    const Index d = t.rng.index(2, 6);
    const Index k = t.rng.index(1, d - 1);
    t.spec = {d, d, k, t.seed, Positivity::PSD};
    const Subspace v = random_subspace(t.rng, d, k);
    const HermitianOperator inner = random_psd(t.rng, k, t.rng.index(1, k));
    const DensityMatrix rho = DensityMatrix::from_matrix(v.basis() * inner.matrix() * v.basis().adjoint(), tol);
    const DensityMatrix sigma = random_density(t.rng, d, t.rng.index(1, d - k));
    const double lam = t.rng.uniform(0.05, 0.95);
    t.attach("rho", rho.matrix());
    t.attach("sigma", sigma.matrix());
    t.attach("V", v);
    t.attach("lambda", lam);

    const DensityMatrix masked = mask(rho, sigma, lam, v, tol);
    const StateDecomposition un = unmask(masked, v, tol);
    t.check_le("recovered-weight", std::abs(un.lam - lam), 1e-9);
    t.check("recovered-parts-present", un.rho_B.has_value() && un.rho_C.has_value(), 0.0);
    if (un.rho_B) t.check_le("recovered-private-state", frob(un.rho_B->matrix(), rho.matrix()), 1e-8);
    if (un.rho_C) t.check_le("recovered-cover-state", frob(un.rho_C->matrix(), sigma.matrix()), 1e-8);

    const Subspace wrong = random_subspace(t.rng, d, k);
    t.attach("V_wrong", wrong);
    const double lam_wrong = unmask(masked, wrong, tol).lam;
    t.check("wrong-subspace-differs", std::abs(lam_wrong - lam) > 1e-6,
            std::max(0.0, 1e-6 - std::abs(lam_wrong - lam)));
}

void rank2(Trial& t) {
    const ToleranceConfig& tol = t.tol;
    const Index d = t.rng.index(2, 6);
    const Index k = t.rng.index(1, d - 1);
    t.spec = {d, 2, k, t.seed, d == 2 ? Positivity::PositiveDefinite : Positivity::PSD};
    const Subspace v = random_subspace(t.rng, d, k);
    const Subspace perp = complement(v, tol);
    // Support spanned by one direction in V and one in V-perp.
    Matrix frame(d, 2);
    frame.col(0) = v.basis() * t.rng.unit_vector(k);
    frame.col(1) = perp.basis() * t.rng.unit_vector(d - k);
    const HermitianOperator inner = random_psd(t.rng, 2, 2);
    const DensityMatrix rho = DensityMatrix::from_matrix(frame * inner.matrix() * frame.adjoint(), tol);
    t.attach("rho", rho.matrix());
    t.attach("V", v);

    const ProbabilityTable tab = probability_table(rho, v, tol);
    const double ratio = tab.lam / (tab.lam + tab.lam_perp);
    t.check_le("overlap-equals-weight-ratio", std::abs(tab.p - ratio), 1e-9);
}

void smoothness(Trial& t) {
    const ToleranceConfig& tol = t.tol;
    const Index d = t.rng.index(2, 5);
    const Index k = t.rng.index(1, d - 1);
    t.spec = {d, d, k, t.seed, Positivity::PositiveDefinite};
    const HermitianOperator a = random_psd(t.rng, d, d);
    const Subspace v = random_subspace(t.rng, d, k);
    HermitianOperator gen = random_hermitian(t.rng, d);
    gen = (1.0 / spectral_norm(gen)) * gen;
    t.attach("A", a.matrix());
    t.attach("V", v);
    t.attach("K", gen.matrix());

    const auto f = [&](double s) { return tb(a, apply_map(unitary_flow(gen, s), v, tol), tol); };
    const std::array<double, 3> deltas{1e-2, 1e-3, 1e-4};
    std::array<double, 3> q{};
    for (std::size_t i = 0; i < deltas.size(); ++i) q[i] = (f(deltas[i]) - f(-deltas[i])) / (2.0 * deltas[i]);
    for (std::size_t i = 0; i + 1 < q.size(); ++i) {
        const double ratio = q[i + 1] / q[i];
        t.check("difference-quotient-ratio", ratio >= 0.5 && ratio <= 2.0, std::abs(ratio - 1.0));
    }
}

void support_mixture(Trial& t) {
    const ToleranceConfig& tol = t.tol;
    const Index d = t.rng.index(2, 6);
    t.spec = {d, d, 0, t.seed, Positivity::PSD};

    // Span of a vector family with repeats and dependent members.
    {
        const Index r = t.rng.index(1, d);
        const Matrix g = t.rng.gaussian(d, r);
        std::vector<Vector> psis;
        for (Index j = 0; j < r; ++j) psis.push_back(g.col(j).normalized());
        const Index extra = t.rng.index(0, 2);
        for (Index j = 0; j < extra; ++j) psis.push_back((g * t.rng.gaussian(r, 1)).col(0).normalized());
        std::vector<double> w;
        for (std::size_t j = 0; j < psis.size(); ++j) w.push_back(t.rng.uniform(0.1, 2.0));
        const Subspace sup = support(psis, w, tol);
        const Subspace spanned = Subspace::span(std::span<const Vector>(psis), tol);
        t.attach("family", g);
        t.check("support-dimension", sup.dim() == r && spanned.dim() == r, 0.0);
        t.check_le("support-equals-span", subspace_distance(sup, spanned), 1e-8);
    }

    // Feasible mixture.
    {
        const Index r = t.rng.index(1, d);
        const DensityMatrix rho = random_density(t.rng, d, r);
        const Subspace ran = range_of(rho.op(), tol);
        const Index n = t.rng.index(1, 3);
        std::vector<Vector> psis;
        for (Index j = 0; j < n; ++j) psis.push_back(ran.basis() * t.rng.unit_vector(ran.dim()));
        t.attach("rho", rho.matrix());
        const Mixture mix = mixture_including(rho, psis, tol);

        const EigenSystem es = eigh(rho.op(), tol);
        const double lam_min = es.values(d - r);
        t.check_le("mixture-floor", std::abs(mix.floor_weight - lam_min / double(n)), 1e-12);
        double total = 0.0;
        double lowest = 0.0;
        Matrix rebuilt = Matrix::Zero(d, d);
        for (const MixtureEntry& e : mix.entries) {
            total += e.weight;
            lowest = std::min(lowest, e.weight);
            rebuilt += e.weight * e.state * e.state.adjoint();
        }
        t.check("mixture-weights-nonnegative", lowest >= 0.0, lowest);
        t.check_le("mixture-weights-sum-to-one", std::abs(total - 1.0), 1e-9);
        t.check_le("mixture-reassembles-rho", frob(rebuilt, rho.matrix()), 1e-9);
        for (const Vector& psi : psis) {
            double carried = 0.0;
            for (const MixtureEntry& e : mix.entries) {
                if (std::abs(e.state.dot(psi)) >= 1.0 - 1e-12) carried += e.weight;
            }
            t.check_le("mixture-includes-state", mix.floor_weight - carried, 1e-12);
        }
    }

    // Infeasible: rank-deficient state and a generic vector.
    {
        const Index r = t.rng.index(1, d - 1);
        const DensityMatrix rho = random_density(t.rng, d, r);
        const Vector psi = t.rng.unit_vector(d);
        t.attach("rho_deficient", rho.matrix());
        t.attach("psi", psi);
        bool rejected = false;
        try {
            mixture_including(rho, std::vector<Vector>{psi}, tol);
        } catch (const Error& e) {
            rejected = e.code() == ErrorCode::Infeasible;
        }
        t.check("mixture-rejects-outside-support", rejected, 0.0);
    }
}

void qubit_closed_form_grid(Trial& t) {
    const ToleranceConfig& tol = t.tol;
    const double a = 0.1 * double(1 + t.index % 9);
    const double theta = std::numbers::pi * double(1 + (t.index / 9) % 7) / 8.0;
    t.spec = {2, 2, 1, t.seed, Positivity::PositiveDefinite};
    t.attach("a", a);
    t.attach("theta", theta);

    const QubitClosedForm cf = qubit_closed_form(a, theta);
    const DensityMatrix rho = qubit_state(a, theta);
    const Subspace up = Subspace::from_orthonormal(Matrix(Vector::Unit(2, 0)));
    const ProbabilityTable tab = probability_table(rho, up, tol);
    t.check_le("closed-form-weight", std::abs(tab.lam - cf.lam), 1e-9);
    t.check_le("closed-form-perp-weight", std::abs(tab.lam_perp - cf.lam_perp), 1e-9);
    t.check_le("closed-form-deficiency", std::abs(tab.deficiency - cf.deficiency), 1e-9);
    t.check_le("closed-form-overlap", std::abs(tab.p - cf.p), 1e-9);
    const auto rho_d = deficiency_state(rho, up, tol);
    t.check("closed-form-deficiency-state-exists", rho_d.has_value() && cf.bloch_D.has_value(), 0.0);
    if (rho_d && cf.bloch_D) {
        const double n2 = bloch_vector(*rho_d).norm2();
        t.check_le("closed-form-deficiency-bloch-norm", std::abs(n2 - cf.bloch_D->norm2()), 1e-9);
    }
}

}  // namespace localize::verify::detail
