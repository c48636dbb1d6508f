#include <cmath>
#include <optional>

#include "localize/verify.hpp"

namespace localize::verify {

namespace {

// Real basis of k x k Hermitian matrices: diagonal units, then the real and
// imaginary off-diagonal pairs.
std::vector<Matrix> hermitian_basis(Index k) {
    std::vector<Matrix> basis;
    for (Index i = 0; i < k; ++i) {
        Matrix e = Matrix::Zero(k, k);
        e(i, i) = 1.0;
        basis.push_back(e);
    }
    for (Index i = 0; i < k; ++i) {
        for (Index j = i + 1; j < k; ++j) {
            Matrix re = Matrix::Zero(k, k);
            re(i, j) = 1.0;
            re(j, i) = 1.0;
            basis.push_back(re);
            Matrix im = Matrix::Zero(k, k);
            im(i, j) = Complex(0.0, 1.0);
            im(j, i) = Complex(0.0, -1.0);
            basis.push_back(im);
        }
    }
    return basis;
}

struct Barrier {
    Matrix a;  // A compressed to the feasible directions
    Matrix v;  // V in the same coordinates
    const std::vector<Matrix>* basis;

    Matrix x_of(const Eigen::VectorXd& params) const {
        const Index k = v.cols();
        Matrix x = Matrix::Zero(k, k);
        for (std::size_t i = 0; i < basis->size(); ++i) x += params(Index(i)) * (*basis)[i];
        return x;
    }

    // Cholesky of the slack A - V X V^dagger, or nothing when it is not positive definite.
    std::optional<Eigen::LLT<Matrix>> slack(const Eigen::VectorXd& params) const {
        const Matrix x = x_of(params);
        Matrix s = a - v * x * v.adjoint();
        s = 0.5 * (s + s.adjoint()).eval();
        Eigen::LLT<Matrix> llt(s);
        if (llt.info() != Eigen::Success) return std::nullopt;
        for (Index i = 0; i < s.rows(); ++i) {
            if (!(llt.matrixLLT()(i, i).real() > 0.0)) return std::nullopt;
        }
        return llt;
    }

    static double log_det(const Eigen::LLT<Matrix>& llt) {
        double sum = 0.0;
        for (Index i = 0; i < llt.matrixLLT().rows(); ++i) sum += std::log(llt.matrixLLT()(i, i).real());
        return 2.0 * sum;
    }

    double trace_x(const Eigen::VectorXd& params) const { return x_of(params).trace().real(); }
};

}  // namespace

OracleResult sdp_oracle_tb(const HermitianOperator& a, const Subspace& v, Index iters,
                           const ToleranceConfig& tol) {
    require_same_dim(v.ambient_dim(), a.dim(), "subspace ambient dimension vs operator");
    if (a.dim() > 4) throw Error(ErrorCode::DomainError, "oracle is limited to dim <= 4");
    require_psd(a, tol);

    OracleResult result;
    const Eigen::SelfAdjointEigenSolver<Matrix> spectrum(a.matrix(), Eigen::EigenvaluesOnly);
    const double scale = spectrum.eigenvalues().cwiseAbs().maxCoeff();
    if (v.is_zero() || scale == 0.0) {
        result.converged = true;
        return result;
    }

    // Directions in ker(A) orthogonal to V carry no information and would make
    // every feasible slack singular; compress them away.
    const Subspace dead = intersect(complement(v, tol), complement(range_of(a, tol), tol), tol);
    const Matrix u = complement(dead, tol).basis();
    const std::vector<Matrix> basis = hermitian_basis(v.dim());
    Barrier f{u.adjoint() * a.matrix() * u, u.adjoint() * v.basis(), &basis};
    const Index m = u.cols();
    const Index k = v.dim();
    const Index np = Index(basis.size());

    Eigen::VectorXd params = Eigen::VectorXd::Zero(np);
    double shift = scale;
    std::optional<Eigen::LLT<Matrix>> llt;
    for (int attempt = 0; attempt < 60; ++attempt) {
        params.head(k).setConstant(-shift);
        llt = f.slack(params);
        if (llt) break;
        shift *= 2.0;
    }
    if (!llt) return result;

    // The barrier optimum is within mu * m of the true maximum.
    const double target_gap = 1e-9 * scale;
    constexpr Index kNewtonPerStage = 50;
    double mu = scale;
    while (true) {
        // Damped Newton on Tr X + mu log det(S) at fixed mu. Near the end the
        // slack is ill-conditioned and the decrement stalls at roundoff level,
        // so each stage is capped; every iterate stays strictly feasible.
        for (Index stage = 0; stage < kNewtonPerStage; ++stage) {
            if (result.iterations >= iters) {
                result.value = f.trace_x(params);
                return result;
            }
            ++result.iterations;
            const Matrix g = f.v.adjoint() * llt->solve(f.v);
            std::vector<Matrix> ge(basis.size());
            Eigen::VectorXd grad(np);
            for (Index i = 0; i < np; ++i) {
                ge[std::size_t(i)] = g * basis[std::size_t(i)];
                grad(i) = basis[std::size_t(i)].trace().real() - mu * ge[std::size_t(i)].trace().real();
            }
            Eigen::MatrixXd neg_hess(np, np);
            for (Index i = 0; i < np; ++i) {
                for (Index j = i; j < np; ++j) {
                    const double h = mu * (ge[std::size_t(i)] * ge[std::size_t(j)]).trace().real();
                    neg_hess(i, j) = h;
                    neg_hess(j, i) = h;
                }
            }
            const Eigen::VectorXd step = neg_hess.ldlt().solve(grad);
            const double decrement = grad.dot(step);
            if (!(decrement > 0.0) || decrement / mu < 1e-9) break;

            const double value = f.trace_x(params) + mu * Barrier::log_det(*llt);
            double t = 1.0;
            bool moved = false;
            while (t > 1e-14) {
                const Eigen::VectorXd trial = params + t * step;
                auto trial_llt = f.slack(trial);
                if (trial_llt) {
                    const double trial_value = f.trace_x(trial) + mu * Barrier::log_det(*trial_llt);
                    if (trial_value >= value + 0.25 * t * decrement) {
                        params = trial;
                        llt = std::move(trial_llt);
                        moved = true;
                        break;
                    }
                }
                t *= 0.5;
            }
            if (!moved) break;
        }
        if (mu * double(m) <= target_gap) break;
        mu *= 0.2;
    }
    result.value = f.trace_x(params);
    result.converged = true;
    return result;
}

SuiteReport maximality_falsifier(const HermitianOperator& a, const Subspace& v,
                                 const Decomposition& dec, Index trials, std::uint64_t seed,
                                 const ToleranceConfig& tol) {
    const std::string property = "maximality-falsifier";
    SuiteReport report("maximality");
    const Subspace& dirs = dec.ran_B;
    if (dirs.is_zero()) {
        report.set_note(property, "no directions");
        report.record_pass(property, 0.0);
        return report;
    }
    const Eigen::SelfAdjointEigenSolver<Matrix> spectrum(a.matrix(), Eigen::EigenvaluesOnly);
    const double eps = 1e-6 * spectrum.eigenvalues().cwiseAbs().maxCoeff();
    const Matrix ker_c = complement(dec.ran_C, tol).basis();
    const HermitianOperator gap = a - dec.B;

    for (Index trial = 0; trial < trials; ++trial) {
        const std::uint64_t trial_seed = derive_seed(seed, std::uint64_t(trial));
        Rng rng(trial_seed);
        const Vector dir = dirs.basis() * rng.unit_vector(dirs.dim());
        const double s2 = (ker_c.adjoint() * dir).squaredNorm();
        const double lowest = min_eigenvalue(gap - eps * HermitianOperator::outer(dir));
        const double threshold = -0.5 * eps * s2;
        if (lowest < threshold) {
            report.record_pass(property, 0.0);
            continue;
        }
        Counterexample ce;
        ce.spec = InstanceSpec{a.dim(), range_of(a, tol).dim(), v.dim(), trial_seed, Positivity::PSD};
        ce.residual = (lowest - threshold) / eps;
        ce.payload["property"] = property;
        ce.payload["spec"] = to_json(ce.spec);
        ce.payload["residual"] = ce.residual;
        ce.payload["A"] = io::matrix_to_json(a.matrix());
        ce.payload["V"] = io::subspace_to_json(v);
        ce.payload["direction"] = io::vector_to_json(dir);
        report.record_failure(property, std::move(ce));
    }
    return report;
}

}  // namespace localize::verify
