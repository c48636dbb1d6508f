#include "localize/quantum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace localize {

namespace {

double clamp_probability(double x, const ToleranceConfig& tol, const char* what) {
    if (x < -tol.psd_tol || x > 1.0 + tol.psd_tol) {
        throw Error(ErrorCode::DomainError,
                    std::string(what) + " = " + std::to_string(x) + " is outside [0, 1]");
    }
    return std::clamp(x, 0.0, 1.0);
}

}  // namespace

// ---------------------------------------------------------------------------
// DensityMatrix

DensityMatrix DensityMatrix::from_operator(const HermitianOperator& op, const ToleranceConfig& tol) {
    if (!is_psd(op, tol)) {
        throw Error(ErrorCode::NotDensityMatrix,
                    "state has negative eigenvalue " + std::to_string(min_eigenvalue(op)));
    }
    if (std::abs(op.trace() - 1.0) > tol.agree_tol) {
        throw Error(ErrorCode::NotDensityMatrix, "trace is " + std::to_string(op.trace()));
    }
    return DensityMatrix(op);
}

DensityMatrix DensityMatrix::from_matrix(const Matrix& m, const ToleranceConfig& tol) {
    return from_operator(HermitianOperator::from_matrix(m, tol), tol);
}

DensityMatrix DensityMatrix::pure(const Vector& psi) {
    const double norm = psi.norm();
    if (norm == 0.0) throw Error(ErrorCode::ZeroVector, "pure state from zero vector");
    return DensityMatrix(HermitianOperator::outer(psi / norm));
}

DensityMatrix DensityMatrix::maximally_mixed(Index dim) {
    return DensityMatrix((1.0 / double(dim)) * HermitianOperator::identity(dim));
}

// ---------------------------------------------------------------------------
// Qubits

BlochVector bloch_vector(const HermitianOperator& q) {
    require_same_dim(q.dim(), 2, "Bloch vector needs a qubit operator");
    const Matrix& m = q.matrix();
    return {2.0 * m(0, 1).real(), -2.0 * m(0, 1).imag(), (m(0, 0) - m(1, 1)).real()};
}

HermitianOperator bloch_operator(const BlochVector& r) {
    Matrix m(2, 2);
    m << Complex(1.0 + r.z, 0.0), Complex(r.x, -r.y), Complex(r.x, r.y), Complex(1.0 - r.z, 0.0);
    return HermitianOperator::hermitian_part(0.5 * m);
}

DensityMatrix qubit_state(double a, double theta) {
    return DensityMatrix::from_operator(
        bloch_operator({a * std::sin(theta), 0.0, a * std::cos(theta)}));
}

QubitClosedForm qubit_closed_form(double a, double theta) {
    if (!(a >= 0.0 && a < 1.0)) {
        throw Error(ErrorCode::DomainError, "a must lie in [0, 1), got " + std::to_string(a));
    }
    if (!(theta > 0.0 && theta < std::numbers::pi)) {
        throw Error(ErrorCode::DomainError, "theta must lie in (0, pi), got " + std::to_string(theta));
    }
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    QubitClosedForm q;
    q.lam = 0.5 * (1.0 - a * a) / (1.0 - a * c);
    q.lam_perp = 0.5 * (1.0 - a * a) / (1.0 + a * c);
    q.deficiency = a * a * s * s / (1.0 - a * a * c * c);
    q.p = 0.5 * (1.0 + a * c);
    if (a > 0.0) q.bloch_D = BlochVector{(1.0 - a * a * c * c) / (a * s), 0.0, a * c};
    return q;
}

// ---------------------------------------------------------------------------
// Decomposition of states

StateDecomposition state_decompose(const DensityMatrix& rho, const Subspace& v,
                                   const ToleranceConfig& tol) {
    Decomposition d = decompose(rho.op(), v, tol);
    StateDecomposition s;
    s.lam = clamp_probability(d.tb, tol, "localization weight");
    if (s.lam > tol.rank_tol) {
        s.rho_B = DensityMatrix::from_operator((1.0 / d.tb) * d.B, tol);
    }
    if (1.0 - s.lam > tol.rank_tol) {
        s.rho_C = DensityMatrix::from_operator((1.0 / d.tc) * d.C, tol);
    }
    s.B = std::move(d.B);
    s.C = std::move(d.C);
    return s;
}

ProbabilityTable probability_table(const DensityMatrix& rho, const Subspace& v,
                                   const ToleranceConfig& tol) {
    ProbabilityTable t;
    t.lam = state_decompose(rho, v, tol).lam;
    t.lam_perp = state_decompose(rho, complement(v, tol), tol).lam;
    t.p = clamp_probability(tp(rho.op(), v), tol, "overlap probability");
    t.v_b = t.lam;
    t.vperp_b = 0.0;
    t.v_c = t.p - t.lam;
    t.vperp_c = 1.0 - t.p;
    t.deficiency = 1.0 - t.lam - t.lam_perp;
    return t;
}

MultiProbabilityTable multi_probability_table(const DensityMatrix& rho,
                                              std::span<const Subspace> chain,
                                              const ToleranceConfig& tol) {
    const ChainDecomposition cd = chain_decompose(rho.op(), chain, tol);
    const std::size_t n = cd.components.size();
    MultiProbabilityTable t;
    t.lam = cd.weights;
    t.supports = cd.supports;
    t.joint = Eigen::MatrixXd::Zero(Index(n), Index(n));
    t.joint_perp = Eigen::MatrixXd::Zero(Index(n), Index(n));
    double lam_sum = 0.0;
    double p_sum = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        const Matrix pj = cd.supports[j].projector();
        t.p.push_back((pj * rho.matrix()).trace().real());
        p_sum += t.p.back();
        lam_sum += t.lam[j];
        for (std::size_t k = 0; k < n; ++k) {
            const double joint = (pj * cd.components[k].matrix()).trace().real();
            t.joint(Index(j), Index(k)) = joint;
            t.joint_perp(Index(j), Index(k)) = cd.weights[k] - joint;
        }
    }
    if (std::abs(lam_sum - 1.0) > tol.agree_tol) {
        throw Error(ErrorCode::BlockInconsistency,
                    "component weights sum to " + std::to_string(lam_sum));
    }
    if (p_sum < 1.0 - tol.psd_tol) {
        throw Error(ErrorCode::BlockInconsistency,
                    "support overlaps sum to " + std::to_string(p_sum) + " < 1");
    }
    return t;
}

std::optional<HermitianOperator> deficiency_state(const DensityMatrix& rho, const Subspace& v,
                                                  const ToleranceConfig& tol) {
    const HermitianOperator d = deficiency_operator(rho.op(), v, tol);
    const double weight = d.trace();
    if (weight <= tol.rank_tol) return std::nullopt;
    return (1.0 / weight) * d;
}

// ---------------------------------------------------------------------------
// Supports and mixtures

Subspace support(std::span<const Vector> psis, std::span<const double> weights,
                 const ToleranceConfig& tol) {
    if (psis.empty()) throw Error(ErrorCode::DimensionMismatch, "support of an empty set");
    require_same_dim(Index(weights.size()), Index(psis.size()), "weights vs vectors");
    const Index n = psis.front().size();
    HermitianOperator sum = HermitianOperator::zero(n);
    for (std::size_t k = 0; k < psis.size(); ++k) {
        require_same_dim(psis[k].size(), n, "vector length");
        if (psis[k].norm() == 0.0) {
            throw Error(ErrorCode::ZeroVector, "vector " + std::to_string(k) + " is zero");
        }
        if (!(weights[k] > 0.0)) {
            throw Error(ErrorCode::DomainError, "weights must be positive");
        }
        sum += weights[k] * HermitianOperator::outer(psis[k]);
    }
    return range_of(sum, tol);
}

Mixture mixture_including(const DensityMatrix& rho, std::span<const Vector> psis,
                          const ToleranceConfig& tol) {
    if (psis.empty()) throw Error(ErrorCode::DimensionMismatch, "no states to include");
    const Index d = rho.dim();
    const EigenSystem es = eigh(rho.op(), tol);
    const double scale = es.max_abs();

    std::vector<Index> kept;
    for (Index i = 0; i < d; ++i) {
        if (es.values(i) > tol.rank_tol * scale) kept.push_back(i);
    }
    Matrix range(d, Index(kept.size()));
    double lam_min = std::numeric_limits<double>::infinity();
    for (Index c = 0; c < range.cols(); ++c) {
        range.col(c) = es.vectors.col(kept[c]);
        lam_min = std::min(lam_min, es.values(kept[c]));
    }
    const Subspace ran = Subspace::from_orthonormal(range, tol);
    const Matrix proj = ran.projector();

    std::vector<Vector> units;
    for (std::size_t k = 0; k < psis.size(); ++k) {
        require_same_dim(psis[k].size(), d, "state length");
        const double norm = psis[k].norm();
        if (norm == 0.0) throw Error(ErrorCode::ZeroVector, "state " + std::to_string(k) + " is zero");
        const Vector unit = psis[k] / norm;
        if (ran.distance_to(unit) > tol.rank_tol) {
            throw Error(ErrorCode::Infeasible,
                        "state " + std::to_string(k) + " is not in the support of rho");
        }
        units.push_back(unit);
    }

    Mixture mix;
    const double n = double(psis.size());
    mix.floor_weight = lam_min / n;
    for (const Vector& unit : units) {
        // Orthonormal basis of ran(rho) whose first element is psi_k.
        mix.entries.push_back({mix.floor_weight, unit});
        const Vector inside = (proj * unit).normalized();
        const EigenSystem rest =
            eigh(HermitianOperator::hermitian_part(proj - inside * inside.adjoint()), tol);
        for (Index i = d - 1; i >= 0; --i) {
            if (rest.values(i) > 0.5) mix.entries.push_back({mix.floor_weight, rest.vectors.col(i)});
        }
    }

    const HermitianOperator residue =
        rho.op() - lam_min * HermitianOperator::hermitian_part(proj);
    if (min_eigenvalue(residue) < -tol.psd_tol * scale) {
        throw Error(ErrorCode::BlockInconsistency, "residue rho - lambda_min P is not PSD");
    }
    const EigenSystem rs = eigh(residue, tol);
    constexpr double kNegligible = 1e-14;
    for (Index i = d - 1; i >= 0; --i) {
        if (rs.values(i) > kNegligible * scale) mix.entries.push_back({rs.values(i), rs.vectors.col(i)});
    }
    return mix;
}

// ---------------------------------------------------------------------------
// Reconstruction

std::vector<Vector> tomographic_probes(Index dim) {
    std::vector<Vector> probes;
    const double r = 1.0 / std::sqrt(2.0);
    for (Index i = 0; i < dim; ++i) probes.push_back(Vector::Unit(dim, i));
    for (Index i = 0; i < dim; ++i) {
        for (Index j = i + 1; j < dim; ++j) {
            Vector plus = Vector::Zero(dim);
            plus(i) = r;
            plus(j) = r;
            Vector phase = Vector::Zero(dim);
            phase(i) = r;
            phase(j) = Complex(0.0, r);
            probes.push_back(plus);
            probes.push_back(phase);
        }
    }
    return probes;
}

HermitianOperator reconstruct(std::span<const Probe> probes, const ToleranceConfig& tol) {
    if (probes.empty()) throw Error(ErrorCode::UnderdeterminedSystem, "no probes");
    const Index d = probes.front().psi.size();
    const Index unknowns = d * d;
    if (Index(probes.size()) < unknowns) {
        throw Error(ErrorCode::UnderdeterminedSystem,
                    std::to_string(probes.size()) + " probes for " + std::to_string(unknowns) +
                        " unknowns");
    }

    // Unknowns: M_ii, then (Re M_ij, Im M_ij) for i < j.
    Eigen::MatrixXd design(Index(probes.size()), unknowns);
    RealVector rhs(Index(probes.size()));
    for (std::size_t r = 0; r < probes.size(); ++r) {
        const Probe& pr = probes[r];
        require_same_dim(pr.psi.size(), d, "probe length");
        if (!(pr.lam > 0.0)) {
            throw Error(ErrorCode::DomainError, "probe weights must be positive");
        }
        const double norm = pr.psi.norm();
        if (norm == 0.0) throw Error(ErrorCode::ZeroVector, "probe " + std::to_string(r) + " is zero");
        const Vector psi = pr.psi / norm;
        Index col = 0;
        for (Index i = 0; i < d; ++i) design(Index(r), col++) = std::norm(psi(i));
        for (Index i = 0; i < d; ++i) {
            for (Index j = i + 1; j < d; ++j) {
                const Complex c = std::conj(psi(i)) * psi(j);
                design(Index(r), col++) = 2.0 * c.real();
                design(Index(r), col++) = -2.0 * c.imag();
            }
        }
        rhs(Index(r)) = 1.0 / pr.lam;
    }

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
    if (qr.rank() < unknowns) {
        throw Error(ErrorCode::UnderdeterminedSystem,
                    "probe system has rank " + std::to_string(qr.rank()) + " < " +
                        std::to_string(unknowns));
    }
    const RealVector x = qr.solve(rhs);
    const double residual = (design * x - rhs).norm() / rhs.norm();
    if (residual > tol.agree_tol) {
        throw Error(ErrorCode::InconsistentProbes,
                    "relative least-squares residual " + std::to_string(residual));
    }

    Matrix m = Matrix::Zero(d, d);
    Index col = 0;
    for (Index i = 0; i < d; ++i) m(i, i) = x(col++);
    for (Index i = 0; i < d; ++i) {
        for (Index j = i + 1; j < d; ++j) {
            m(i, j) = Complex(x(col), x(col + 1));
            m(j, i) = std::conj(m(i, j));
            col += 2;
        }
    }
    const HermitianOperator inverse = HermitianOperator::hermitian_part(m);
    try {
        require_positive_definite(inverse, tol);
    } catch (const Error&) {
        throw Error(ErrorCode::InconsistentProbes, "recovered inverse is not positive definite");
    }
    return pseudo_power(inverse, -1.0, tol);
}

// ---------------------------------------------------------------------------
// Entropic quantities

double entropy(const DensityMatrix& rho, const ToleranceConfig& tol) {
    const EigenSystem es = eigh(rho.op(), tol);
    const double scale = es.max_abs();
    double s = 0.0;
    for (Index i = 0; i < es.values.size(); ++i) {
        const double mu = es.values(i);
        if (mu > tol.rank_tol * scale) s -= mu * std::log(mu);
    }
    return s;
}

double log_lambda(const DensityMatrix& rho, const Subspace& v, const ToleranceConfig& tol) {
    const double lam = state_decompose(rho, v, tol).lam;
    return lam > 0.0 ? std::log(lam) : -std::numeric_limits<double>::infinity();
}

// ---------------------------------------------------------------------------
// Masking

DensityMatrix mask(const DensityMatrix& rho, const DensityMatrix& sigma, double lam,
                   const Subspace& v, const ToleranceConfig& tol) {
    require_same_dim(rho.dim(), sigma.dim(), "rho vs sigma");
    require_same_dim(v.ambient_dim(), rho.dim(), "subspace ambient dimension vs state");
    if (!(lam > 0.0 && lam < 1.0)) {
        throw Error(ErrorCode::DomainError, "mixing weight must lie in (0, 1)");
    }
    if (!contains(v, range_of(rho.op(), tol), tol)) {
        throw Error(ErrorCode::SupportViolation, "support of rho is not inside V");
    }
    if (!intersect(range_of(sigma.op(), tol), v, tol).is_zero()) {
        throw Error(ErrorCode::SupportViolation, "support of sigma meets V");
    }
    return DensityMatrix::from_operator(lam * rho.op() + (1.0 - lam) * sigma.op(), tol);
}

StateDecomposition unmask(const DensityMatrix& rho_prime, const Subspace& v,
                          const ToleranceConfig& tol) {
    return state_decompose(rho_prime, v, tol);
}

Matrix measurement_projector(const DensityMatrix& rho, const Subspace& v,
                             const ToleranceConfig& tol) {
    require_same_dim(v.ambient_dim(), rho.dim(), "subspace ambient dimension vs state");
    const Subspace vt = intersect(v, range_of(rho.op(), tol), tol);
    return apply_map(pseudo_power(rho.op(), -0.5, tol).matrix(), vt, tol).projector();
}

}  // namespace localize
