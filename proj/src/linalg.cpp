#include "localize/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace localize {

namespace {

// Components below this magnitude are skipped when fixing eigenvector phases.
constexpr double kPhaseCutoff = 1e-10;

Matrix adjoint_part(const Matrix& m) { return 0.5 * (m + m.adjoint()); }

void normalize_phase(Eigen::Ref<Vector> v) {
    for (Index i = 0; i < v.size(); ++i) {
        const double mag = std::abs(v(i));
        if (mag > kPhaseCutoff) {
            v *= std::conj(v(i)) / mag;
            v(i) = Complex(v(i).real(), 0.0);
            return;
        }
    }
}

bool lexicographically_greater(const Vector& a, const Vector& b) {
    for (Index i = 0; i < a.size(); ++i) {
        if (a(i).real() != b(i).real()) return a(i).real() > b(i).real();
        if (a(i).imag() != b(i).imag()) return a(i).imag() > b(i).imag();
    }
    return false;
}

double spectral_norm(const Matrix& m) {
    if (m.size() == 0) return 0.0;
    Eigen::JacobiSVD<Matrix> svd(m);
    return svd.singularValues()(0);
}

Subspace basis_from_eigen(const EigenSystem& es, const std::vector<Index>& keep, Index n,
                          const ToleranceConfig& tol) {
    Matrix basis(n, static_cast<Index>(keep.size()));
    for (Index c = 0; c < basis.cols(); ++c) basis.col(c) = es.vectors.col(keep[c]);
    return basis.cols() == 0 ? Subspace::zero(n) : Subspace::from_orthonormal(basis, tol);
}

}  // namespace

void require_same_dim(Index a, Index b, const char* what) {
    if (a != b) {
        throw Error(ErrorCode::DimensionMismatch, std::string(what) + ": " + std::to_string(a) +
                                                      " vs " + std::to_string(b));
    }
}

// ---------------------------------------------------------------------------
// HermitianOperator

HermitianOperator HermitianOperator::from_matrix(const Matrix& m, const ToleranceConfig& tol) {
    if (m.rows() < 1 || m.rows() != m.cols()) {
        throw Error(ErrorCode::DimensionMismatch,
                    "operator must be square and non-empty, got " + std::to_string(m.rows()) + "x" +
                        std::to_string(m.cols()));
    }
    if (!m.allFinite()) throw Error(ErrorCode::DomainError, "operator has non-finite entries");
    const double max_entry = m.cwiseAbs().maxCoeff();
    const double asym = (m - m.adjoint()).cwiseAbs().maxCoeff();
    if (asym > tol.hermitian_tol * (1.0 + max_entry)) {
        throw Error(ErrorCode::NotHermitian,
                    "max |M_ij - conj(M_ji)| = " + std::to_string(asym) + " exceeds tolerance");
    }
    return HermitianOperator(adjoint_part(m));
}

HermitianOperator HermitianOperator::hermitian_part(const Matrix& m) {
    return HermitianOperator(adjoint_part(m));
}

HermitianOperator HermitianOperator::zero(Index dim) {
    return HermitianOperator(Matrix::Zero(dim, dim));
}

HermitianOperator HermitianOperator::identity(Index dim) {
    return HermitianOperator(Matrix::Identity(dim, dim));
}

HermitianOperator HermitianOperator::diagonal(const RealVector& values) {
    return HermitianOperator(values.cast<Complex>().asDiagonal().toDenseMatrix());
}

HermitianOperator HermitianOperator::diagonal(std::initializer_list<double> values) {
    RealVector v(static_cast<Index>(values.size()));
    std::copy(values.begin(), values.end(), v.data());
    return diagonal(v);
}

HermitianOperator HermitianOperator::outer(const Vector& v) {
    return HermitianOperator(adjoint_part(v * v.adjoint()));
}

HermitianOperator operator+(const HermitianOperator& a, const HermitianOperator& b) {
    require_same_dim(a.dim(), b.dim(), "operator sum");
    return HermitianOperator(a.m_ + b.m_);
}

HermitianOperator operator-(const HermitianOperator& a, const HermitianOperator& b) {
    require_same_dim(a.dim(), b.dim(), "operator difference");
    return HermitianOperator(a.m_ - b.m_);
}

HermitianOperator operator*(double s, const HermitianOperator& a) {
    return HermitianOperator(s * a.m_);
}

HermitianOperator& HermitianOperator::operator+=(const HermitianOperator& other) {
    require_same_dim(dim(), other.dim(), "operator sum");
    m_ += other.m_;
    return *this;
}

HermitianOperator HermitianOperator::conjugated_by(const Matrix& u) const {
    require_same_dim(u.cols(), dim(), "conjugation");
    return HermitianOperator(adjoint_part(u * m_ * u.adjoint()));
}

double EigenSystem::max_abs() const {
    return values.size() == 0 ? 0.0 : values.cwiseAbs().maxCoeff();
}

// ---------------------------------------------------------------------------
// Subspace

Subspace Subspace::zero(Index ambient_dim) { return Subspace(Matrix(ambient_dim, 0)); }

Subspace Subspace::full(Index ambient_dim) {
    return Subspace(Matrix::Identity(ambient_dim, ambient_dim));
}

Subspace Subspace::from_orthonormal(const Matrix& basis, const ToleranceConfig& tol) {
    if (basis.rows() < 1) throw Error(ErrorCode::DimensionMismatch, "ambient dimension must be >= 1");
    if (basis.cols() > basis.rows()) {
        throw Error(ErrorCode::DimensionMismatch, "more basis vectors than ambient dimension");
    }
    if (basis.cols() == 0) return Subspace(basis);
    const Matrix gram = basis.adjoint() * basis;
    const double err = (gram - Matrix::Identity(basis.cols(), basis.cols())).cwiseAbs().maxCoeff();
    if (err > tol.agree_tol) {
        throw Error(ErrorCode::DomainError,
                    "basis is not orthonormal (max |B^dagger B - I| = " + std::to_string(err) + ")");
    }
    return Subspace(basis);
}

Subspace Subspace::span(const Matrix& columns, const ToleranceConfig& tol) {
    if (columns.cols() == 0) return zero(columns.rows());
    if (!columns.allFinite()) throw Error(ErrorCode::DomainError, "non-finite spanning vectors");
    Eigen::JacobiSVD<Matrix> svd(columns, Eigen::ComputeThinU);
    const RealVector& s = svd.singularValues();
    if (s(0) == 0.0) return zero(columns.rows());
    Index rank = 0;
    while (rank < s.size() && s(rank) > tol.rank_tol * s(0)) ++rank;
    return Subspace(svd.matrixU().leftCols(rank));
}

Subspace Subspace::span(std::span<const Vector> vectors, const ToleranceConfig& tol) {
    if (vectors.empty()) throw Error(ErrorCode::DimensionMismatch, "span of an empty vector list");
    Matrix cols(vectors.front().size(), static_cast<Index>(vectors.size()));
    for (Index c = 0; c < cols.cols(); ++c) {
        require_same_dim(vectors[c].size(), cols.rows(), "span vector length");
        cols.col(c) = vectors[c];
    }
    return span(cols, tol);
}

Matrix Subspace::projector() const { return basis_ * basis_.adjoint(); }

double Subspace::distance_to(const Vector& v) const {
    require_same_dim(v.size(), ambient_dim(), "vector vs subspace");
    return (v - basis_ * (basis_.adjoint() * v)).norm();
}

// ---------------------------------------------------------------------------
// Spectral operations

EigenSystem eigh(const HermitianOperator& op, const ToleranceConfig& tol) {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(op.matrix());
    if (solver.info() != Eigen::Success) {
        throw Error(ErrorCode::ConvergenceFailure, "Hermitian eigensolver did not converge");
    }
    EigenSystem es{solver.eigenvalues(), solver.eigenvectors()};
    for (Index c = 0; c < es.vectors.cols(); ++c) normalize_phase(es.vectors.col(c));

    // Deterministic order inside clusters of (numerically) equal eigenvalues.
    const double tie = tol.rank_tol * std::max(es.max_abs(), std::numeric_limits<double>::min());
    const Index n = es.values.size();
    Index start = 0;
    while (start < n) {
        Index end = start + 1;
        while (end < n && es.values(end) - es.values(end - 1) <= tie) ++end;
        if (end - start > 1) {
            std::vector<Index> order(static_cast<std::size_t>(end - start));
            std::iota(order.begin(), order.end(), start);
            std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) {
                return lexicographically_greater(es.vectors.col(a), es.vectors.col(b));
            });
            const Matrix block = es.vectors.middleCols(start, end - start);
            const RealVector vals = es.values.segment(start, end - start);
            for (Index k = 0; k < end - start; ++k) {
                es.vectors.col(start + k) = block.col(order[k] - start);
                es.values(start + k) = vals(order[k] - start);
            }
        }
        start = end;
    }
    return es;
}

HermitianOperator pseudo_power(const HermitianOperator& op, double exponent,
                               const ToleranceConfig& tol) {
    const EigenSystem es = eigh(op, tol);
    const double scale = es.max_abs();
    const bool integral = exponent == std::round(exponent);
    Matrix out = Matrix::Zero(op.dim(), op.dim());
    if (scale == 0.0) return HermitianOperator::hermitian_part(out);
    for (Index i = 0; i < es.values.size(); ++i) {
        const double a = es.values(i);
        if (std::abs(a) <= tol.rank_tol * scale) continue;
        if (!integral && a < 0.0) {
            if (a < -tol.psd_tol * scale) {
                throw Error(ErrorCode::NegativeEigenvalue,
                            "eigenvalue " + std::to_string(a) + " under non-integer power");
            }
            continue;
        }
        const double w = exponent == 0.0 ? 1.0 : std::pow(a, exponent);
        out += w * es.vectors.col(i) * es.vectors.col(i).adjoint();
    }
    return HermitianOperator::hermitian_part(out);
}

Subspace range_of(const HermitianOperator& op, double reference_scale, const ToleranceConfig& tol) {
    const EigenSystem es = eigh(op, tol);
    std::vector<Index> keep;
    if (reference_scale > 0.0) {
        for (Index i = es.values.size() - 1; i >= 0; --i) {
            if (std::abs(es.values(i)) > tol.rank_tol * reference_scale) keep.push_back(i);
        }
    }
    return basis_from_eigen(es, keep, op.dim(), tol);
}

Subspace range_of(const HermitianOperator& op, const ToleranceConfig& tol) {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(op.matrix(), Eigen::EigenvaluesOnly);
    const double scale = solver.eigenvalues().size() ? solver.eigenvalues().cwiseAbs().maxCoeff() : 0.0;
    return range_of(op, scale, tol);
}

// ---------------------------------------------------------------------------
// Subspace algebra

Subspace intersect(const Subspace& u, const Subspace& v, const ToleranceConfig& tol) {
    require_same_dim(u.ambient_dim(), v.ambient_dim(), "intersect");
    const Index n = u.ambient_dim();
    if (u.is_zero() || v.is_zero()) return Subspace::zero(n);
    // Eigenvalues of U^dagger P_v U are cos^2 of the principal angles.
    const Matrix overlap = u.basis().adjoint() * v.basis();
    const EigenSystem es =
        eigh(HermitianOperator::hermitian_part(overlap * overlap.adjoint()), tol);
    std::vector<Index> keep;
    for (Index i = es.values.size() - 1; i >= 0; --i) {
        if (es.values(i) >= 1.0 - tol.rank_tol) keep.push_back(i);
    }
    if (keep.empty()) return Subspace::zero(n);
    Matrix basis(n, static_cast<Index>(keep.size()));
    for (Index c = 0; c < basis.cols(); ++c) basis.col(c) = u.basis() * es.vectors.col(keep[c]);
    return Subspace::from_orthonormal(basis, tol);
}

Subspace subspace_sum(const Subspace& u, const Subspace& v, const ToleranceConfig& tol) {
    require_same_dim(u.ambient_dim(), v.ambient_dim(), "subspace_sum");
    if (u.is_zero()) return v;
    if (v.is_zero()) return u;
    // Eigenvalues of P_u + P_v near zero are 1 - cos(theta) ~ sin^2(theta)/2,
    // matching the principal-angle cutoff used by intersect.
    const EigenSystem es =
        eigh(HermitianOperator::hermitian_part(u.projector() + v.projector()), tol);
    std::vector<Index> keep;
    for (Index i = es.values.size() - 1; i >= 0; --i) {
        if (es.values(i) > 0.5 * tol.rank_tol) keep.push_back(i);
    }
    return basis_from_eigen(es, keep, u.ambient_dim(), tol);
}

Subspace complement(const Subspace& v, const ToleranceConfig& tol) {
    const Index n = v.ambient_dim();
    if (v.is_zero()) return Subspace::full(n);
    if (v.dim() == n) return Subspace::zero(n);
    const EigenSystem es = eigh(
        HermitianOperator::hermitian_part(Matrix::Identity(n, n) - v.projector()), tol);
    std::vector<Index> keep;
    for (Index i = es.values.size() - 1; i >= 0; --i) {
        if (es.values(i) > 0.5) keep.push_back(i);
    }
    return basis_from_eigen(es, keep, n, tol);
}

Subspace apply_map(const Matrix& m, const Subspace& v, const ToleranceConfig& tol) {
    require_same_dim(m.cols(), v.ambient_dim(), "apply_map");
    if (v.is_zero()) return Subspace::zero(m.rows());
    const double cutoff = tol.rank_tol * spectral_norm(m);
    const Matrix image = m * v.basis();
    Eigen::JacobiSVD<Matrix> svd(image, Eigen::ComputeThinU);
    const RealVector& s = svd.singularValues();
    Index rank = 0;
    while (rank < s.size() && s(rank) > cutoff && s(rank) > 0.0) ++rank;
    if (rank == 0) return Subspace::zero(m.rows());
    return Subspace::from_orthonormal(svd.matrixU().leftCols(rank), tol);
}

double subspace_distance(const Subspace& u, const Subspace& v) {
    require_same_dim(u.ambient_dim(), v.ambient_dim(), "subspace_distance");
    if (u.dim() != v.dim()) return std::numeric_limits<double>::infinity();
    if (u.is_zero()) return 0.0;
    Eigen::SelfAdjointEigenSolver<Matrix> solver(u.projector() - v.projector(),
                                                 Eigen::EigenvaluesOnly);
    return solver.eigenvalues().cwiseAbs().maxCoeff();
}

bool contains(const Subspace& outer, const Subspace& inner, const ToleranceConfig& tol) {
    return intersect(inner, outer, tol).dim() == inner.dim();
}

// ---------------------------------------------------------------------------
// Predicates

double min_eigenvalue(const HermitianOperator& op) {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(op.matrix(), Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
        throw Error(ErrorCode::ConvergenceFailure, "Hermitian eigensolver did not converge");
    }
    return solver.eigenvalues()(0);
}

bool is_psd(const HermitianOperator& op, const ToleranceConfig& tol) {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(op.matrix(), Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
        throw Error(ErrorCode::ConvergenceFailure, "Hermitian eigensolver did not converge");
    }
    const RealVector& a = solver.eigenvalues();
    return a(0) >= -tol.psd_tol * a.cwiseAbs().maxCoeff();
}

bool is_disjoint(const HermitianOperator& x, const HermitianOperator& y,
                 const ToleranceConfig& tol) {
    require_same_dim(x.dim(), y.dim(), "is_disjoint");
    return intersect(range_of(x, tol), range_of(y, tol), tol).is_zero();
}

bool is_pvm(std::span<const HermitianOperator> ops, const ToleranceConfig& tol) {
    if (ops.empty()) return false;
    const Index n = ops.front().dim();
    Matrix total = Matrix::Zero(n, n);
    for (std::size_t k = 0; k < ops.size(); ++k) {
        require_same_dim(ops[k].dim(), n, "is_pvm");
        const Matrix& p = ops[k].matrix();
        if (p.norm() <= tol.agree_tol) return false;
        if ((p * p - p).norm() > tol.agree_tol * (1.0 + p.norm())) return false;
        for (std::size_t j = k + 1; j < ops.size(); ++j) {
            if ((p * ops[j].matrix()).norm() > tol.agree_tol * (1.0 + p.norm())) return false;
        }
        total += p;
    }
    return (total - Matrix::Identity(n, n)).norm() <= tol.agree_tol * std::sqrt(double(n));
}

bool loewner_leq(const HermitianOperator& x, const HermitianOperator& y,
                 const ToleranceConfig& tol) {
    require_same_dim(x.dim(), y.dim(), "loewner_leq");
    const double scale = std::max(spectral_norm(x.matrix()), spectral_norm(y.matrix()));
    return min_eigenvalue(y - x) >= -tol.psd_tol * scale;
}

// ---------------------------------------------------------------------------
// Tensor products

Matrix kron(const Matrix& x, const Matrix& y) {
    Matrix out(x.rows() * y.rows(), x.cols() * y.cols());
    for (Index i = 0; i < x.rows(); ++i) {
        for (Index j = 0; j < x.cols(); ++j) {
            out.block(i * y.rows(), j * y.cols(), y.rows(), y.cols()) = x(i, j) * y;
        }
    }
    return out;
}

HermitianOperator tensor(const HermitianOperator& x, const HermitianOperator& y) {
    return HermitianOperator::hermitian_part(kron(x.matrix(), y.matrix()));
}

Subspace tensor_subspace(const Subspace& u, const Subspace& v) {
    const Index n = u.ambient_dim() * v.ambient_dim();
    if (u.is_zero() || v.is_zero()) return Subspace::zero(n);
    return Subspace::from_orthonormal(kron(u.basis(), v.basis()));
}

double relative_difference(const Matrix& a, const Matrix& b) {
    const double scale = std::max(a.norm(), b.norm());
    if (scale == 0.0) return 0.0;
    return (a - b).norm() / scale;
}

}  // namespace localize
