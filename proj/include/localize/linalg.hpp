#pragma once

#include <complex>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "localize/error.hpp"
#include "localize/tolerance.hpp"

namespace localize {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Dense complex square matrix certified Hermitian on construction.
///
/// The stored matrix is always the exact Hermitian part (M + M^dagger)/2 of
/// the input, which is bit-identical to the input when the input is already
/// exactly Hermitian.
class HermitianOperator {
public:
    HermitianOperator() = default;

    /// Validates shape, finiteness and symmetry against tol.hermitian_tol.
    static HermitianOperator from_matrix(const Matrix& m, const ToleranceConfig& tol = {});
    /// Unchecked: symmetrizes a matrix that is Hermitian by construction.
    static HermitianOperator hermitian_part(const Matrix& m);

    static HermitianOperator zero(Index dim);
    static HermitianOperator identity(Index dim);
    static HermitianOperator diagonal(const RealVector& values);
    static HermitianOperator diagonal(std::initializer_list<double> values);
    static HermitianOperator outer(const Vector& v);

    Index dim() const { return m_.rows(); }
    const Matrix& matrix() const { return m_; }
    double trace() const { return m_.trace().real(); }
    double norm() const { return m_.norm(); }

    friend HermitianOperator operator+(const HermitianOperator& a, const HermitianOperator& b);
    friend HermitianOperator operator-(const HermitianOperator& a, const HermitianOperator& b);
    friend HermitianOperator operator*(double s, const HermitianOperator& a);
    HermitianOperator& operator+=(const HermitianOperator& other);

    /// U * this * U^dagger.
    HermitianOperator conjugated_by(const Matrix& u) const;

private:
    explicit HermitianOperator(Matrix m) : m_(std::move(m)) {}
    Matrix m_;
};

/// Ascending eigenvalues with orthonormal eigenvector columns.
struct EigenSystem {
    RealVector values;
    Matrix vectors;

    double max_abs() const;
};

/// Linear subspace of C^n held as an orthonormal column basis (n x k, k may be 0).
class Subspace {
public:
    Subspace() = default;

    static Subspace zero(Index ambient_dim);
    static Subspace full(Index ambient_dim);
    /// Validates orthonormality of the columns within tol.agree_tol.
    static Subspace from_orthonormal(const Matrix& basis, const ToleranceConfig& tol = {});
    /// Orthonormal basis of the column span; singular values at or below
    /// rank_tol * (largest singular value) are dropped.
    static Subspace span(const Matrix& columns, const ToleranceConfig& tol = {});
    static Subspace span(std::span<const Vector> vectors, const ToleranceConfig& tol = {});

    Index ambient_dim() const { return basis_.rows(); }
    Index dim() const { return basis_.cols(); }
    bool is_zero() const { return basis_.cols() == 0; }
    const Matrix& basis() const { return basis_; }

    Matrix projector() const;
    /// Norm of the component of v orthogonal to this subspace.
    double distance_to(const Vector& v) const;

private:
    explicit Subspace(Matrix basis) : basis_(std::move(basis)) {}
    Matrix basis_;
};

/// Deterministic Hermitian eigendecomposition. Eigenvectors are phase
/// normalized (first significant component real positive) and eigenvalues
/// that coincide within rank_tol are ordered by descending lexicographic
/// comparison of their normalized eigenvectors.
EigenSystem eigh(const HermitianOperator& op, const ToleranceConfig& tol = {});

/// X^exponent on ran(X), zero on ker(X). Exponent 0 gives the orthogonal
/// projector onto ran(X). Non-integer exponents require X >= 0.
HermitianOperator pseudo_power(const HermitianOperator& op, double exponent,
                               const ToleranceConfig& tol = {});

Subspace range_of(const HermitianOperator& op, const ToleranceConfig& tol = {});
/// Same as range_of but the cutoff is rank_tol * reference_scale instead of
/// rank_tol * max|a|. Used where noise is set by a larger parent operator.
Subspace range_of(const HermitianOperator& op, double reference_scale,
                  const ToleranceConfig& tol = {});

Subspace intersect(const Subspace& u, const Subspace& v, const ToleranceConfig& tol = {});
Subspace subspace_sum(const Subspace& u, const Subspace& v, const ToleranceConfig& tol = {});
Subspace complement(const Subspace& v, const ToleranceConfig& tol = {});
/// Image m(V); image directions with singular value <= rank_tol * ||m|| are dropped.
Subspace apply_map(const Matrix& m, const Subspace& v, const ToleranceConfig& tol = {});

/// Spectral-norm distance between the orthogonal projectors of u and v.
/// Infinity when the dimensions differ.
double subspace_distance(const Subspace& u, const Subspace& v);
bool contains(const Subspace& outer, const Subspace& inner, const ToleranceConfig& tol = {});

bool is_psd(const HermitianOperator& op, const ToleranceConfig& tol = {});
bool is_disjoint(const HermitianOperator& x, const HermitianOperator& y,
                 const ToleranceConfig& tol = {});
bool is_pvm(std::span<const HermitianOperator> ops, const ToleranceConfig& tol = {});
/// x <= y in the Loewner order, with slack psd_tol relative to the larger operand.
bool loewner_leq(const HermitianOperator& x, const HermitianOperator& y,
                 const ToleranceConfig& tol = {});

/// Kronecker product, index (i1, i2) -> i1 * dim2 + i2.
HermitianOperator tensor(const HermitianOperator& x, const HermitianOperator& y);
Subspace tensor_subspace(const Subspace& u, const Subspace& v);
Matrix kron(const Matrix& x, const Matrix& y);

double min_eigenvalue(const HermitianOperator& op);
/// ||a - b||_F / max(||a||_F, ||b||_F); zero when both vanish.
double relative_difference(const Matrix& a, const Matrix& b);

void require_same_dim(Index a, Index b, const char* what);

}  // namespace localize
