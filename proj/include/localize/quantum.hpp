#pragma once

#include <optional>
#include <span>
#include <vector>

#include "localize/decomp.hpp"

namespace localize {

/// Hermitian operator certified PSD (within psd_tol) with unit trace (within agree_tol).
class DensityMatrix {
public:
    static DensityMatrix from_operator(const HermitianOperator& op, const ToleranceConfig& tol = {});
    static DensityMatrix from_matrix(const Matrix& m, const ToleranceConfig& tol = {});
    static DensityMatrix pure(const Vector& psi);
    static DensityMatrix maximally_mixed(Index dim);

    const HermitianOperator& op() const { return op_; }
    const Matrix& matrix() const { return op_.matrix(); }
    Index dim() const { return op_.dim(); }

private:
    explicit DensityMatrix(HermitianOperator op) : op_(std::move(op)) {}
    HermitianOperator op_;
};

/// rho = lam * rho_B + (1 - lam) * rho_C; the normalized parts are absent
/// when their weight is at or below rank_tol.
struct StateDecomposition {
    double lam = 0.0;
    std::optional<DensityMatrix> rho_B;
    std::optional<DensityMatrix> rho_C;
    HermitianOperator B;  ///< lam * rho_B
    HermitianOperator C;  ///< (1 - lam) * rho_C
};

/// Joint probabilities of the (V, V-perp) x (B, C) partition.
struct ProbabilityTable {
    double lam = 0.0;       ///< Prob(B|A)
    double lam_perp = 0.0;  ///< Prob(B-perp|A)
    double p = 0.0;         ///< Prob(V|A) = Tr(P rho)
    double v_b = 0.0;       ///< Prob(V, B|A) = lam
    double vperp_b = 0.0;   ///< Prob(V-perp, B|A) = 0
    double v_c = 0.0;       ///< Prob(V, C|A) = p - lam
    double vperp_c = 0.0;   ///< Prob(V-perp, C|A) = 1 - p
    double deficiency = 0.0;
};

struct MultiProbabilityTable {
    std::vector<double> lam;    ///< Prob(C_k|A)
    std::vector<double> p;      ///< Prob(W_k|A) = Tr(P_k rho)
    Eigen::MatrixXd joint;      ///< joint(j, k) = Prob(W_j, C_k|A)
    Eigen::MatrixXd joint_perp; ///< joint_perp(j, k) = Prob(W_j-perp, C_k|A)
    std::vector<Subspace> supports;
};

struct BlochVector {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    double norm2() const { return x * x + y * y + z * z; }
};

/// Qubit analytic values for rho = (I + a(sin t, 0, cos t).sigma)/2 along span(|0>).
struct QubitClosedForm {
    double lam = 0.0;
    double lam_perp = 0.0;
    double deficiency = 0.0;
    double p = 0.0;
    std::optional<BlochVector> bloch_D;  ///< absent for a = 0
};

struct MixtureEntry {
    double weight = 0.0;
    Vector state;
};

struct Mixture {
    double floor_weight = 0.0;  ///< lambda_min / n
    std::vector<MixtureEntry> entries;
};

struct Probe {
    Vector psi;
    double lam = 0.0;
};

BlochVector bloch_vector(const HermitianOperator& qubit_op);
HermitianOperator bloch_operator(const BlochVector& r);
DensityMatrix qubit_state(double a, double theta);

StateDecomposition state_decompose(const DensityMatrix& rho, const Subspace& v,
                                   const ToleranceConfig& tol = {});
ProbabilityTable probability_table(const DensityMatrix& rho, const Subspace& v,
                                   const ToleranceConfig& tol = {});
MultiProbabilityTable multi_probability_table(const DensityMatrix& rho,
                                              std::span<const Subspace> chain,
                                              const ToleranceConfig& tol = {});

/// Throws DomainError for a outside [0, 1) or theta outside (0, pi).
QubitClosedForm qubit_closed_form(double a, double theta);

/// rho_D = D / Tr(D) with D the deficiency operator; absent when Tr(D) <= rank_tol.
std::optional<HermitianOperator> deficiency_state(const DensityMatrix& rho, const Subspace& v,
                                                  const ToleranceConfig& tol = {});

Subspace support(std::span<const Vector> psis, std::span<const double> weights,
                 const ToleranceConfig& tol = {});

/// Explicit mixture of rho in which every psi_k carries weight >= lambda_min / n.
/// Throws Infeasible naming the first psi_k outside ran(rho).
Mixture mixture_including(const DensityMatrix& rho, std::span<const Vector> psis,
                          const ToleranceConfig& tol = {});

/// The d^2 probes e_i, (e_i + e_j)/sqrt2, (e_i + i e_j)/sqrt2.
std::vector<Vector> tomographic_probes(Index dim);
/// Recovers A from one-dimensional localization weights lam_i = TB(A|span psi_i).
HermitianOperator reconstruct(std::span<const Probe> probes, const ToleranceConfig& tol = {});

/// Von Neumann entropy, natural log.
double entropy(const DensityMatrix& rho, const ToleranceConfig& tol = {});
/// log(TB(rho|V)); -infinity when the weight vanishes.
double log_lambda(const DensityMatrix& rho, const Subspace& v, const ToleranceConfig& tol = {});

/// lam * rho + (1 - lam) * sigma after checking ran(rho) in V and ran(sigma) meeting V at zero.
DensityMatrix mask(const DensityMatrix& rho, const DensityMatrix& sigma, double lam,
                   const Subspace& v, const ToleranceConfig& tol = {});
StateDecomposition unmask(const DensityMatrix& rho_prime, const Subspace& v,
                          const ToleranceConfig& tol = {});

/// Orthogonal projector Q onto rho^{-1/2}(ran(rho) intersected with V); Tr(Q rho) = lam.
/// Q depends on the state itself.
Matrix measurement_projector(const DensityMatrix& rho, const Subspace& v,
                             const ToleranceConfig& tol = {});

}  // namespace localize
