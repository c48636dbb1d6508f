#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <variant>
#include <vector>

#include "localize/decomp.hpp"
#include "localize/io.hpp"
#include "localize/quantum.hpp"

namespace localize::verify {

enum class Positivity { PSD, PositiveDefinite };

/// Everything needed to regenerate an instance bit for bit.
struct InstanceSpec {
    Index dim = 2;
    Index rank = 2;
    Index subspace_dim = 1;
    std::uint64_t seed = 0;
    Positivity positivity = Positivity::PSD;

    /// Throws DomainError for rank > dim, subspace_dim > dim, dim < 1,
    /// or a positive-definite spec with rank != dim.
    void validate() const;
};

io::Json to_json(const InstanceSpec& spec);
InstanceSpec instance_spec_from_json(const io::Json& j);

/// splitmix64 of (root, index); per-trial seeds for reproducible suites.
std::uint64_t derive_seed(std::uint64_t root, std::uint64_t index);

class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    double uniform(double lo = 0.0, double hi = 1.0);
    double normal();
    /// Uniform integer in [lo, hi].
    Index index(Index lo, Index hi);
    /// Standard complex Gaussian, E|z|^2 = 1.
    Complex complex_normal();
    Matrix gaussian(Index rows, Index cols);
    Vector unit_vector(Index n);
    /// Haar-distributed unitary.
    Matrix unitary(Index n);

private:
    std::mt19937_64 engine_;
};

/// G G^dagger / Tr with G a dim x rank complex Gaussian.
HermitianOperator random_psd(Rng& rng, Index dim, Index rank);
/// Span of k complex Gaussian columns, orthonormalized.
Subspace random_subspace(Rng& rng, Index dim, Index k);
HermitianOperator random_hermitian(Rng& rng, Index dim);
DensityMatrix random_density(Rng& rng, Index dim, Index rank);

HermitianOperator random_psd(const InstanceSpec& spec);
Subspace random_subspace(const InstanceSpec& spec);
DensityMatrix random_density(const InstanceSpec& spec);

struct OracleResult {
    double value = 0.0;
    bool converged = false;
    Index iterations = 0;
};

/// Independent estimate of max Tr(X') over {X' = V X V^dagger : X' <= A} by a
/// log-barrier Newton ascent that only ever visits strictly feasible points.
/// Throws DomainError for dim > 4.
OracleResult sdp_oracle_tb(const HermitianOperator& a, const Subspace& v, Index iters = 2000,
                           const ToleranceConfig& tol = {});

struct Counterexample {
    InstanceSpec spec;
    double residual = 0.0;
    io::Json payload;  ///< spec plus the instance in matrix/subspace file format
};

struct PropertyResult {
    std::string name;
    std::size_t passed = 0;
    std::size_t failed = 0;
    double worst_residual = 0.0;
    std::vector<Counterexample> counterexamples;  ///< capped, lowest seeds first
    std::string note;
};

class SuiteReport {
public:
    explicit SuiteReport(std::string suite = {}) : suite_(std::move(suite)) {}

    const std::string& suite() const { return suite_; }
    const std::vector<PropertyResult>& properties() const { return properties_; }
    const PropertyResult* find(const std::string& property) const;

    void record_pass(const std::string& property, double residual);
    void record_failure(const std::string& property, Counterexample example);
    void set_note(const std::string& property, const std::string& note);
    /// Sums counts, keeps the worst residual and the lowest-seed counterexamples.
    void merge(const SuiteReport& other);

    std::size_t passes() const;
    std::size_t failures() const;
    bool ok() const { return failures() == 0; }

    io::Json to_json() const;

    static constexpr std::size_t kMaxCounterexamples = 5;

private:
    PropertyResult& slot(const std::string& property);

    std::string suite_;
    std::vector<PropertyResult> properties_;
};

/// For random unit v in ran(B), checks that dec.B + eps v v^dagger is not below A,
/// eps = 1e-6 ||A||_2. The required violation is eps * s^2 / 2 where s is the
/// length of the component of v on ker(C); the eigenvalue argument only
/// guarantees a dip of eps * s^2.
SuiteReport maximality_falsifier(const HermitianOperator& a, const Subspace& v,
                                 const Decomposition& dec, Index trials, std::uint64_t seed,
                                 const ToleranceConfig& tol = {});

std::vector<std::string> suite_names();
/// Throws UnknownSuite for a name not in suite_names().
SuiteReport run_suite(const std::string& name, Index trials, std::uint64_t seed,
                      const ToleranceConfig& tol = {});
/// Re-runs a single trial of a suite from the seed stored in a counterexample.
SuiteReport replay_trial(const std::string& name, Index trial_index, std::uint64_t trial_seed,
                         const ToleranceConfig& tol = {});

}  // namespace localize::verify
