#pragma once

#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "localize/verify.hpp"

namespace localize::verify::detail {

using Item = std::variant<Matrix, Subspace, Vector, double>;

/// One randomized trial: owns its RNG, remembers the inputs it generated and
/// turns failed checks into replayable counterexamples.
class Trial {
public:
    Trial(SuiteReport& report, std::string suite, Index index, std::uint64_t seed,
          const ToleranceConfig& tol)
        : rng(seed), tol(tol), index(index), seed(seed), report_(report), suite_(std::move(suite)) {
        spec.seed = seed;
    }

    Rng rng;
    const ToleranceConfig& tol;
    const Index index;
    const std::uint64_t seed;
    InstanceSpec spec;

    void attach(std::string name, Item item) { inputs_.emplace_back(std::move(name), std::move(item)); }
    void clear_inputs() { inputs_.clear(); }

    void check(const std::string& property, bool ok, double residual);
    /// Passes when value <= bound; the residual is the value itself.
    void check_le(const std::string& property, double value, double bound) {
        check(property, value <= bound, value);
    }
    /// Passes when x <= y in the Loewner order; the residual is the relative violation.
    void check_order(const std::string& property, const HermitianOperator& x, const HermitianOperator& y);
    void note(const std::string& property, const std::string& text) { report_.set_note(property, text); }
    void merge(const SuiteReport& other) { report_.merge(other); }

private:
    SuiteReport& report_;
    std::string suite_;
    std::vector<std::pair<std::string, Item>> inputs_;
};

using TrialFn = void (*)(Trial&);

// Shared helpers.
Subspace span_columns(const Matrix& cols);
/// Rotates v's basis by a random unitary and cuts it into n nonempty orthogonal pieces.
std::vector<Subspace> random_split(Rng& rng, const Subspace& v, Index n);
/// exp(i t K) for Hermitian K.
Matrix unitary_flow(const HermitianOperator& k, double t);
double spectral_norm(const HermitianOperator& a);
/// Smallest eigenvalue of y - x relative to the larger spectral norm (>= 0 means x <= y).
double loewner_margin(const HermitianOperator& x, const HermitianOperator& y);

// Suites.
void route_agreement(Trial& t);
void maximality(Trial& t);
void trace_inequalities(Trial& t);
void operator_inequalities(Trial& t);
void covariance(Trial& t);
void generators(Trial& t);

void quantum_inequalities(Trial& t);
void equality(Trial& t);
void reconstruction(Trial& t);
void masking(Trial& t);
void rank2(Trial& t);
void smoothness(Trial& t);
void support_mixture(Trial& t);
void qubit_closed_form_grid(Trial& t);

}  // namespace localize::verify::detail
