#include <algorithm>
#include <array>
#include <cmath>

#include "trial.hpp"

namespace localize::verify {

namespace detail {

void Trial::check(const std::string& property, bool ok, double residual) {
    if (ok) {
        report_.record_pass(property, std::isfinite(residual) ? residual : 0.0);
        return;
    }
    Counterexample ce;
    ce.spec = spec;
    ce.residual = residual;
    io::Json& p = ce.payload;
    p["suite"] = suite_;
    p["property"] = property;
    p["trial_index"] = index;
    p["trial_seed"] = seed;
    p["spec"] = to_json(spec);
    p["residual"] = residual;
    io::Json inputs = io::Json::object();
    for (const auto& [name, item] : inputs_) {
        if (const auto* m = std::get_if<Matrix>(&item)) {
            inputs[name] = io::matrix_to_json(*m);
        } else if (const auto* s = std::get_if<Subspace>(&item)) {
            inputs[name] = io::subspace_to_json(*s);
        } else if (const auto* v = std::get_if<Vector>(&item)) {
            inputs[name] = io::vector_to_json(*v);
        } else {
            inputs[name] = std::get<double>(item);
        }
    }
    p["inputs"] = std::move(inputs);
    report_.record_failure(property, std::move(ce));
}

void Trial::check_order(const std::string& property, const HermitianOperator& x,
                        const HermitianOperator& y) {
    check(property, loewner_leq(x, y, tol), std::max(0.0, -loewner_margin(x, y)));
}

Subspace span_columns(const Matrix& cols) {
    if (cols.cols() == 0) return Subspace::zero(cols.rows());
    const Eigen::HouseholderQR<Matrix> qr(cols);
    return Subspace::from_orthonormal(qr.householderQ() * Matrix::Identity(cols.rows(), cols.cols()));
}

std::vector<Subspace> random_split(Rng& rng, const Subspace& v, Index n) {
    const Index k = v.dim();
    const Matrix rotated = v.basis() * rng.unitary(k);
    // n - 1 distinct cut points in 1..k-1.
    std::vector<Index> cuts;
    for (Index i = 1; i < k; ++i) cuts.push_back(i);
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const Index j = rng.index(Index(i), Index(cuts.size()) - 1);
        std::swap(cuts[i], cuts[std::size_t(j)]);
    }
    cuts.resize(std::size_t(n - 1));
    std::sort(cuts.begin(), cuts.end());
    cuts.push_back(k);
    std::vector<Subspace> parts;
    Index start = 0;
    for (Index end : cuts) {
        parts.push_back(Subspace::from_orthonormal(rotated.middleCols(start, end - start)));
        start = end;
    }
    return parts;
}

Matrix unitary_flow(const HermitianOperator& k, double t) {
    const Eigen::SelfAdjointEigenSolver<Matrix> es(k.matrix());
    const Eigen::VectorXcd phases =
        (Complex(0.0, t) * es.eigenvalues().cast<Complex>()).array().exp().matrix();
    return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

double spectral_norm(const HermitianOperator& a) {
    const Eigen::SelfAdjointEigenSolver<Matrix> es(a.matrix(), Eigen::EigenvaluesOnly);
    return es.eigenvalues().cwiseAbs().maxCoeff();
}

double loewner_margin(const HermitianOperator& x, const HermitianOperator& y) {
    const double scale = std::max(spectral_norm(x), spectral_norm(y));
    if (scale == 0.0) return 0.0;
    return min_eigenvalue(y - x) / scale;
}

}  // namespace detail

namespace {

struct SuiteEntry {
    const char* name;
    detail::TrialFn fn;
};

constexpr std::array<SuiteEntry, 14> kSuites{{
    {"route-agreement", detail::route_agreement},
    {"maximality", detail::maximality},
    {"trace-inequalities", detail::trace_inequalities},
    {"operator-inequalities", detail::operator_inequalities},
    {"covariance", detail::covariance},
    {"generators", detail::generators},
    {"quantum-inequalities", detail::quantum_inequalities},
    {"equality", detail::equality},
    {"reconstruction", detail::reconstruction},
    {"masking", detail::masking},
    {"rank2", detail::rank2},
    {"smoothness", detail::smoothness},
    {"support-mixture", detail::support_mixture},
    {"qubit-closed-form", detail::qubit_closed_form_grid},
}};

detail::TrialFn lookup(const std::string& name) {
    for (const SuiteEntry& s : kSuites) {
        if (name == s.name) return s.fn;
    }
    throw Error(ErrorCode::UnknownSuite, "unknown suite '" + name + "'");
}

void run_one(SuiteReport& report, const std::string& name, detail::TrialFn fn, Index index,
             std::uint64_t trial_seed, const ToleranceConfig& tol) {
    detail::Trial t(report, name, index, trial_seed, tol);
    try {
        fn(t);
    } catch (const Error& e) {
        t.note("completes", e.what());
        t.check("completes", false, 0.0);
    }
}

}  // namespace

std::vector<std::string> suite_names() {
    std::vector<std::string> names;
    for (const SuiteEntry& s : kSuites) names.emplace_back(s.name);
    return names;
}

SuiteReport run_suite(const std::string& name, Index trials, std::uint64_t seed,
                      const ToleranceConfig& tol) {
    const detail::TrialFn fn = lookup(name);
    tol.validate();
    if (trials < 0) throw Error(ErrorCode::DomainError, "trial count must be non-negative");
    SuiteReport report(name);
    for (Index i = 0; i < trials; ++i) run_one(report, name, fn, i, derive_seed(seed, std::uint64_t(i)), tol);
    return report;
}

SuiteReport replay_trial(const std::string& name, Index trial_index, std::uint64_t trial_seed,
                         const ToleranceConfig& tol) {
    const detail::TrialFn fn = lookup(name);
    tol.validate();
    SuiteReport report(name);
    run_one(report, name, fn, trial_index, trial_seed, tol);
    return report;
}

}  // namespace localize::verify
