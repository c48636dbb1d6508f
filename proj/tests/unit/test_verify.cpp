#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "helpers.hpp"
#include "localize/decomp.hpp"
#include "localize/error.hpp"
#include "localize/verify.hpp"

using namespace localize;
using namespace localize::verify;
using test::e;
using test::span;

TEST_CASE("generators are deterministic") {
    const InstanceSpec spec{2, 2, 1, 1234, Positivity::PositiveDefinite};
    CHECK(random_psd(spec).matrix() == random_psd(spec).matrix());
    CHECK(random_subspace(spec).basis() == random_subspace(spec).basis());
    CHECK(random_density(spec).matrix() == random_density(spec).matrix());
}

TEST_CASE("generator rank and trace") {
    const InstanceSpec spec{3, 1, 1, 9, Positivity::PSD};
    CHECK(range_of(random_psd(spec)).dim() == 1);
    CHECK(std::abs(random_density(InstanceSpec{4, 3, 2, 5, Positivity::PSD}).op().trace() - 1.0) < 1e-14);
}

TEST_CASE("spec validation and json") {
    CHECK_THROWS_AS((InstanceSpec{2, 3, 1, 0, Positivity::PSD}.validate()), Error);
    CHECK_THROWS_AS((InstanceSpec{2, 1, 1, 0, Positivity::PositiveDefinite}.validate()), Error);
    const InstanceSpec spec{4, 2, 3, 77, Positivity::PSD};
    const InstanceSpec back = instance_spec_from_json(to_json(spec));
    CHECK(back.dim == 4);
    CHECK(back.rank == 2);
    CHECK(back.subspace_dim == 3);
    CHECK(back.seed == 77);
    CHECK(back.positivity == Positivity::PSD);
}

TEST_CASE("derived seeds differ per index") {
    CHECK(derive_seed(42, 0) != derive_seed(42, 1));
    CHECK(derive_seed(42, 0) == derive_seed(42, 0));
}

TEST_CASE("sdp oracle") {
    const OracleResult inv = sdp_oracle_tb(HermitianOperator::diagonal({3, 5}), span({e(2, 0)}));
    CHECK(inv.converged);
    CHECK(inv.value == doctest::Approx(3.0).epsilon(1e-6));
    const OracleResult a = sdp_oracle_tb(test::herm({{2, 1}, {1, 1}}), span({e(2, 0)}));
    CHECK(std::abs(a.value - 1.0) < 1e-4);
    CHECK(a.value <= 1.0 + 1e-9);
    CHECK(sdp_oracle_tb(HermitianOperator::identity(2), Subspace::zero(2)).value == 0.0);
    CHECK_THROWS_AS(sdp_oracle_tb(HermitianOperator::identity(5), span({e(5, 0)})), Error);
}

TEST_CASE("maximality falsifier") {
    SUBCASE("invariant subspace") {
        const HermitianOperator a = HermitianOperator::diagonal({3, 5});
        const Subspace v = span({e(2, 0)});
        const SuiteReport r = maximality_falsifier(a, v, decompose(a, v), 50, 1);
        CHECK(r.ok());
        CHECK(r.passes() == 50);
    }
    SUBCASE("[[2,1],[1,1]]") {
        const HermitianOperator a = test::herm({{2, 1}, {1, 1}});
        const Subspace v = span({e(2, 0)});
        CHECK(maximality_falsifier(a, v, decompose(a, v), 50, 2).ok());
    }
    SUBCASE("no directions") {
        const HermitianOperator a = test::herm({{1, 1}, {1, 1}});
        const Subspace v = span({e(2, 0)});
        const SuiteReport r = maximality_falsifier(a, v, decompose(a, v), 50, 3);
        CHECK(r.ok());
        REQUIRE(r.find("maximality-falsifier"));
        CHECK(r.find("maximality-falsifier")->note == "no directions");
    }
    SUBCASE("a too-small B is caught") {
        const HermitianOperator a = test::herm({{2, 1}, {1, 1}});
        const Subspace v = span({e(2, 0)});
        Decomposition shrunk = decompose(a, v);
        shrunk.B = 0.5 * shrunk.B;
        CHECK_FALSE(maximality_falsifier(a, v, shrunk, 20, 4).ok());
    }
}

TEST_CASE("suites run and are deterministic") {
    const SuiteReport a = run_suite("route-agreement", 200, 42);
    CHECK(a.ok());
    const PropertyResult* p = a.find("schur-vs-projection");
    REQUIRE(p);
    CHECK(p->passed == 200);
    CHECK(run_suite("trace-inequalities", 200, 42).ok());
    CHECK(a.to_json() == run_suite("route-agreement", 200, 42).to_json());
}

TEST_CASE("every registered suite passes a short run") {
    for (const std::string& name : suite_names()) {
        CAPTURE(name);
        CHECK(run_suite(name, 20, 7).ok());
    }
}

TEST_CASE("unknown suite") {
    try {
        run_suite("bogus", 1, 0);
        FAIL("expected UnknownSuite");
    } catch (const Error& err) {
        CHECK(err.code() == ErrorCode::UnknownSuite);
    }
}

TEST_CASE("replay reproduces a single trial") {
    const SuiteReport one = replay_trial("covariance", 3, derive_seed(11, 3));
    CHECK(one.ok());
    CHECK(one.passes() > 0);
}

TEST_CASE("report merge keeps lowest-seed counterexamples") {
    SuiteReport a("s");
    SuiteReport b("s");
    for (std::uint64_t s = 10; s > 0; --s) {
        Counterexample ce;
        ce.spec.seed = s;
        ce.residual = double(s);
        (s % 2 ? a : b).record_failure("p", ce);
    }
    a.record_pass("p", 0.5);
    a.merge(b);
    const PropertyResult* p = a.find("p");
    REQUIRE(p);
    CHECK(p->failed == 10);
    CHECK(p->passed == 1);
    CHECK(p->worst_residual == 10.0);
    REQUIRE(p->counterexamples.size() == SuiteReport::kMaxCounterexamples);
    CHECK(p->counterexamples.front().spec.seed == 1);
    CHECK(p->counterexamples.back().spec.seed == 5);
}
