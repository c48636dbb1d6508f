#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numbers>

#include "helpers.hpp"
#include "localize/decomp.hpp"
#include "localize/error.hpp"
#include "localize/quantum.hpp"

using namespace localize;
using test::diff;
using test::e;
using test::herm;
using test::span;

namespace {

const HermitianOperator kA = herm({{2, 1}, {1, 1}});

ErrorCode code_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& err) {
        return err.code();
    }
    FAIL("expected an Error");
    return ErrorCode::DomainError;
}

}  // namespace

TEST_CASE("decompose along an invariant subspace") {
    const Decomposition d = decompose(HermitianOperator::diagonal({3, 5}), span({e(2, 0)}));
    CHECK(diff(d.B.matrix(), HermitianOperator::diagonal({3, 0}).matrix()) < 1e-14);
    CHECK(diff(d.C.matrix(), HermitianOperator::diagonal({0, 5}).matrix()) < 1e-14);
}

TEST_CASE("decompose [[2,1],[1,1]] along e1") {
    const Decomposition d = decompose(kA, span({e(2, 0)}));
    CHECK(diff(d.B.matrix(), HermitianOperator::diagonal({1, 0}).matrix()) < 1e-14);
    CHECK(diff(d.C.matrix(), test::mat({{1, 1}, {1, 1}})) < 1e-14);
    CHECK(d.tb == doctest::Approx(1.0));
    CHECK(d.ran_B.dim() == 1);
    CHECK(d.ran_C.dim() == 1);
}

TEST_CASE("decompose with V missing the range") {
    const HermitianOperator a = herm({{1, 1}, {1, 1}});
    const Decomposition d = decompose(a, span({e(2, 0)}));
    CHECK(d.B.matrix().norm() < 1e-14);
    CHECK(diff(d.C.matrix(), a.matrix()) < 1e-14);
}

TEST_CASE("decompose edge cases") {
    const Decomposition zero_v = decompose(kA, Subspace::zero(2));
    CHECK(zero_v.B.matrix().norm() == 0.0);
    CHECK(diff(zero_v.C.matrix(), kA.matrix()) < 1e-15);
    const Decomposition full = decompose(kA, Subspace::full(2));
    CHECK(diff(full.B.matrix(), kA.matrix()) < 1e-14);
    CHECK(full.C.matrix().norm() < 1e-14);
}

TEST_CASE("decompose errors") {
    CHECK(code_of([] { decompose(HermitianOperator::diagonal({1, -1}), span({e(2, 0)})); }) == ErrorCode::NotPSD);
    CHECK(code_of([] { decompose(kA, span({e(3, 0)})); }) == ErrorCode::DimensionMismatch);
}

TEST_CASE("projection route") {
    CHECK(diff(decompose_via_projection(HermitianOperator::identity(2), span({e(2, 0)})).B.matrix(),
               HermitianOperator::diagonal({1, 0}).matrix()) < 1e-14);
    CHECK(diff(decompose_via_projection(kA, span({e(2, 0)})).B.matrix(),
               HermitianOperator::diagonal({1, 0}).matrix()) < 1e-14);
    CHECK(decompose_via_projection(HermitianOperator::diagonal({1, 0}), span({e(2, 1)})).B.matrix().norm() < 1e-14);
}

TEST_CASE("inverse route") {
    CHECK(diff(decompose_via_inverse(kA, span({e(2, 0)})).B.matrix(),
               HermitianOperator::diagonal({1, 0}).matrix()) < 1e-14);
    CHECK(diff(decompose_via_inverse(HermitianOperator::diagonal({2, 3}), span({e(2, 1)})).B.matrix(),
               HermitianOperator::diagonal({0, 3}).matrix()) < 1e-14);
    CHECK(diff(decompose_via_inverse(HermitianOperator::identity(3), span({e(3, 0), e(3, 1)})).B.matrix(),
               HermitianOperator::diagonal({1, 1, 0}).matrix()) < 1e-14);
}

TEST_CASE("trace functionals") {
    const HermitianOperator half = 0.5 * HermitianOperator::identity(2);
    CHECK(tb(half, span({e(2, 0)})) == doctest::Approx(0.5));
    CHECK(tp(half, span({e(2, 0)})) == doctest::Approx(0.5));
    CHECK(tb(kA, span({e(2, 0)})) == doctest::Approx(1.0));
    CHECK(tp(kA, span({e(2, 0)})) == doctest::Approx(2.0));
    CHECK(tc(kA, span({e(2, 0)})) == doctest::Approx(2.0));
    const HermitianOperator ones = herm({{1, 1}, {1, 1}});
    CHECK(tb(ones, span({e(2, 0)})) == doctest::Approx(0.0));
    CHECK(tp(ones, span({e(2, 0)})) == doctest::Approx(1.0));
}

TEST_CASE("lambda_one_dim") {
    const HermitianOperator half = 0.5 * HermitianOperator::identity(2);
    CHECK(lambda_one_dim(half, test::vec({0.6, {0, 0.8}})) == doctest::Approx(0.5));
    CHECK(lambda_one_dim(kA, e(2, 0)) == doctest::Approx(1.0));
    CHECK(lambda_one_dim(HermitianOperator::diagonal({1, 0}), e(2, 1)) == doctest::Approx(0.0));
    CHECK(code_of([] { lambda_one_dim(kA, Vector::Zero(2)); }) == ErrorCode::ZeroVector);
}

TEST_CASE("ddagger product and oblique projector") {
    CHECK(std::abs(ddagger_product(HermitianOperator::diagonal({2, 2}), e(2, 0), e(2, 1))) < 1e-15);
    CHECK(code_of([] { ddagger_product(HermitianOperator::diagonal({1, 0}), e(2, 0), e(2, 1)); }) ==
          ErrorCode::NotPositiveDefinite);
    const Matrix pi = oblique_projector(kA, span({e(2, 0)}));
    CHECK(diff(pi * pi, pi) < 1e-14);
    CHECK(diff(pi * kA.matrix(), decompose(kA, span({e(2, 0)})).B.matrix()) < 1e-14);
}

TEST_CASE("chain decomposition") {
    SUBCASE("invariant chain") {
        const std::vector<Subspace> chain{span({e(2, 0)}), Subspace::zero(2)};
        const ChainDecomposition c = chain_decompose(HermitianOperator::diagonal({3, 5}), chain);
        REQUIRE(c.components.size() == 2);
        CHECK(diff(c.components[0].matrix(), HermitianOperator::diagonal({0, 5}).matrix()) < 1e-14);
        CHECK(diff(c.components[1].matrix(), HermitianOperator::diagonal({3, 0}).matrix()) < 1e-14);
    }
    SUBCASE("identity gives projector differences") {
        const std::vector<Subspace> chain{span({e(3, 0), e(3, 1)}), span({e(3, 0)}), Subspace::zero(3)};
        const ChainDecomposition c = chain_decompose(HermitianOperator::identity(3), chain);
        REQUIRE(c.components.size() == 3);
        CHECK(diff(c.components[0].matrix(), HermitianOperator::diagonal({0, 0, 1}).matrix()) < 1e-14);
        CHECK(diff(c.components[1].matrix(), HermitianOperator::diagonal({0, 1, 0}).matrix()) < 1e-14);
        CHECK(diff(c.components[2].matrix(), HermitianOperator::diagonal({1, 0, 0}).matrix()) < 1e-14);
    }
    SUBCASE("[[2,1],[1,1]]") {
        const std::vector<Subspace> chain{span({e(2, 0)}), Subspace::zero(2)};
        const ChainDecomposition c = chain_decompose(kA, chain);
        CHECK(diff(c.components[0].matrix(), test::mat({{1, 1}, {1, 1}})) < 1e-14);
        CHECK(diff(c.components[1].matrix(), HermitianOperator::diagonal({1, 0}).matrix()) < 1e-14);
    }
    SUBCASE("errors") {
        const std::vector<Subspace> bad{span({e(2, 0)}), span({e(2, 1)}), Subspace::zero(2)};
        CHECK(code_of([&] { chain_decompose(kA, bad); }) == ErrorCode::ChainNotNested);
        const std::vector<Subspace> ok{span({e(2, 0)}), Subspace::zero(2)};
        CHECK(code_of([&] { chain_decompose(HermitianOperator::diagonal({1, 0}), ok); }) ==
              ErrorCode::NotPositiveDefinite);
    }
}

TEST_CASE("trace bounds") {
    const HermitianOperator a = HermitianOperator::diagonal({1, 2, 3});
    const TraceBounds one = trace_bounds(a, span({e(3, 0)}));
    CHECK(one.lower == doctest::Approx(1.0));
    CHECK(one.upper == doctest::Approx(3.0));
    const TraceBounds id = trace_bounds(HermitianOperator::identity(4), span({e(4, 0), e(4, 2)}));
    CHECK(id.lower == doctest::Approx(2.0));
    CHECK(id.upper == doctest::Approx(2.0));
    const Subspace v = span({e(3, 0), e(3, 1)});
    const TraceBounds two = trace_bounds(a, v);
    CHECK(two.lower == doctest::Approx(3.0));
    CHECK(two.upper == doctest::Approx(5.0));
    const double t = tb(a, v);
    CHECK(t == doctest::Approx(3.0));
    CHECK(t >= two.lower - 1e-12);
    CHECK(t <= two.upper + 1e-12);
}

TEST_CASE("deficiency operator") {
    CHECK(deficiency_operator(HermitianOperator::diagonal({3, 5}), span({e(2, 0)})).matrix().norm() < 1e-14);

    const DensityMatrix rho = qubit_state(0.5, std::numbers::pi / 3.0);
    const HermitianOperator d = deficiency_operator(rho.op(), span({e(2, 0)}));
    CHECK(d.trace() == doctest::Approx(0.2).epsilon(1e-12));
    CHECK(min_eigenvalue(d) < 0.0);

    const HermitianOperator line = herm({{0.5, 0.5}, {0.5, 0.5}});
    CHECK(diff(deficiency_operator(line, span({e(2, 0)})).matrix(), line.matrix()) < 1e-14);
}
