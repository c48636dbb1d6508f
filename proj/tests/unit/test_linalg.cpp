#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "helpers.hpp"
#include "localize/error.hpp"

using namespace localize;
using test::diff;
using test::e;
using test::herm;
using test::span;

TEST_CASE("eigh sorts eigenvalues ascending") {
    const EigenSystem es = eigh(HermitianOperator::diagonal({3, 1, 2}));
    CHECK(es.values(0) == doctest::Approx(1.0));
    CHECK(es.values(1) == doctest::Approx(2.0));
    CHECK(es.values(2) == doctest::Approx(3.0));
}

TEST_CASE("eigh on degenerate identity gives an orthonormal pair") {
    const EigenSystem es = eigh(HermitianOperator::identity(2));
    CHECK(es.values(0) == doctest::Approx(1.0));
    CHECK(es.values(1) == doctest::Approx(1.0));
    CHECK(diff(es.vectors.adjoint() * es.vectors, Matrix::Identity(2, 2)) < 1e-14);
}

TEST_CASE("eigh of [[2,1],[1,1]] matches the characteristic polynomial") {
    const EigenSystem es = eigh(herm({{2, 1}, {1, 1}}));
    CHECK(es.values(0) == doctest::Approx((3.0 - std::sqrt(5.0)) / 2.0).epsilon(1e-14));
    CHECK(es.values(1) == doctest::Approx((3.0 + std::sqrt(5.0)) / 2.0).epsilon(1e-14));
}

TEST_CASE("eigh is deterministic across calls") {
    const HermitianOperator a = herm({{2, {0, 1}}, {{0, -1}, 2}});
    CHECK(eigh(a).vectors == eigh(a).vectors);
}

TEST_CASE("pseudo_power") {
    SUBCASE("inverse root on the range only") {
        const HermitianOperator r = pseudo_power(HermitianOperator::diagonal({4, 0}), -0.5);
        CHECK(diff(r.matrix(), HermitianOperator::diagonal({0.5, 0}).matrix()) < 1e-14);
    }
    SUBCASE("exponent zero is the range projector") {
        const HermitianOperator r = pseudo_power(HermitianOperator::diagonal({2, 3}), 0.0);
        CHECK(diff(r.matrix(), Matrix::Identity(2, 2)) < 1e-14);
    }
    SUBCASE("rank one pseudo-inverse") {
        const HermitianOperator r = pseudo_power(herm({{1, 1}, {1, 1}}), -1.0);
        CHECK(diff(r.matrix(), test::mat({{0.25, 0.25}, {0.25, 0.25}})) < 1e-14);
    }
    SUBCASE("negative eigenvalue with fractional exponent") {
        CHECK_THROWS_AS(pseudo_power(HermitianOperator::diagonal({1, -1}), 0.5), Error);
        try {
            pseudo_power(HermitianOperator::diagonal({1, -1}), 0.5);
        } catch (const Error& err) {
            CHECK(err.code() == ErrorCode::NegativeEigenvalue);
        }
    }
}

TEST_CASE("range_of") {
    CHECK(range_of(HermitianOperator::zero(3)).is_zero());
    const Subspace r = range_of(HermitianOperator::diagonal({1, 0, 2}));
    CHECK(r.dim() == 2);
    CHECK(subspace_distance(r, span({e(3, 0), e(3, 2)})) < 1e-12);
    const Subspace line = range_of(herm({{1, 1}, {1, 1}}));
    CHECK(line.dim() == 1);
    CHECK(subspace_distance(line, span({test::vec({1, 1})})) < 1e-12);
}

TEST_CASE("range_of uses a relative cutoff") {
    const Subspace r = range_of(HermitianOperator::diagonal({1e-20, 0.0}));
    CHECK(r.dim() == 1);
}

TEST_CASE("intersect") {
    const Subspace a = intersect(span({e(3, 0), e(3, 1)}), span({e(3, 1), e(3, 2)}));
    CHECK(a.dim() == 1);
    CHECK(subspace_distance(a, span({e(3, 1)})) < 1e-12);

    CHECK(intersect(span({e(2, 0)}), span({test::vec({1, 1})})).is_zero());

    const Vector d = test::vec({0, 1, 1});
    const Subspace b = intersect(span({e(3, 0), d}), span({e(3, 1), e(3, 2)}));
    CHECK(b.dim() == 1);
    CHECK(subspace_distance(b, span({d})) < 1e-12);

    CHECK_THROWS_AS(intersect(span({e(2, 0)}), span({e(3, 0)})), Error);
}

TEST_CASE("sum, complement and image") {
    CHECK(subspace_distance(subspace_sum(span({e(2, 0)}), span({e(2, 1)})), Subspace::full(2)) < 1e-12);
    CHECK(subspace_distance(complement(span({e(3, 0)})), span({e(3, 1), e(3, 2)})) < 1e-12);
    const Subspace img = apply_map(HermitianOperator::diagonal({1, 0}).matrix(), span({test::vec({1, 1})}));
    CHECK(subspace_distance(img, span({e(2, 0)})) < 1e-12);
    CHECK_THROWS_AS(subspace_sum(span({e(2, 0)}), span({e(3, 0)})), Error);
}

TEST_CASE("predicates") {
    CHECK(is_psd(HermitianOperator::diagonal({1, 0})));
    CHECK_FALSE(is_psd(HermitianOperator::diagonal({1, -1})));
    CHECK(is_disjoint(HermitianOperator::diagonal({1, 0}), HermitianOperator::diagonal({0, 1})));
    CHECK_FALSE(is_disjoint(HermitianOperator::diagonal({1, 0}), HermitianOperator::diagonal({1, 1})));
    const std::vector<HermitianOperator> pvm{HermitianOperator::diagonal({1, 0}), HermitianOperator::diagonal({0, 1})};
    CHECK(is_pvm(pvm));
    const std::vector<HermitianOperator> not_pvm{HermitianOperator::diagonal({1, 0}), HermitianOperator::diagonal({1, 1})};
    CHECK_FALSE(is_pvm(not_pvm));
}

TEST_CASE("tensor products") {
    CHECK(diff(tensor(HermitianOperator::identity(2), HermitianOperator::identity(2)).matrix(),
               Matrix::Identity(4, 4)) < 1e-15);
    CHECK(diff(tensor(HermitianOperator::diagonal({1, 2}), HermitianOperator::diagonal({3, 4})).matrix(),
               HermitianOperator::diagonal({3, 4, 6, 8}).matrix()) < 1e-15);
    const Subspace t = tensor_subspace(span({e(2, 0)}), span({e(2, 1)}));
    CHECK(t.dim() == 1);
    CHECK(subspace_distance(t, span({e(4, 1)})) < 1e-15);
}

TEST_CASE("from_matrix rejects non-Hermitian input") {
    try {
        HermitianOperator::from_matrix(test::mat({{1, 2}, {0, 1}}));
        FAIL("expected NotHermitian");
    } catch (const Error& err) {
        CHECK(err.code() == ErrorCode::NotHermitian);
    }
}

TEST_CASE("Subspace::span drops negligible directions") {
    CHECK(span({test::vec({0, 0})}).is_zero());
    CHECK(span({test::vec({1, 1}), test::vec({2, 2})}).dim() == 1);
}

TEST_CASE("loewner order") {
    CHECK(loewner_leq(HermitianOperator::diagonal({1, 0}), HermitianOperator::diagonal({1, 1})));
    CHECK_FALSE(loewner_leq(HermitianOperator::diagonal({2, 0}), HermitianOperator::diagonal({1, 1})));
}
