#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numbers>

#include "helpers.hpp"
#include "localize/error.hpp"
#include "localize/quantum.hpp"

using namespace localize;
using test::diff;
using test::e;
using test::span;

namespace {

const double kPi3 = std::numbers::pi / 3.0;
const double kR = 1.0 / std::sqrt(2.0);

DensityMatrix pure(const Vector& v) { return DensityMatrix::from_operator(HermitianOperator::outer(v)); }

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

TEST_CASE("density matrix validation") {
    CHECK(code_of([] { DensityMatrix::from_operator(HermitianOperator::diagonal({1, 1})); }) ==
          ErrorCode::NotDensityMatrix);
    CHECK(code_of([] { DensityMatrix::from_operator(HermitianOperator::diagonal({1.5, -0.5})); }) ==
          ErrorCode::NotDensityMatrix);
}

TEST_CASE("state_decompose") {
    SUBCASE("maximally mixed qubit") {
        const StateDecomposition s =
            state_decompose(DensityMatrix::from_operator(0.5 * HermitianOperator::identity(2)), span({e(2, 0)}));
        CHECK(s.lam == doctest::Approx(0.5));
        REQUIRE(s.rho_B);
        REQUIRE(s.rho_C);
        CHECK(diff(s.rho_B->matrix(), HermitianOperator::diagonal({1, 0}).matrix()) < 1e-14);
        CHECK(diff(s.rho_C->matrix(), HermitianOperator::diagonal({0, 1}).matrix()) < 1e-14);
    }
    SUBCASE("pure state outside V") {
        const DensityMatrix plus = pure(test::vec({kR, kR}));
        const StateDecomposition s = state_decompose(plus, span({e(2, 0)}));
        CHECK(s.lam == doctest::Approx(0.0));
        CHECK_FALSE(s.rho_B);
        REQUIRE(s.rho_C);
        CHECK(diff(s.rho_C->matrix(), plus.matrix()) < 1e-14);
    }
    SUBCASE("qubit a = 0.5, theta = pi/3") {
        CHECK(state_decompose(qubit_state(0.5, kPi3), span({e(2, 0)})).lam == doctest::Approx(0.5).epsilon(1e-12));
    }
}

TEST_CASE("probability table") {
    SUBCASE("qubit a = 0.5, theta = pi/3") {
        const ProbabilityTable t = probability_table(qubit_state(0.5, kPi3), span({e(2, 0)}));
        CHECK(t.lam == doctest::Approx(0.5).epsilon(1e-12));
        CHECK(t.lam_perp == doctest::Approx(0.3).epsilon(1e-12));
        CHECK(t.deficiency == doctest::Approx(0.2).epsilon(1e-12));
        CHECK(t.p == doctest::Approx(0.625).epsilon(1e-12));
        CHECK(t.v_c == doctest::Approx(0.125).epsilon(1e-12));
        CHECK(t.vperp_c == doctest::Approx(0.375).epsilon(1e-12));
        CHECK(t.vperp_b == 0.0);
    }
    SUBCASE("maximally mixed") {
        const ProbabilityTable t =
            probability_table(DensityMatrix::from_operator(0.5 * HermitianOperator::identity(2)), span({e(2, 0)}));
        CHECK(t.lam == doctest::Approx(0.5));
        CHECK(t.lam_perp == doctest::Approx(0.5));
        CHECK(t.p == doctest::Approx(0.5));
        CHECK(t.deficiency == doctest::Approx(0.0));
    }
    SUBCASE("pure state inside V") {
        const ProbabilityTable t = probability_table(pure(test::vec({kR, kR, 0})), span({e(3, 0), e(3, 1)}));
        CHECK(t.lam == doctest::Approx(1.0));
        CHECK(t.p == doctest::Approx(1.0));
        CHECK(t.lam_perp == doctest::Approx(0.0));
    }
}

TEST_CASE("multi probability table") {
    SUBCASE("maximally mixed with an orthogonal chain") {
        const DensityMatrix rho = DensityMatrix::from_operator((1.0 / 3.0) * HermitianOperator::identity(3));
        const std::vector<Subspace> chain{span({e(3, 0), e(3, 1)}), span({e(3, 0)}), Subspace::zero(3)};
        const MultiProbabilityTable t = multi_probability_table(rho, chain);
        REQUIRE(t.lam.size() == 3);
        for (std::size_t k = 0; k < 3; ++k) {
            CHECK(t.lam[k] == doctest::Approx(1.0 / 3.0));
            CHECK(t.p[k] == doctest::Approx(1.0 / 3.0));
        }
    }
    SUBCASE("qubit") {
        const std::vector<Subspace> chain{span({e(2, 0)}), Subspace::zero(2)};
        const MultiProbabilityTable t = multi_probability_table(qubit_state(0.5, kPi3), chain);
        REQUIRE(t.lam.size() == 2);
        CHECK(t.lam[0] == doctest::Approx(0.5).epsilon(1e-12));
        CHECK(t.lam[1] == doctest::Approx(0.5).epsilon(1e-12));
        CHECK(t.p[0] + t.p[1] >= 1.0 - 1e-12);
    }
    SUBCASE("single component") {
        const DensityMatrix rho = qubit_state(0.5, kPi3);
        const std::vector<Subspace> chain{Subspace::zero(2)};
        const MultiProbabilityTable t = multi_probability_table(rho, chain);
        REQUIRE(t.lam.size() == 1);
        CHECK(t.lam[0] == doctest::Approx(1.0));
    }
}

TEST_CASE("qubit closed forms") {
    const QubitClosedForm q = qubit_closed_form(0.5, kPi3);
    CHECK(q.lam == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(q.lam_perp == doctest::Approx(0.3).epsilon(1e-12));
    CHECK(q.deficiency == doctest::Approx(0.2).epsilon(1e-12));
    REQUIRE(q.bloch_D);
    CHECK(q.bloch_D->norm2() == doctest::Approx(4.75).epsilon(1e-12));
    CHECK(q.bloch_D->y == 0.0);
    CHECK(q.bloch_D->z == doctest::Approx(0.25).epsilon(1e-12));

    const QubitClosedForm h = qubit_closed_form(0.5, std::numbers::pi / 2.0);
    CHECK(h.lam == doctest::Approx(0.375).epsilon(1e-12));
    CHECK(h.lam_perp == doctest::Approx(0.375).epsilon(1e-12));
    REQUIRE(h.bloch_D);
    CHECK(h.bloch_D->x == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(h.bloch_D->norm2() == doctest::Approx(4.0).epsilon(1e-12));

    const QubitClosedForm z = qubit_closed_form(0.0, kPi3);
    CHECK(z.lam == doctest::Approx(0.5));
    CHECK(z.lam_perp == doctest::Approx(0.5));
    CHECK_FALSE(z.bloch_D);

    CHECK(code_of([] { qubit_closed_form(1.0, kPi3); }) == ErrorCode::DomainError);
    CHECK(code_of([] { qubit_closed_form(0.5, 0.0); }) == ErrorCode::DomainError);
}

TEST_CASE("numeric deficiency state matches the closed form") {
    const auto d = deficiency_state(qubit_state(0.5, kPi3), span({e(2, 0)}));
    REQUIRE(d);
    CHECK(d->trace() == doctest::Approx(1.0));
    CHECK(bloch_vector(*d).norm2() == doctest::Approx(4.75).epsilon(1e-10));
}

TEST_CASE("support") {
    const std::vector<double> w{0.5, 0.5};
    const std::vector<Vector> basis{e(2, 0), e(2, 1)};
    CHECK(support(basis, w).dim() == 2);
    const std::vector<Vector> skew{e(2, 0), test::vec({kR, kR})};
    CHECK(support(skew, w).dim() == 2);
    const std::vector<Vector> same{e(2, 0), e(2, 0)};
    const Subspace s = support(same, w);
    CHECK(s.dim() == 1);
    CHECK(subspace_distance(s, span({e(2, 0)})) < 1e-14);
    const std::vector<Vector> zero{Vector::Zero(2)};
    const std::vector<double> one{1.0};
    CHECK(code_of([&] { support(zero, one); }) == ErrorCode::ZeroVector);
}

TEST_CASE("mixture_including") {
    SUBCASE("maximally mixed qubit with |+>") {
        const DensityMatrix rho = DensityMatrix::from_operator(0.5 * HermitianOperator::identity(2));
        const std::vector<Vector> psis{test::vec({kR, kR})};
        const Mixture m = mixture_including(rho, psis);
        CHECK(m.floor_weight == doctest::Approx(0.5));
        Matrix sum = Matrix::Zero(2, 2);
        double total = 0.0;
        for (const MixtureEntry& en : m.entries) {
            CHECK(en.weight >= 0.0);
            total += en.weight;
            sum += en.weight * en.state * en.state.adjoint();
        }
        CHECK(total == doctest::Approx(1.0));
        CHECK(diff(sum, rho.matrix()) < 1e-12);
        REQUIRE_FALSE(m.entries.empty());
        CHECK(m.entries[0].weight >= 0.5 - 1e-12);
    }
    SUBCASE("pure state with itself") {
        const std::vector<Vector> psis{e(2, 0)};
        const Mixture m = mixture_including(pure(e(2, 0)), psis);
        CHECK(m.floor_weight == doctest::Approx(1.0));
        REQUIRE(m.entries.size() == 1);
        CHECK(m.entries[0].weight == doctest::Approx(1.0));
    }
    SUBCASE("infeasible") {
        const std::vector<Vector> psis{test::vec({kR, kR})};
        CHECK(code_of([&] { mixture_including(pure(e(2, 0)), psis); }) == ErrorCode::Infeasible);
    }
}

TEST_CASE("reconstruct") {
    SUBCASE("diag(2,3) by hand") {
        const std::vector<Probe> probes{{e(2, 0), 2.0},
                                        {e(2, 1), 3.0},
                                        {test::vec({kR, kR}), 2.4},
                                        {test::vec({kR, {0, kR}}), 2.4}};
        CHECK(diff(reconstruct(probes).matrix(), HermitianOperator::diagonal({2, 3}).matrix()) < 1e-10);
    }
    SUBCASE("identity") {
        std::vector<Probe> probes;
        for (const Vector& v : tomographic_probes(2)) probes.push_back({v, 1.0});
        CHECK(diff(reconstruct(probes).matrix(), Matrix::Identity(2, 2)) < 1e-12);
    }
    SUBCASE("underdetermined") {
        const std::vector<Probe> probes{{e(2, 0), 1.0}};
        CHECK(code_of([&] { reconstruct(probes); }) == ErrorCode::UnderdeterminedSystem);
    }
    SUBCASE("inconsistent") {
        std::vector<Probe> probes;
        for (const Vector& v : tomographic_probes(2)) probes.push_back({v, 1.0});
        probes.push_back({test::vec({kR, -kR}), 3.0});
        CHECK(code_of([&] { reconstruct(probes); }) == ErrorCode::InconsistentProbes);
    }
}

TEST_CASE("entropy and log weight") {
    CHECK(entropy(DensityMatrix::from_operator(0.5 * HermitianOperator::identity(2))) ==
          doctest::Approx(std::log(2.0)));
    CHECK(entropy(pure(e(2, 0))) == doctest::Approx(0.0));
    CHECK(log_lambda(qubit_state(0.5, kPi3), span({e(2, 0)})) == doctest::Approx(std::log(0.5)));
    CHECK(std::isinf(log_lambda(pure(test::vec({kR, kR})), span({e(2, 0)}))));
}

TEST_CASE("mask and unmask") {
    const DensityMatrix zero = pure(e(2, 0));
    const DensityMatrix plus = pure(test::vec({kR, kR}));
    const Subspace v = span({e(2, 0)});
    const DensityMatrix masked = mask(zero, plus, 0.5, v);
    CHECK(diff(masked.matrix(), test::mat({{0.75, 0.25}, {0.25, 0.25}})) < 1e-14);
    const StateDecomposition back = unmask(masked, v);
    CHECK(back.lam == doctest::Approx(0.5).epsilon(1e-12));
    REQUIRE(back.rho_B);
    CHECK(diff(back.rho_B->matrix(), zero.matrix()) < 1e-12);

    const DensityMatrix one = pure(e(2, 1));
    CHECK(std::abs(unmask(mask(zero, one, 0.3, v), v).lam - 0.3) < 1e-15);

    CHECK(code_of([&] { mask(zero, zero, 0.5, v); }) == ErrorCode::SupportViolation);
    CHECK(code_of([&] { mask(plus, one, 0.5, v); }) == ErrorCode::SupportViolation);
}

TEST_CASE("measurement projector") {
    const DensityMatrix mixed = DensityMatrix::from_operator((1.0 / 3.0) * HermitianOperator::identity(3));
    const Subspace v = span({e(3, 0), e(3, 2)});
    CHECK(diff(measurement_projector(mixed, v), v.projector()) < 1e-12);

    const DensityMatrix q = qubit_state(0.5, kPi3);
    const Matrix proj = measurement_projector(q, span({e(2, 0)}));
    CHECK((proj * q.matrix()).trace().real() == doctest::Approx(0.5).epsilon(1e-12));

    const DensityMatrix plus = pure(test::vec({kR, kR}));
    CHECK(measurement_projector(plus, span({e(2, 0)})).norm() < 1e-14);
}
