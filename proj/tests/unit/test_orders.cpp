#include <doctest.h>

#include "helpers.hpp"
#include "shortcalc/compat.hpp"
#include "shortcalc/generators.hpp"
#include "shortcalc/orders.hpp"

using namespace shortcalc;
using testutil::gap;
using testutil::real;

namespace {

const ComplexMatrix kA = real({{1, 0}, {0, 0}});
const ComplexMatrix kB = real({{1, 0}, {0, 2}});
const ComplexMatrix kOnes = real({{1, 1}, {1, 1}});

void witnesses_sound(const OrderVerdict& v, const ComplexMatrix& a, const ComplexMatrix& b) {
    REQUIRE(v.left_witness);
    REQUIRE(v.right_witness);
    CHECK(gap(a, v.left_witness->matrix() * b) < 1e-9 * (b.norm() + 1));
    CHECK(gap(a.adjoint(), v.right_witness->matrix() * b.adjoint()) < 1e-9 * (b.norm() + 1));
}

}  // namespace

TEST_CASE("minus order examples") {
    const OrderVerdict v = leq_minus(kA, kB);
    CHECK(v.holds);
    witnesses_sound(v, kA, kB);
    CHECK(gap(v.left_witness->matrix(), kA) < 1e-12);

    const OrderVerdict f = leq_minus(kA, kOnes);
    CHECK_FALSE(f.holds);
    CHECK(f.failure_reason == FailureReason::range_sum_not_direct);
    CHECK(to_string(f.failure_reason) == "range_sum_not_direct");

    Rng rng(2);
    const ComplexMatrix x = random_rank_matrix(4, 4, 2, rng);
    const OrderVerdict r = leq_minus(x, x);
    CHECK(r.holds);
    CHECK(gap(r.left_witness->matrix(), range(x).projector()) < 1e-10);
    CHECK_THROWS_AS(leq_minus(kA, ComplexMatrix::Zero(3, 3)), ShapeMismatch);
}

TEST_CASE("left minus") {
    CHECK(leq_left_minus(kOnes, kOnes));
    CHECK(leq_left_minus(kA, kB));
    CHECK_FALSE(leq_left_minus(kA, kOnes));
}

TEST_CASE("star orders") {
    for (auto variant : {StarVariant::star, StarVariant::left_star, StarVariant::right_star}) {
        CHECK(leq_star(variant, kA, kB).holds);
        CHECK(leq_star(variant, ComplexMatrix::Zero(2, 2), kOnes).holds);
    }
    // A^*B = [[1,1],[1,1]] = A^*A and R(A) is inside R(B)
    CHECK(leq_star(StarVariant::left_star, real({{1, 1}, {0, 0}}), real({{1, 1}, {0, 1}})).holds);
    const OrderVerdict bad = leq_star(StarVariant::left_star, kA, kOnes);
    CHECK_FALSE(bad.holds);
    CHECK(bad.failure_reason == FailureReason::algebraic_identity_fails);
    CHECK_FALSE(leq_star(StarVariant::right_star, kA, kOnes).holds);
    const OrderVerdict s = leq_star(StarVariant::star, kA, kB);
    REQUIRE(s.cross_check);
    CHECK(*s.cross_check);
}

TEST_CASE("weighted star example") {
    const PsdOperator w(testutil::running_w());
    const ComplexMatrix b = real({{1, 1}, {0, -2}});
    CHECK(leq_weighted_star(WeightedVariant::left, kA, b, w).holds);
    CHECK(weighted_star_by_definition(WeightedVariant::left, kA, b, w));
    CHECK(leq_weighted_star(WeightedVariant::both, b, b, w).holds);
    CHECK_FALSE(leq_weighted_star(WeightedVariant::left, kA, kB, w).holds);
    const OrderVerdict v = leq_weighted_star(WeightedVariant::left, kA, b, w);
    REQUIRE(v.cross_check);
    CHECK(*v.cross_check);
}

TEST_CASE("random pairs: finite-dimensional collapses and cross checks") {
    Rng rng(31);
    for (int t = 0; t < 60; ++t) {
        const Index n = rng.integer(2, 6);
        ComplexMatrix a;
        ComplexMatrix b;
        if (t % 2 == 0) {
            const Chain ch = minus_chain(n, rng.integer(0, n / 2), rng.integer(0, n / 2), 0, rng);
            a = ch.a;
            b = ch.b;
        } else {
            a = random_rank_matrix(n, n, rng.integer(0, n), rng);
            b = random_rank_matrix(n, n, rng.integer(0, n), rng);
        }
        const OrderVerdict m = leq_minus(a, b);
        if (t % 2 == 0) CHECK(m.holds);
        CHECK(m.holds == leq_left_minus(a, b));
        CHECK(m.holds == minus_by_witness(a, b));
        if (m.holds) witnesses_sound(m, a, b);

        const PsdOperator id = PsdOperator::identity(n);
        const OrderVerdict star = leq_star(StarVariant::star, a, b);
        CHECK(star.holds == leq_weighted_star(WeightedVariant::both, a, b, id).holds);
        CHECK(leq_star(StarVariant::left_star, a, b).holds ==
              leq_weighted_star(WeightedVariant::left, a, b, id).holds);
        if (star.holds) CHECK(m.holds);
        REQUIRE(star.cross_check);
        CHECK(*star.cross_check == star.holds);

        const PsdOperator w(random_psd_matrix(n, rng.integer(0, n), rng));
        for (auto variant : {WeightedVariant::left, WeightedVariant::right, WeightedVariant::both}) {
            CHECK(leq_weighted_star(variant, a, b, w).holds ==
                  weighted_star_by_definition(variant, a, b, w));
        }
    }
}

TEST_CASE("weighted star generators and cross check") {
    Rng rng(12);
    for (int t = 0; t < 40; ++t) {
        const Index n = rng.integer(3, 7);
        const PsdOperator w(random_psd_matrix(n, rng.integer(n - 1, n), rng));
        const WeightedPair p = weighted_star_pair(n, w, rng);
        const OrderVerdict v = leq_weighted_star(WeightedVariant::left, p.a, p.a + p.d, w);
        CHECK(v.holds);
        if (v.cross_check) CHECK(*v.cross_check);
        CHECK(weighted_star_by_definition(WeightedVariant::left, p.a, p.a + p.d, w));

        const Chain ch = weighted_star_chain(n, w, 1, 1, 1, true, rng);
        CHECK(leq_weighted_star(WeightedVariant::both, ch.a, ch.b, w).holds);
        CHECK(leq_weighted_star(WeightedVariant::both, ch.b, ch.c, w).holds);
        CHECK(leq_weighted_star(WeightedVariant::both, ch.a, ch.c, w).holds);
    }
}

TEST_CASE("order axioms harness") {
    std::vector<Chain> chains{{real({{1, 0, 0}, {0, 0, 0}, {0, 0, 0}}),
                               real({{1, 0, 0}, {0, 2, 0}, {0, 0, 0}}),
                               real({{1, 0, 0}, {0, 2, 0}, {0, 0, 3}})}};
    Rng rng(5);
    for (int t = 0; t < 20; ++t) chains.push_back(minus_chain(5, 1, 2, 1, rng));
    const Report rep = order_axioms_harness(
        [](const ComplexMatrix& x, const ComplexMatrix& y) { return leq_minus(x, y).holds; }, chains);
    for (const Check& c : rep.checks) {
        INFO(c.name << " " << c.note);
        CHECK(c.pass);
    }
    const Report broken = order_axioms_harness(
        [](const ComplexMatrix&, const ComplexMatrix&) { return true; }, chains);
    CHECK_FALSE(broken.find("antisymmetry")->pass);
}
