#include <doctest.h>

#include "helpers.hpp"
#include "shortcalc/compat.hpp"
#include "shortcalc/generators.hpp"
#include "shortcalc/shorted.hpp"

using namespace shortcalc;
using testutil::gap;
using testutil::real;

namespace {

void require_all_pass(const Report& rep) {
    for (const Check& c : rep.checks) {
        INFO(c.name << " residual " << c.residual << " " << c.note);
        CHECK(c.pass);
    }
}

}  // namespace

TEST_CASE("running example") {
    const PsdOperator w(testutil::running_w());
    const Subspace s = Subspace::coordinate(2, {0});
    const ShortedResult r = shorted_operator(w, s);
    CHECK(gap(r.shorted.matrix(), real({{0, 0}, {0, 0.5}})) < 1e-12);
    CHECK(gap(r.compression.matrix(), real({{2, 1}, {1, 0.5}})) < 1e-12);
    CHECK(gap(shorted_schur_oracle(w, s), real({{0, 0}, {0, 0.5}})) < 1e-12);
    CHECK(equal(r.shorted_range, Subspace::coordinate(2, {1})));
    CHECK(equal(r.shorted_nullspace, s));
    CHECK(equal(r.compression_nullspace, Subspace::span(testutil::col({-1, 2}))));
    require_all_pass(verify_shorted_theorem(w, s, 100));
}

TEST_CASE("identity weight gives orthogonal projections") {
    const PsdOperator w = PsdOperator::identity(2);
    const Subspace s = Subspace::coordinate(2, {0});
    CHECK(gap(shorted_operator(w, s).shorted.matrix(), real({{0, 0}, {0, 1}})) < 1e-14);
    CHECK(gap(shorted_schur_oracle(w, s), real({{0, 0}, {0, 1}})) < 1e-14);
    require_all_pass(verify_shorted_theorem(w, s, 10));
}

TEST_CASE("extreme subspaces and block diagonal weights") {
    Rng rng(4);
    const PsdOperator w(random_psd_matrix(4, 3, rng));
    CHECK(gap(shorted_operator(w, Subspace::zero(4)).shorted.matrix(), w.matrix()) < 1e-12);
    CHECK(shorted_operator(w, Subspace::full(4)).shorted.matrix().norm() < 1e-12);

    const PsdOperator d(real({{3, 0}, {0, 5}}));
    CHECK(gap(shorted_schur_oracle(d, Subspace::coordinate(2, {1})), real({{3, 0}, {0, 0}})) <
          1e-14);
    CHECK(gap(shorted_operator(d, Subspace::coordinate(2, {1})).shorted.matrix(),
              real({{3, 0}, {0, 0}})) < 1e-13);
}

TEST_CASE("singular weight") {
    const PsdOperator w(real({{1, 0}, {0, 0}}));
    const Subspace s = Subspace::coordinate(2, {1});
    const ShortedResult r = shorted_operator(w, s);
    CHECK(gap(r.shorted.matrix(), real({{1, 0}, {0, 0}})) < 1e-14);
    CHECK(equal(r.shorted_nullspace, s));
    require_all_pass(verify_shorted_theorem(w, s, 50));
}

TEST_CASE("dominated members") {
    const PsdOperator w(testutil::running_w());
    const Subspace s = Subspace::coordinate(2, {0});
    CHECK(gap(dominated_member(w, s, ComplexMatrix::Identity(2, 2)), real({{0, 0}, {0, 0.5}})) <
          1e-12);
    CHECK(dominated_member(w, s, ComplexMatrix::Zero(2, 2)).norm() < 1e-14);
    CHECK(gap(dominated_member(w, s, 0.5 * ComplexMatrix::Identity(2, 2)),
              real({{0, 0}, {0, 0.25}})) < 1e-12);
}

TEST_CASE("random instances: oracle, maximality, infimum, monotonicity") {
    Rng rng(2024);
    for (int t = 0; t < 40; ++t) {
        const Index n = rng.integer(2, 7);
        const PsdOperator w(random_psd_matrix(n, rng.integer(0, n), rng));
        const Index k = rng.integer(0, n);
        const Subspace s = random_subspace(n, k, rng);
        const ShortedResult r = shorted_operator(w, s);
        CHECK(gap(r.shorted.matrix(), shorted_schur_oracle(w, s)) / (w.matrix().norm() + 1) < 1e-9);
        CHECK(loewner_leq(r.shorted.matrix(), w.matrix()));
        CHECK(gap(r.shorted.matrix() + r.compression.matrix(), w.matrix()) < 1e-10);
        require_all_pass(verify_shorted_theorem(w, s, 10, {}, rng.next_seed()));

        const Subspace bigger = sum(s, random_subspace(n, 1, rng));
        CHECK(loewner_leq(shorted_operator(w, bigger).shorted.matrix(), r.shorted.matrix()));
    }
}

TEST_CASE("projections with a prescribed nullspace") {
    Rng rng(8);
    const Subspace s = random_subspace(5, 2, rng);
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const ComplexMatrix e = sample_projection_with_nullspace(s, seed);
        CHECK(gap(e * e, e) < 1e-9 * (e.norm() + 1));
        CHECK(equal(nullspace(e), s));
    }
}

TEST_CASE("dimension errors") {
    CHECK_THROWS_AS(shorted_operator(PsdOperator::identity(3), Subspace::zero(2)), DimensionMismatch);
    CHECK_THROWS_AS(shorted_schur_oracle(PsdOperator::identity(3), Subspace::zero(2)),
                    DimensionMismatch);
}
