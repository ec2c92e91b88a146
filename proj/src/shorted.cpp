#include "shortcalc/shorted.hpp"

#include <algorithm>
#include <cmath>

#include "shortcalc/compat.hpp"
#include "shortcalc/generators.hpp"

namespace shortcalc {

namespace {

void require_matching(const PsdOperator& w, const Subspace& s) {
    if (w.dim() != s.ambient_dim()) {
        throw DimensionMismatch("weight is " + std::to_string(w.dim()) + "x" +
                                std::to_string(w.dim()) + " but the subspace lives in C^" +
                                std::to_string(s.ambient_dim()));
    }
}

/// K = (W^{1/2})^{-1}(S^perp).
Subspace pekarev_subspace(const PsdOperator& w, const Subspace& s, const Tolerance& tol) {
    return preimage(w.sqrt(), complement(s), tol, std::sqrt(w.norm()));
}

}  // namespace

ShortedResult shorted_operator(const PsdOperator& w, const Subspace& s, const Tolerance& tol) {
    require_matching(w, s);
    const ComplexMatrix pk = pekarev_subspace(w, s, tol).projector();
    const ComplexMatrix shorted = hermitian_part(w.sqrt() * pk * w.sqrt());
    PsdOperator sh(shorted, tol, w.norm());
    PsdOperator comp(w.matrix() - shorted, tol, w.norm());
    Subspace range = sh.range();
    Subspace null = sh.nullspace();
    Subspace comp_null = comp.nullspace();
    return {std::move(sh), std::move(comp), std::move(range), std::move(null), std::move(comp_null)};
}

ComplexMatrix shorted_schur_oracle(const PsdOperator& w, const Subspace& s, const Tolerance& tol) {
    require_matching(w, s);
    const Index n = w.dim();
    const Index k = s.dim();
    if (k == 0) return w.matrix();
    if (k == n) return ComplexMatrix::Zero(n, n);
    const Index m = n - k;
    ComplexMatrix u(n, n);
    u << complement(s).basis(), s.basis();
    const ComplexMatrix blocks = u.adjoint() * w.matrix() * u;
    const ComplexMatrix w11 = blocks.topLeftCorner(m, m);
    const ComplexMatrix w12 = blocks.topRightCorner(m, k);
    const ComplexMatrix w22 = blocks.bottomRightCorner(k, k);
    const ComplexMatrix schur = w11 - w12 * pinv(w22, tol, w.norm()) * w12.adjoint();
    const ComplexMatrix u1 = u.leftCols(m);
    return hermitian_part(u1 * schur * u1.adjoint());
}

ComplexMatrix dominated_member(const PsdOperator& w, const Subspace& s, const ComplexMatrix& g,
                               const Tolerance& tol) {
    require_matching(w, s);
    if (g.rows() != w.dim() || g.cols() != w.dim()) {
        throw DimensionMismatch("contraction has the wrong size");
    }
    const ComplexMatrix pk = pekarev_subspace(w, s, tol).projector();
    return hermitian_part(w.sqrt() * pk * g * pk * w.sqrt());
}

ComplexMatrix sample_dominated(const PsdOperator& w, const Subspace& s, std::uint64_t seed,
                               const Tolerance& tol) {
    Rng rng(seed);
    return dominated_member(w, s, random_contraction(w.dim(), rng), tol);
}

ComplexMatrix sample_projection_with_nullspace(const Subspace& s, std::uint64_t seed,
                                               const Tolerance& tol) {
    const Index n = s.ambient_dim();
    Rng rng(seed);
    for (int attempt = 0; attempt < 100; ++attempt) {
        const Subspace r = Subspace::span(random_gaussian(n, n - s.dim(), rng), tol);
        try {
            return oblique_projection(r, s, tol).matrix();
        } catch (const NotComplementary&) {
        }
    }
    throw Error("could not draw a complement of S in 100 attempts");
}

Report verify_shorted_theorem(const PsdOperator& w, const Subspace& s, int samples,
                              const Tolerance& tol, std::uint64_t seed) {
    require_matching(w, s);
    Report rep;
    rep.title = "shorted operator";
    const Index n = w.dim();
    const ShortedResult res = shorted_operator(w, s, tol);
    const ComplexMatrix& sh = res.shorted.matrix();
    const double wscale = w.matrix().norm() + 1.0;

    const double oracle_gap = (sh - shorted_schur_oracle(w, s, tol)).norm() / wscale;
    rep.add("pekarev_vs_schur", oracle_gap <= tol.slack(0.0), oracle_gap);

    const ComplexMatrix sum_gap = res.shorted.matrix() + res.compression.matrix() - w.matrix();
    rep.add("shorted_plus_compression", sum_gap.norm() <= tol.slack(wscale), sum_gap.norm());

    const Subspace s_perp = complement(s);
    const auto range_cmp = compare(res.shorted_range, intersect(w.range(), s_perp, tol), tol);
    rep.add("range_equals_RW_cap_Sperp", range_cmp.equal, range_cmp.residual);
    const auto null_cmp = compare(res.shorted_nullspace, sum(w.nullspace(), s, tol), tol);
    rep.add("nullspace_equals_NW_plus_S", null_cmp.equal, null_cmp.residual);
    const auto comp_cmp =
        compare(res.compression_nullspace, preimage(w.matrix(), s_perp, tol, w.norm()), tol);
    rep.add("compression_nullspace_equals_preimage", comp_cmp.equal, comp_cmp.residual);

    Rng master(seed);
    const ComplexMatrix ps = s.projector();
    const ComplexMatrix zero = ComplexMatrix::Zero(n, n);
    int member_violations = 0;
    int max_violations = 0;
    double worst_member = 0.0;
    double worst_max = 0.0;
    for (int i = 0; i < samples; ++i) {
        const ComplexMatrix x = sample_dominated(w, s, master.next_seed(), tol);
        const double range_leak = (ps * x).norm();
        const bool member = loewner_leq(zero, x, tol) && loewner_leq(x, w.matrix(), tol) &&
                            range_leak <= tol.slack(wscale);
        if (!member) ++member_violations;
        worst_member = std::max(worst_member, range_leak);
        if (!loewner_leq(x, sh, tol)) ++max_violations;
        worst_max = std::max(worst_max, -loewner_margin(x, sh));
    }
    rep.add("samples_in_M(W,S)", member_violations == 0, worst_member,
            std::to_string(samples) + " samples");
    rep.add("maximality", max_violations == 0, std::max(0.0, worst_max),
            std::to_string(max_violations) + " violations");

    int inf_violations = 0;
    double worst_inf = 0.0;
    for (int i = 0; i < samples; ++i) {
        const ComplexMatrix e = sample_projection_with_nullspace(s, master.next_seed(), tol);
        const ComplexMatrix ewe = hermitian_part(e.adjoint() * w.matrix() * e);
        if (!loewner_leq(sh, ewe, tol)) ++inf_violations;
        worst_inf = std::max(worst_inf, -loewner_margin(sh, ewe));
    }
    rep.add("projection_lower_bound", inf_violations == 0, std::max(0.0, worst_inf),
            std::to_string(inf_violations) + " violations");

    const CompatibilityCertificate cert = is_compatible(w, s, tol);
    if (cert.canonical) {
        const ComplexMatrix e0 = ComplexMatrix::Identity(n, n) - cert.canonical->matrix();
        const double gap = (e0.adjoint() * w.matrix() * e0 - sh).norm();
        rep.add("infimum_attained_at_I_minus_PWS", gap <= tol.slack(wscale), gap);
    } else {
        rep.add("infimum_attained_at_I_minus_PWS", false, 1.0, "pair not compatible");
    }

    const ShortedResult again = shorted_operator(w, res.shorted_nullspace, tol);
    const double idem = (again.shorted.matrix() - sh).norm() / wscale;
    rep.add("idempotent_on_nullspace", idem <= tol.slack(0.0), idem);

    const auto w_image = [&](const Subspace& sub) {
        return range(w.matrix() * sub.basis(), tol, w.norm());
    };
    const auto img_cmp = compare(w_image(res.shorted_nullspace), w_image(s), tol);
    rep.add("W_image_complements_agree", img_cmp.equal, img_cmp.residual);
    return rep;
}

}  // namespace shortcalc
