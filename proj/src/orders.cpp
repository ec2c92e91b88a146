#include "shortcalc/orders.hpp"

#include <algorithm>

#include "shortcalc/compat.hpp"

namespace shortcalc {

namespace {

void require_same_shape(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw ShapeMismatch("operands have shapes " + std::to_string(a.rows()) + "x" +
                            std::to_string(a.cols()) + " and " + std::to_string(b.rows()) + "x" +
                            std::to_string(b.cols()));
    }
}

double pair_scale(const ComplexMatrix& a, const ComplexMatrix& b) {
    return std::max(spectral_norm(a), spectral_norm(b));
}

/// P onto R(A) along R(B-A) (+) (R(A) + R(B-A))^perp.
std::optional<Projection> canonical_witness(const ComplexMatrix& a, const ComplexMatrix& b,
                                            const Tolerance& tol) {
    const double ref = pair_scale(a, b);
    const Subspace ra = range(a, tol, ref);
    const Subspace rd = range(b - a, tol, ref);
    const Subspace kernel = sum(rd, complement(sum(ra, rd, tol)), tol);
    try {
        return oblique_projection(ra, kernel, tol);
    } catch (const NotComplementary&) {
        return std::nullopt;
    }
}

bool witness_identity(const std::optional<Projection>& p, const ComplexMatrix& a,
                      const ComplexMatrix& b, const Tolerance& tol) {
    return p && identity_holds(a, p->matrix() * b, tol);
}

}  // namespace

std::string_view to_string(FailureReason r) {
    switch (r) {
        case FailureReason::none:
            return "none";
        case FailureReason::range_sum_not_direct:
            return "range_sum_not_direct";
        case FailureReason::adjoint_sum_not_direct:
            return "adjoint_sum_not_direct";
        case FailureReason::range_not_contained:
            return "range_not_contained";
        case FailureReason::algebraic_identity_fails:
            return "algebraic_identity_fails";
    }
    return "none";
}

bool identity_holds(const ComplexMatrix& x, const ComplexMatrix& y, const Tolerance& tol) {
    return nearly_equal(x, y, tol);
}

OrderVerdict leq_minus(const ComplexMatrix& a, const ComplexMatrix& b, const Tolerance& tol) {
    require_same_shape(a, b);
    OrderVerdict v;
    const double ref = pair_scale(a, b);
    const Index ra = rank(a, tol, ref);
    const Index rb = rank(b, tol, ref);
    const Index rd = rank(b - a, tol, ref);
    if (rb != ra + rd || !contains(range(b, tol, ref), range(a, tol, ref), tol)) {
        v.failure_reason = FailureReason::range_sum_not_direct;
        return v;
    }
    const ComplexMatrix as = a.adjoint();
    const ComplexMatrix bs = b.adjoint();
    if (!contains(range(bs, tol, ref), range(as, tol, ref), tol)) {
        v.failure_reason = FailureReason::adjoint_sum_not_direct;
        return v;
    }
    v.holds = true;
    v.left_witness = canonical_witness(a, b, tol);
    v.right_witness = canonical_witness(as, bs, tol);
    return v;
}

bool minus_by_witness(const ComplexMatrix& a, const ComplexMatrix& b, const Tolerance& tol) {
    require_same_shape(a, b);
    const ComplexMatrix as = a.adjoint();
    const ComplexMatrix bs = b.adjoint();
    return witness_identity(canonical_witness(a, b, tol), a, b, tol) &&
           witness_identity(canonical_witness(as, bs, tol), as, bs, tol);
}

bool leq_left_minus(const ComplexMatrix& a, const ComplexMatrix& b, const Tolerance& tol) {
    require_same_shape(a, b);
    const double ref = pair_scale(a, b);
    const Subspace ra = range(a, tol, ref);
    const Subspace rd = range(b - a, tol, ref);
    if (!direct_sum(ra, rd, tol).direct) return false;
    return equal(range(b, tol, ref), sum(ra, rd, tol), tol);
}

OrderVerdict leq_star(StarVariant variant, const ComplexMatrix& a, const ComplexMatrix& b,
                      const Tolerance& tol) {
    require_same_shape(a, b);
    const double ref = pair_scale(a, b);
    const ComplexMatrix as = a.adjoint();
    const ComplexMatrix bs = b.adjoint();
    const bool need_left = variant != StarVariant::right_star;
    const bool need_right = variant != StarVariant::left_star;

    OrderVerdict v;
    if (need_left && !identity_holds(as * a, as * b, tol)) {
        v.failure_reason = FailureReason::algebraic_identity_fails;
    } else if (need_right && !identity_holds(a * as, b * as, tol)) {
        v.failure_reason = FailureReason::algebraic_identity_fails;
    } else if (variant == StarVariant::left_star &&
               !contains(range(b, tol, ref), range(a, tol, ref), tol)) {
        v.failure_reason = FailureReason::range_not_contained;
    } else if (variant == StarVariant::right_star &&
               !contains(range(bs, tol, ref), range(as, tol, ref), tol)) {
        v.failure_reason = FailureReason::range_not_contained;
    } else {
        v.holds = true;
        if (need_left) v.left_witness = orthogonal_projection(range(a, tol, ref));
        if (need_right) v.right_witness = orthogonal_projection(range(as, tol, ref));
    }
    if (variant == StarVariant::star) {
        v.cross_check = leq_star(StarVariant::left_star, a, b, tol).holds &&
                        leq_star(StarVariant::right_star, a, b, tol).holds;
    }
    return v;
}

bool weighted_star_by_definition(WeightedVariant variant, const ComplexMatrix& a,
                                 const ComplexMatrix& b, const PsdOperator& w,
                                 const Tolerance& tol) {
    require_same_shape(a, b);
    if (w.dim() != a.rows() || a.rows() != a.cols()) {
        throw ShapeMismatch("weighted star needs square operands matching W");
    }
    const double ref = pair_scale(a, b);
    const auto side = [&](const ComplexMatrix& x, const ComplexMatrix& y) {
        if (!leq_left_minus(x, y, tol)) return false;
        const Subspace companion = w_companion(w, range(x, tol, ref), tol);
        return contains(companion, range(y - x, tol, ref), tol);
    };
    const bool left = variant == WeightedVariant::right || side(a, b);
    const bool right = variant == WeightedVariant::left || side(a.adjoint(), b.adjoint());
    return left && right;
}

OrderVerdict leq_weighted_star(WeightedVariant variant, const ComplexMatrix& a,
                               const ComplexMatrix& b, const PsdOperator& w,
                               const Tolerance& tol) {
    require_same_shape(a, b);
    if (w.dim() != a.rows() || a.rows() != a.cols()) {
        throw ShapeMismatch("weighted star needs square operands matching W");
    }
    const double ref = pair_scale(a, b);
    const ComplexMatrix& wm = w.matrix();
    const ComplexMatrix as = a.adjoint();
    const ComplexMatrix bs = b.adjoint();
    const bool need_left = variant != WeightedVariant::right;
    const bool need_right = variant != WeightedVariant::left;

    OrderVerdict v;
    if (need_left && !leq_left_minus(a, b, tol)) {
        v.failure_reason = FailureReason::range_sum_not_direct;
    } else if (need_right && !leq_left_minus(as, bs, tol)) {
        v.failure_reason = FailureReason::adjoint_sum_not_direct;
    } else if (need_left && !identity_holds(as * wm * a, as * wm * b, tol)) {
        v.failure_reason = FailureReason::algebraic_identity_fails;
    } else if (need_right && !identity_holds(a * wm * as, b * wm * as, tol)) {
        v.failure_reason = FailureReason::algebraic_identity_fails;
    } else {
        v.holds = true;
        if (need_left) v.left_witness = canonical_witness(a, b, tol);
        if (need_right) v.right_witness = canonical_witness(as, bs, tol);
    }

    // P_{W,R(A)} form, only where N(W) cap R(A) = {0}
    const auto lemma_side = [&](const ComplexMatrix& x, const ComplexMatrix& y) -> std::optional<bool> {
        const Subspace rx = range(x, tol, ref);
        if (!intersect(w.nullspace(), rx, tol).is_trivial()) return std::nullopt;
        const CompatibilityCertificate cert = is_compatible(w, rx, tol);
        if (!cert.canonical) return std::nullopt;
        return contains(range(y, tol, ref), rx, tol) &&
               identity_holds(x, cert.canonical->matrix() * y, tol);
    };
    std::optional<bool> left_alt = need_left ? lemma_side(a, b) : std::optional<bool>(true);
    std::optional<bool> right_alt = need_right ? lemma_side(as, bs) : std::optional<bool>(true);
    if (left_alt && right_alt) v.cross_check = *left_alt && *right_alt;
    return v;
}

Report order_axioms_harness(const OrderRelation& relation, const std::vector<Chain>& samples,
                            const Tolerance& tol) {
    Report rep;
    rep.title = "order axioms";
    int reflexive_fail = 0;
    int premise_fail = 0;
    int transitive_fail = 0;
    int transitive_checked = 0;
    int mutual_pairs = 0;
    int antisymmetry_fail = 0;
    double worst_mutual = 0.0;
    Rng rng(0xa11ce);

    const auto mutual = [&](const ComplexMatrix& x, const ComplexMatrix& y) {
        if (!(relation(x, y) && relation(y, x))) return;
        ++mutual_pairs;
        const double gap = (x - y).norm() / (x.norm() + y.norm() + 1.0);
        worst_mutual = std::max(worst_mutual, gap);
        if (gap > tol.slack(0.0)) ++antisymmetry_fail;
    };

    for (const Chain& ch : samples) {
        for (const ComplexMatrix* x : {&ch.a, &ch.b, &ch.c}) {
            if (!relation(*x, *x)) ++reflexive_fail;
        }
        const bool ab = relation(ch.a, ch.b);
        const bool bc = relation(ch.b, ch.c);
        if (!(ab && bc)) {
            ++premise_fail;
        } else {
            ++transitive_checked;
            if (!relation(ch.a, ch.c)) ++transitive_fail;
        }
        mutual(ch.a, ch.b);
        mutual(ch.b, ch.c);
        mutual(ch.a, ch.c);
        // a rounding-level copy must be comparable both ways and equal
        const ComplexMatrix noise = random_gaussian(ch.b.rows(), ch.b.cols(), rng);
        mutual(ch.b, ch.b + 1e-13 * (ch.b.norm() + 1.0) * noise / noise.norm());
    }
    const auto count = [](int k, const char* what) { return std::to_string(k) + " " + what; };
    rep.add("reflexivity", reflexive_fail == 0, 0.0, count(reflexive_fail, "failures"));
    rep.add("premises", premise_fail == 0, 0.0, count(premise_fail, "chains with a failed premise"));
    rep.add("transitivity", transitive_fail == 0, 0.0,
            count(transitive_fail, "failures") + " of " + std::to_string(transitive_checked));
    rep.add("antisymmetry", antisymmetry_fail == 0, worst_mutual,
            count(mutual_pairs, "mutual pairs"));
    return rep;
}

}  // namespace shortcalc
