#include "shortcalc/approx.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "shortcalc/generators.hpp"
#include "shortcalc/orders.hpp"
#include "shortcalc/shorted.hpp"

namespace shortcalc {

namespace {

ComplexMatrix identity(Index n) { return ComplexMatrix::Identity(n, n); }

void require(bool ok, const std::string& what) {
    if (!ok) throw ShapeMismatch(what);
}

void require_weighted_star(const ComplexMatrix& a, const ComplexMatrix& b, const PsdOperator& w,
                           const Tolerance& tol) {
    require(a.rows() == b.rows() && a.cols() == b.cols(), "A and B must have the same shape");
    require(a.rows() == a.cols() && w.dim() == a.rows(), "A, B and W must be square of one size");
    if (!leq_weighted_star(WeightedVariant::left, a, a + b, w, tol).holds) {
        throw HypothesisViolated("A is not below A + B in the left weighted star order");
    }
}

std::string label(double p) {
    if (std::isinf(p)) return "inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", p);
    return buf;
}

}  // namespace

ComplexMatrix solve_operator_equation(const ComplexMatrix& a, const ComplexMatrix& b,
                                      const ComplexMatrix& c, const Tolerance& tol) {
    require(a.rows() == c.rows() && b.cols() == c.cols(),
            "A X B = C needs rows(A) = rows(C) and cols(B) = cols(C)");
    const ComplexMatrix ap = pinv(a, tol);
    const ComplexMatrix bp = pinv(b, tol);
    const double scale = c.norm();
    const bool range_ok = ((identity(a.rows()) - a * ap) * c).norm() <= tol.slack(scale);
    const bool adjoint_ok = (c * (identity(b.cols()) - bp * b)).norm() <= tol.slack(scale);
    if (!range_ok && !adjoint_ok) {
        throw Infeasible(Infeasible::Which::both, "R(C) not in R(A) and R(C^*) not in R(B^*)");
    }
    if (!range_ok) throw Infeasible(Infeasible::Which::range, "R(C) is not contained in R(A)");
    if (!adjoint_ok) {
        throw Infeasible(Infeasible::Which::adjoint_range, "R(C^*) is not contained in R(B^*)");
    }
    ComplexMatrix x = ap * c * bp;
    const double gap = (a * x * b - c).norm();
    if (gap > tol.slack(scale + 1.0)) {
        throw Error("particular solution misses A X B = C by " + std::to_string(gap));
    }
    return x;
}

WInverseResult w_inverse(const ComplexMatrix& a, const PsdOperator& w, const ComplexMatrix& b,
                         const Tolerance& tol) {
    require(w.dim() == a.rows() && b.rows() == a.rows(), "w_inverse: A, W and B do not conform");
    const ComplexMatrix aw = a.adjoint() * w.matrix();
    const ComplexMatrix awa = aw * a;
    const double na = spectral_norm(a);
    const RankPinv normal = rank_and_pinv(awa, tol, na * na * w.norm());
    const Index rank_aw = rank(aw, tol, na * w.norm());

    ComplexMatrix x0 = normal.pinv * aw * b;
    const ComplexMatrix miss = a * x0 - b;
    const double residual = (aw * miss).norm();
    const double scale = aw.norm() * (a.norm() * x0.norm() + b.norm());
    const double achieved_ref = w.norm() * std::pow(na * spectral_norm(x0) + spectral_norm(b), 2);
    PsdOperator achieved(hermitian_part(miss.adjoint() * w.matrix() * miss), tol, achieved_ref);
    const bool consistent = normal.rank == rank_aw;
    return WInverseResult{std::move(x0),
                          residual,
                          std::move(achieved),
                          consistent && residual <= tol.slack(scale),
                          consistent,
                          a.cols() - normal.rank};
}

ComplexMatrix quadratic_value(const ComplexMatrix& a, const ComplexMatrix& x,
                              const ComplexMatrix& b, const PsdOperator& w) {
    const ComplexMatrix r = a * x * b - identity(w.dim());
    return hermitian_part(r.adjoint() * w.matrix() * r);
}

MinimizationReport minimize_quadratic(const ComplexMatrix& a, const ComplexMatrix& b,
                                      const PsdOperator& w, const Tolerance& tol,
                                      const MinimizationOptions& options) {
    const Index n = w.dim();
    require(a.rows() == n && b.cols() == n, "minimize_quadratic: A is n x k, B is m x n, W is n x n");
    const double na = spectral_norm(a);
    const ComplexMatrix aw = a.adjoint() * w.matrix();
    const auto hyp = compare(nullspace(b, tol), nullspace(aw, tol, na * w.norm()), tol);
    if (!hyp.equal) {
        throw HypothesisViolated("N(B) differs from N(A^*W) (residual " +
                                 std::to_string(hyp.residual) + ")");
    }

    const ComplexMatrix y0 = w_inverse(a, w, identity(n), tol).solution;
    const ComplexMatrix bp = pinv(b, tol);
    const double leak = (y0 * (identity(n) - bp * b)).norm();
    if (leak > tol.slack(y0.norm())) {
        throw HypothesisViolated("X B = Y0 has no solution (Y0 does not vanish on N(B))");
    }
    ComplexMatrix x0 = y0 * bp;
    const ComplexMatrix f0 = quadratic_value(a, x0, b, w);
    PsdOperator value(f0, tol, w.norm());

    const Subspace ra = range(a, tol);
    const ShortedResult shorted = shorted_operator(w, ra, tol);
    const double wscale = w.matrix().norm() + 1.0;

    Report rep;
    rep.title = "minimization";
    rep.add("hypothesis_NB_equals_NA*W", true, hyp.residual);
    const double gap = (f0 - shorted.shorted.matrix()).norm();
    const bool equals_shorted = gap <= tol.slack(wscale);
    rep.add("value_equals_shorted", equals_shorted, gap);

    const ComplexMatrix y = x0 * b;
    const double normal = (aw * (a * y - identity(n))).norm();
    const bool normal_ok = normal <= tol.slack(aw.norm() * (na * y.norm() + 1.0));

    // X0 B as a W-inverse: A X0 B x is a weighted least squares solution of A z = x
    Rng rng(options.seed);
    bool ls_ok = true;
    double ls_worst = 0.0;
    for (int i = 0; i < std::max(options.samples, 1); ++i) {
        const ComplexMatrix x = random_gaussian(n, 1, rng);
        const ComplexMatrix z = random_gaussian(a.cols(), 1, rng);
        const double best = weighted_schatten_norm(a * y * x - x, 2.0, w);
        const double other = weighted_schatten_norm(a * z - x, 2.0, w);
        ls_worst = std::max(ls_worst, best - other);
        if (best > other + tol.slack(other)) ls_ok = false;
    }
    rep.add("propmin.i_value_is_shorted", equals_shorted, gap);
    rep.add("propmin.ii_normal_equation", normal_ok, normal);
    rep.add("propmin.iii_X0B_w_inverse", ls_ok, std::max(0.0, ls_worst));
    rep.add("propmin.equivalent", equals_shorted == normal_ok && normal_ok == ls_ok);

    int loewner_ok = 0;
    int minus_ok = 0;
    double worst_loewner = 0.0;
    const double step = x0.norm() + 1.0;
    for (int i = 0; i < options.samples; ++i) {
        const ComplexMatrix g = random_gaussian(x0.rows(), x0.cols(), rng);
        const ComplexMatrix fx = quadratic_value(a, x0 + step * g / g.norm(), b, w);
        if (loewner_leq(f0, fx, tol)) ++loewner_ok;
        worst_loewner = std::max(worst_loewner, -loewner_margin(f0, fx));
        if (leq_minus(f0, fx, tol).holds) ++minus_ok;
    }
    const std::string of = " of " + std::to_string(options.samples);
    rep.add("loewner_lower_bound", loewner_ok == options.samples, std::max(0.0, worst_loewner),
            std::to_string(loewner_ok) + of);
    rep.add("minus_lower_bound", minus_ok == options.samples, 0.0, std::to_string(minus_ok) + of);
    rep.add("minima_coincide", loewner_ok == minus_ok);

    const auto rcmp = compare(value.range(), intersect(complement(ra), w.range(), tol), tol);
    const auto ncmp = compare(value.nullspace(), sum(w.nullspace(), ra, tol), tol);
    rep.add("lemashorted.range", rcmp.equal, rcmp.residual);
    rep.add("lemashorted.nullspace", ncmp.equal, ncmp.residual);

    std::vector<std::pair<double, double>> norms;
    const ComplexMatrix resid = a * y - identity(n);
    for (double p : options.exponents) norms.emplace_back(p, weighted_schatten_norm(resid, p, w));

    return MinimizationReport{std::move(x0), std::move(value), equals_shorted, minus_ok,
                              std::move(norms), std::move(rep)};
}

Report schatten_min_check(const ComplexMatrix& a, const ComplexMatrix& b, const PsdOperator& w,
                          double p, int perturbations, const Tolerance& tol, std::uint64_t seed) {
    MinimizationOptions opts;
    opts.samples = 0;
    opts.seed = seed;
    opts.exponents = {p};
    const MinimizationReport mr = minimize_quadratic(a, b, w, tol, opts);
    const Index n = w.dim();
    const ComplexMatrix& x0 = mr.minimizer;
    const double m = mr.schatten_values.front().second;
    const ShortedResult shorted = shorted_operator(w, range(a, tol), tol);
    const double target = schatten_norm(shorted.shorted.sqrt(), p);

    Report rep;
    rep.title = "schatten p=" + label(p);
    const std::string note = std::isinf(p) ? "p = inf is an extension (operator norm)" : "";
    rep.add("norm_equals_shorted_root", std::abs(m - target) <= tol.slack(target),
            std::abs(m - target), note);

    Rng rng(seed);
    double worst = -std::numeric_limits<double>::infinity();
    int violations = 0;
    for (int i = 0; i < perturbations; ++i) {
        const ComplexMatrix g = random_gaussian(x0.rows(), x0.cols(), rng);
        const double size = (x0.norm() + 1.0) * rng.uniform(1e-3, 1.0);
        const ComplexMatrix r = a * (x0 + size * g / g.norm()) * b - ComplexMatrix::Identity(n, n);
        const double mp = weighted_schatten_norm(r, p, w);
        worst = std::max(worst, m - mp);
        if (m > mp + tol.cmp_abs) ++violations;
    }
    rep.add("minimal_under_perturbation", violations == 0, perturbations ? std::max(0.0, worst) : 0.0,
            std::to_string(violations) + " of " + std::to_string(perturbations) + " perturbations beat X0");
    rep.add("minimum_value", true, m, "||A X0 B - I||_{p,W}");
    return rep;
}

Report simultaneous_ls(const ComplexMatrix& a, const ComplexMatrix& b, const ComplexMatrix& c,
                       const PsdOperator& w, double p, const Tolerance& tol, std::uint64_t seed) {
    require_weighted_star(a, b, w, tol);
    require(c.rows() == a.rows(), "C must have as many rows as A");
    const ComplexMatrix s = a + b;
    const ComplexMatrix& wm = w.matrix();
    const auto normal_residual = [&](const ComplexMatrix& op, const ComplexMatrix& x) {
        return (op.adjoint() * wm * (op * x - c)).norm();
    };
    const auto scale = [&](const ComplexMatrix& x) {
        return wm.norm() * s.norm() * (s.norm() * x.norm() + c.norm());
    };

    Report rep;
    rep.title = "simultaneous least squares";
    const double cross = (a.adjoint() * wm * b).norm();
    rep.add("A*WB_vanishes", cross <= tol.slack(wm.norm() * a.norm() * b.norm()), cross);

    const WInverseResult joint = w_inverse(s, w, c, tol);
    const ComplexMatrix& x0 = joint.solution;
    const double rj = normal_residual(s, x0);
    const double ra = normal_residual(a, x0);
    const double rb = normal_residual(b, x0);
    rep.add("joint_normal_equation", rj <= tol.slack(scale(x0)), rj);
    rep.add("joint_solves_A_system", ra <= tol.slack(scale(x0)), ra);
    rep.add("joint_solves_B_system", rb <= tol.slack(scale(x0)), rb);

    // another joint solution: add a map into N((A+B)^*W(A+B))
    Rng rng(seed);
    const Subspace free = nullspace(s.adjoint() * wm * s, tol, wm.norm() * std::pow(spectral_norm(s), 2));
    const ComplexMatrix x1 = x0 + free.projector() * random_gaussian(x0.rows(), x0.cols(), rng);
    const double r1 = std::max(normal_residual(a, x1), normal_residual(b, x1));
    rep.add("every_joint_solution_solves_both", r1 <= tol.slack(scale(x1)), r1,
            "free dimension " + std::to_string(free.dim()));

    // converse: solve the pair directly and feed it to the joint equation
    const Index k = a.cols();
    ComplexMatrix stacked(2 * k, k);
    stacked << a.adjoint() * wm * a, b.adjoint() * wm * b;
    ComplexMatrix rhs(2 * k, c.cols());
    rhs << a.adjoint() * wm * c, b.adjoint() * wm * c;
    const ComplexMatrix xp = pinv(stacked, tol) * rhs;
    const double pair = std::max(normal_residual(a, xp), normal_residual(b, xp));
    const double back = normal_residual(s, xp);
    rep.add("pair_solvable", pair <= tol.slack(scale(xp)), pair);
    rep.add("pair_solution_solves_joint", back <= tol.slack(scale(xp)), back);

    const std::string note = std::isinf(p) ? "p = inf is an extension (operator norm)" : "";
    for (const auto& [name, op] : {std::pair<const char*, const ComplexMatrix*>{"A+B", &s},
                                   {"A", &a}, {"B", &b}}) {
        const double best = weighted_schatten_norm(*op * x0 - c, p, w);
        int beaten = 0;
        for (int i = 0; i < 20; ++i) {
            const ComplexMatrix g = random_gaussian(x0.rows(), x0.cols(), rng);
            const ComplexMatrix xd = x0 + (x0.norm() + 1.0) * rng.uniform(1e-3, 1.0) * g / g.norm();
            if (weighted_schatten_norm(*op * xd - c, p, w) < best - tol.cmp_abs) ++beaten;
        }
        rep.add(std::string("norm_") + name + "_p" + label(p), beaten == 0, best, note);
    }
    return rep;
}

Report compression_additivity_check(const ComplexMatrix& a, const ComplexMatrix& b,
                                    const PsdOperator& w, const Tolerance& tol) {
    require_weighted_star(a, b, w, tol);
    const double ref = std::max(spectral_norm(a), spectral_norm(b));
    const auto compression = [&](const ComplexMatrix& op) {
        return shorted_operator(w, range(op, tol, ref), tol).compression.matrix();
    };
    const ComplexMatrix gap = compression(a + b) - compression(a) - compression(b);
    Report rep;
    rep.title = "compression additivity";
    rep.add("W_R(A+B)=W_R(A)+W_R(B)", gap.norm() <= tol.slack(w.matrix().norm()), gap.norm());
    return rep;
}

}  // namespace shortcalc
