#include "shortcalc/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "shortcalc/approx.hpp"
#include "shortcalc/compat.hpp"
#include "shortcalc/generators.hpp"
#include "shortcalc/orders.hpp"
#include "shortcalc/shorted.hpp"

namespace shortcalc {

namespace {

const std::vector<std::string> kSuites{"comp1", "teoshorted", "teoshorted2", "minus-rap",
                                       "prop1", "propmin",    "thm1",        "compression-additivity"};

const std::vector<std::string> kRelations{"minus",      "left-minus",  "star",       "left-star",
                                          "right-star", "wstar-left", "wstar-right", "wstar"};

double parse_positive(const std::string& text, const std::string& what) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(text, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != text.size() || !(v > 0.0) || !std::isfinite(v)) {
        throw UsageError(what + ": expected a positive number, got '" + text + "'");
    }
    return v;
}

std::string p_label(double p) {
    if (std::isinf(p)) return "inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", p);
    return buf;
}

Json p_json(double p) { return std::isinf(p) ? Json("inf") : Json(p); }

Json tolerance_json(const Tolerance& t) {
    return Json{{"rank_rel", t.rank_rel}, {"cmp_abs", t.cmp_abs}, {"cmp_rel", t.cmp_rel}};
}

Json checks_json(const Report& rep) {
    Json arr = Json::array();
    for (const Check& c : rep.checks) {
        Json j{{"name", c.name}, {"pass", c.pass}, {"residual", c.residual}};
        if (!c.note.empty()) j["note"] = c.note;
        arr.push_back(std::move(j));
    }
    return arr;
}

Json projection_json(const std::optional<Projection>& p) {
    if (!p) return nullptr;
    return Json{{"matrix", matrix_to_json(p->matrix())},
                {"range", subspace_to_json(p->range())},
                {"nullspace", subspace_to_json(p->nullspace())}};
}

/// Folds per-trial reports into one check per name.
class Aggregate {
  public:
    void add(const Report& rep, const std::string& prefix = {}) {
        for (const Check& c : rep.checks) add(prefix.empty() ? c.name : prefix + "." + c.name, c.pass, c.residual);
    }

    void add(const std::string& name, bool pass, double residual = 0.0) {
        auto it = index_.find(name);
        if (it == index_.end()) {
            it = index_.emplace(name, rows_.size()).first;
            rows_.push_back({name, 0, 0, 0.0});
        }
        Row& r = rows_[it->second];
        ++r.total;
        if (!pass) ++r.failed;
        if (std::isfinite(residual)) r.worst = std::max(r.worst, residual);
    }

    [[nodiscard]] Report report(const std::string& title) const {
        Report rep;
        rep.title = title;
        for (const Row& r : rows_) {
            rep.add(r.name, r.failed == 0, r.worst,
                    std::to_string(r.failed) + " of " + std::to_string(r.total) + " failed");
        }
        return rep;
    }

  private:
    struct Row {
        std::string name;
        int total;
        int failed;
        double worst;
    };
    std::vector<Row> rows_;
    std::map<std::string, std::size_t> index_;
};

PsdOperator random_weight(Index n, Rng& rng, Index min_rank = 0) {
    return PsdOperator(random_psd_matrix(n, rng.integer(min_rank, n), rng));
}

Report suite_comp1(int n, int trials, Rng& rng, const Tolerance& tol) {
    Aggregate agg;
    for (int t = 0; t < trials; ++t) {
        const PsdOperator w = random_weight(n, rng);
        const Subspace s = random_subspace(n, rng.integer(0, n), rng);
        agg.add(verify_comp1(w, s, tol));
    }
    return agg.report("comp1");
}

Report suite_teoshorted(int n, int trials, Rng& rng, const Tolerance& tol) {
    Aggregate agg;
    for (int t = 0; t < trials; ++t) {
        const PsdOperator w = random_weight(n, rng);
        const Index k = rng.integer(0, n);
        const Subspace s = random_subspace(n, k, rng);
        agg.add(verify_shorted_theorem(w, s, 10, tol, rng.next_seed()));
        const Subspace bigger = sum(s, random_subspace(n, 1, rng), tol);
        agg.add("monotone_in_S",
                loewner_leq(shorted_operator(w, bigger, tol).shorted.matrix(),
                            shorted_operator(w, s, tol).shorted.matrix(), tol));
    }
    return agg.report("teoshorted");
}

Report suite_teoshorted2(int n, int trials, Rng& rng, const Tolerance& tol) {
    Aggregate agg;
    const ComplexMatrix id = ComplexMatrix::Identity(n, n);
    for (int t = 0; t < trials; ++t) {
        const PsdOperator w = random_weight(n, rng);
        const Subspace s = random_subspace(n, rng.integer(0, n), rng);
        const ShortedResult r = shorted_operator(w, s, tol);
        const double scale = w.matrix().norm() + 1.0;
        const CompatibilityCertificate cert = is_compatible(w, s, tol);
        agg.add("compatible", cert.compatible, 0.0);
        if (!cert.canonical) continue;
        const ComplexMatrix& q = cert.canonical->matrix();
        agg.add("canonical_in_P(W,S)", projection_set_member(q, w, s, tol));
        const double g1 = (shorted_via_projection(w, s, tol) - r.shorted.matrix()).norm() / scale;
        agg.add("W(I-Q)_equals_shorted", g1 <= tol.slack(0.0), g1);
        const double g2 = ((id - q).adjoint() * w.matrix() * (id - q) - r.shorted.matrix()).norm() / scale;
        agg.add("(I-Q)*W(I-Q)_equals_shorted", g2 <= tol.slack(0.0), g2);
        const ComplexMatrix alt = perturbed_member(cert, s, rng.next_seed());
        agg.add("other_member_in_P(W,S)", projection_set_member(alt, w, s, tol));
        const double g3 = (w.matrix() * (id - alt) - r.shorted.matrix()).norm() / scale;
        agg.add("other_member_gives_shorted", g3 <= tol.slack(0.0), g3);
        const auto rc = compare(r.shorted_range, intersect(w.range(), complement(s), tol), tol);
        const auto nc = compare(r.shorted_nullspace, sum(w.nullspace(), s, tol), tol);
        agg.add("range_equals_RW_cap_Sperp", rc.equal, rc.residual);
        agg.add("nullspace_equals_NW_plus_S", nc.equal, nc.residual);
    }
    return agg.report("teoshorted2");
}

Report suite_minus_rap(int n, int trials, Rng& rng, const Tolerance& tol) {
    Aggregate agg;
    const auto one = [&](const ComplexMatrix& a, const ComplexMatrix& b, bool positive) {
        const OrderVerdict v = leq_minus(a, b, tol);
        if (positive) agg.add("constructed_positive_holds", v.holds);
        agg.add("rank_additivity_equals_witness_definition", v.holds == minus_by_witness(a, b, tol));
        agg.add("left_minus_equals_minus", v.holds == leq_left_minus(a, b, tol));
        if (v.holds) {
            const double scale = b.norm() + 1.0;
            const bool has = v.left_witness && v.right_witness;
            const double gl = has ? (a - v.left_witness->matrix() * b).norm() / scale : INFINITY;
            const double gr = has ? (a.adjoint() - v.right_witness->matrix() * b.adjoint()).norm() / scale : INFINITY;
            agg.add("witness_A=PB", has && gl <= tol.slack(0.0), gl);
            agg.add("witness_A*=QB*", has && gr <= tol.slack(0.0), gr);
        }
    };
    for (int t = 0; t < trials; ++t) {
        const Index r1 = rng.integer(0, n);
        const Chain ch = minus_chain(n, r1, rng.integer(0, n - r1), 0, rng);
        one(ch.a, ch.b, true);
        const Index k = rng.integer(0, n);
        const ComplexMatrix a = random_rank_matrix(n, n, k, rng);
        const ComplexMatrix b = rng.integer(0, 1) ? random_rank_matrix(n, n, rng.integer(0, n), rng)
                                                  : ComplexMatrix(a + random_rank_matrix(n, n, rng.integer(0, n), rng));
        one(a, b, false);
    }
    return agg.report("minus-rap");
}

Report suite_prop1(int n, int trials, Rng& rng, const Tolerance& tol) {
    Aggregate agg;
    const PsdOperator id = PsdOperator::identity(n);
    std::vector<Chain> minus_chains;
    std::vector<Chain> star_chains;
    std::vector<Chain> wstar_chains;
    const PsdOperator chain_weight = random_weight(n, rng, n - 1);
    for (int t = 0; t < trials; ++t) {
        const PsdOperator w = random_weight(n, rng);
        ComplexMatrix a;
        ComplexMatrix b;
        if (t % 2 == 0) {
            const WeightedPair p = weighted_star_pair(n, w, rng);
            a = p.a;
            b = p.a + p.d;
            agg.add("constructed_positive_holds", leq_weighted_star(WeightedVariant::left, a, b, w, tol).holds);
        } else {
            a = random_rank_matrix(n, n, rng.integer(0, n), rng);
            b = a + random_rank_matrix(n, n, rng.integer(0, n), rng);
        }
        for (auto [variant, name] : {std::pair{WeightedVariant::left, "left"},
                                     std::pair{WeightedVariant::right, "right"},
                                     std::pair{WeightedVariant::both, "both"}}) {
            const OrderVerdict v = leq_weighted_star(variant, a, b, w, tol);
            agg.add(std::string("definition_equals_algebraic.") + name,
                    v.holds == weighted_star_by_definition(variant, a, b, w, tol));
            if (v.cross_check) agg.add(std::string("lemma_cross_check.") + name, *v.cross_check == v.holds);
        }
        const OrderVerdict star = leq_star(StarVariant::star, a, b, tol);
        agg.add("identity_weight_equals_star",
                star.holds == leq_weighted_star(WeightedVariant::both, a, b, id, tol).holds);
        agg.add("star_is_left_and_right_star", star.cross_check && *star.cross_check == star.holds);
        if (star.holds) agg.add("star_implies_minus", leq_minus(a, b, tol).holds);

        const Index r1 = rng.integer(0, n / 3);
        const Index r2 = rng.integer(0, n / 3);
        const Index r3 = rng.integer(0, n - r1 - r2);
        minus_chains.push_back(minus_chain(n, r1, r2, r3, rng));
        star_chains.push_back(weighted_star_chain(n, id, r1, r2, r3, true, rng));
        wstar_chains.push_back(weighted_star_chain(n, chain_weight, r1, r2, r3, true, rng));
    }
    agg.add(order_axioms_harness(
                [&](const ComplexMatrix& x, const ComplexMatrix& y) { return leq_minus(x, y, tol).holds; },
                minus_chains, tol),
            "axioms.minus");
    agg.add(order_axioms_harness(
                [&](const ComplexMatrix& x, const ComplexMatrix& y) {
                    return leq_star(StarVariant::star, x, y, tol).holds;
                },
                star_chains, tol),
            "axioms.star");
    agg.add(order_axioms_harness(
                [&](const ComplexMatrix& x, const ComplexMatrix& y) {
                    return leq_weighted_star(WeightedVariant::both, x, y, chain_weight, tol).holds;
                },
                wstar_chains, tol),
            "axioms.wstar");
    return agg.report("prop1");
}

Report suite_propmin(int n, int trials, Rng& rng, const Tolerance& tol, std::optional<double> p) {
    Aggregate agg;
    const std::vector<double> exponents = p ? std::vector<double>{*p} : std::vector<double>{1.0, 2.0, 3.0};
    for (int t = 0; t < trials; ++t) {
        const MinimizationInstance inst = minimization_instance(n, rng, t % 4 == 0);
        const PsdOperator w(inst.w, tol);
        MinimizationOptions opts;
        opts.samples = 10;
        opts.seed = rng.next_seed();
        opts.exponents = exponents;
        agg.add(minimize_quadratic(inst.a, inst.b, w, tol, opts).checks);
        for (double e : exponents) {
            agg.add(schatten_min_check(inst.a, inst.b, w, e, 10, tol, rng.next_seed()), "p" + p_label(e));
        }
    }
    return agg.report("propmin");
}

Report suite_thm1(int n, int trials, Rng& rng, const Tolerance& tol, std::optional<double> p) {
    Aggregate agg;
    for (int t = 0; t < trials; ++t) {
        const PsdOperator w = random_weight(n, rng, 1);
        const WeightedPair pair = weighted_star_pair(n, w, rng);
        const ComplexMatrix c = random_gaussian(n, rng.integer(1, n), rng);
        agg.add(simultaneous_ls(pair.a, pair.d, c, w, p.value_or(2.0), tol, rng.next_seed()));
    }
    return agg.report("thm1");
}

Report suite_compression(int n, int trials, Rng& rng, const Tolerance& tol) {
    Aggregate agg;
    for (int t = 0; t < trials; ++t) {
        const PsdOperator w = random_weight(n, rng, 1);
        const WeightedPair pair = weighted_star_pair(n, w, rng);
        agg.add(compression_additivity_check(pair.a, pair.d, w, tol));
    }
    return agg.report("compression-additivity");
}

struct Inputs {
    const ProblemFile& problem;
    Json entries = Json::object();

    const ComplexMatrix& matrix(const std::string& id) {
        const ComplexMatrix& m = problem.matrix(id);
        note(id);
        return m;
    }
    Subspace subspace(const std::string& id, const Tolerance& tol) {
        Subspace s = problem.subspace(id, tol);
        note(id);
        return s;
    }
    void note(const std::string& id) {
        const ComplexMatrix& m = problem.raw(id);
        entries[id] = Json{{"rows", m.rows()}, {"cols", m.cols()}, {"sha256", sha256_hex(emit_json(matrix_to_json(m)))}};
    }
};

void require_square(const ComplexMatrix& m, const std::string& id) {
    if (m.rows() != m.cols()) throw DimensionMismatch("'" + id + "' must be square");
}

void require_ambient(const Subspace& s, const PsdOperator& w, const std::string& sid) {
    if (s.ambient_dim() != w.dim()) {
        throw DimensionMismatch("subspace '" + sid + "' lives in C^" + std::to_string(s.ambient_dim()) +
                                " but the weight is " + std::to_string(w.dim()) + " x " + std::to_string(w.dim()));
    }
}

Json shorted_json(const ShortedResult& r) {
    return Json{{"shorted", matrix_to_json(r.shorted.matrix())},
                {"compression", matrix_to_json(r.compression.matrix())},
                {"shorted_range", subspace_to_json(r.shorted_range)},
                {"shorted_nullspace", subspace_to_json(r.shorted_nullspace)},
                {"compression_nullspace", subspace_to_json(r.compression_nullspace)}};
}

void cmd_short(const CommandOptions& o, Inputs& in, const Tolerance& tol, std::uint64_t seed, Json& result,
               Report& rep) {
    require_square(in.matrix(o.w), o.w);
    const PsdOperator w(in.matrix(o.w), tol);
    const Subspace s = in.subspace(o.s, tol);
    require_ambient(s, w, o.s);
    result = shorted_json(shorted_operator(w, s, tol));
    rep = verify_shorted_theorem(w, s, o.trials, tol, seed);
}

void cmd_compat(const CommandOptions& o, Inputs& in, const Tolerance& tol, Json& result, Report& rep) {
    require_square(in.matrix(o.w), o.w);
    const PsdOperator w(in.matrix(o.w), tol);
    const Subspace s = in.subspace(o.s, tol);
    require_ambient(s, w, o.s);
    const CompatibilityCertificate cert = is_compatible(w, s, tol);
    result = Json{{"compatible", cert.compatible},
                  {"companion", subspace_to_json(cert.companion)},
                  {"canonical", projection_json(cert.canonical)},
                  {"defect", subspace_to_json(cert.defect)},
                  {"direct_decomposition", cert.direct_decomposition},
                  {"margin", cert.margin}};
    rep = verify_comp1(w, s, tol);
}

void cmd_order(const CommandOptions& o, Inputs& in, const Tolerance& tol, Json& result, Report& rep) {
    if (!o.rel) throw UsageError("order needs --rel");
    const std::string& rel = *o.rel;
    if (std::find(kRelations.begin(), kRelations.end(), rel) == kRelations.end()) {
        throw UsageError("unknown relation '" + rel + "'");
    }
    const ComplexMatrix& a = in.matrix(o.a);
    const ComplexMatrix& b = in.matrix(o.b);
    OrderVerdict v;
    if (rel == "minus") {
        v = leq_minus(a, b, tol);
        rep.add("rank_additivity_equals_witness_definition", v.holds == minus_by_witness(a, b, tol));
    } else if (rel == "left-minus") {
        v.holds = leq_left_minus(a, b, tol);
        if (!v.holds) v.failure_reason = FailureReason::range_sum_not_direct;
        rep.add("left_minus_equals_minus", v.holds == leq_minus(a, b, tol).holds);
    } else if (rel == "star" || rel == "left-star" || rel == "right-star") {
        const StarVariant sv = rel == "star" ? StarVariant::star
                               : rel == "left-star" ? StarVariant::left_star
                                                    : StarVariant::right_star;
        v = leq_star(sv, a, b, tol);
    } else {
        require_square(in.matrix(o.w), o.w);
        const PsdOperator w(in.matrix(o.w), tol);
        const WeightedVariant wv = rel == "wstar-left"    ? WeightedVariant::left
                                   : rel == "wstar-right" ? WeightedVariant::right
                                                          : WeightedVariant::both;
        v = leq_weighted_star(wv, a, b, w, tol);
        rep.add("definition_equals_algebraic", v.holds == weighted_star_by_definition(wv, a, b, w, tol));
    }
    if (v.cross_check) rep.add("cross_check_agrees", *v.cross_check == v.holds);
    const double scale = b.norm() + 1.0;
    if (v.left_witness) {
        const double g = (a - v.left_witness->matrix() * b).norm() / scale;
        rep.add("left_witness_A=PB", g <= tol.slack(0.0), g);
    }
    if (v.right_witness) {
        const double g = (a.adjoint() - v.right_witness->matrix() * b.adjoint()).norm() / scale;
        rep.add("right_witness_A*=QB*", g <= tol.slack(0.0), g);
    }
    result = Json{{"relation", rel},
                  {"holds", v.holds},
                  {"failure_reason", std::string(to_string(v.failure_reason))},
                  {"left_witness", projection_json(v.left_witness)},
                  {"right_witness", projection_json(v.right_witness)},
                  {"cross_check", v.cross_check ? Json(*v.cross_check) : Json(nullptr)}};
}

void cmd_winverse(const CommandOptions& o, Inputs& in, const Tolerance& tol, Json& result, Report& rep) {
    require_square(in.matrix(o.w), o.w);
    const PsdOperator w(in.matrix(o.w), tol);
    const ComplexMatrix& a = in.matrix(o.a);
    const bool has_b = in.problem.has(o.b);
    const ComplexMatrix b = has_b ? in.matrix(o.b) : ComplexMatrix::Identity(a.rows(), a.rows());
    const WInverseResult r = w_inverse(a, w, b, tol);
    rep.add("normal_equation", r.is_minimum, r.normal_residual);
    rep.add("rank(A*WA)=rank(A*W)", r.consistent);
    if (!has_b) {
        const ComplexMatrix sh = shorted_operator(w, range(a, tol), tol).shorted.matrix();
        const double g = (r.achieved.matrix() - sh).norm();
        rep.add("achieved_equals_shorted", g <= tol.slack(w.matrix().norm() + 1.0), g);
    }
    result = Json{{"solution", matrix_to_json(r.solution)},
                  {"normal_residual", r.normal_residual},
                  {"achieved", matrix_to_json(r.achieved.matrix())},
                  {"is_minimum", r.is_minimum},
                  {"consistent", r.consistent},
                  {"free_dimension", r.free_dimension},
                  {"B", has_b ? Json(o.b) : Json("identity")}};
}

void cmd_minimize(const CommandOptions& o, Inputs& in, const Tolerance& tol, std::uint64_t seed, Json& result,
                  Report& rep) {
    require_square(in.matrix(o.w), o.w);
    const PsdOperator w(in.matrix(o.w), tol);
    const ComplexMatrix& a = in.matrix(o.a);
    const ComplexMatrix& b = in.matrix(o.b);
    MinimizationOptions opts;
    opts.samples = o.trials;
    opts.seed = seed;
    if (o.p) opts.exponents = {*o.p};
    const MinimizationReport mr = minimize_quadratic(a, b, w, tol, opts);
    rep = mr.checks;
    for (double p : opts.exponents) rep.merge(schatten_min_check(a, b, w, p, o.trials, tol, seed), "p" + p_label(p));
    Json norms = Json::array();
    for (const auto& [p, v] : mr.schatten_values) norms.push_back(Json{{"p", p_json(p)}, {"value", v}});
    result = Json{{"minimizer", matrix_to_json(mr.minimizer)},
                  {"value", matrix_to_json(mr.value.matrix())},
                  {"equals_shorted", mr.equals_shorted},
                  {"minus_lower_bound_checked", mr.minus_lower_bound_checked},
                  {"schatten_values", norms}};
}

void cmd_verify(const CommandOptions& o, const Tolerance& tol, std::uint64_t seed, Json& result, Report& rep) {
    if (o.n < 1 || o.n > 64) throw UsageError("--n must be between 1 and 64");
    if (o.trials < 1) throw UsageError("--trials must be positive");
    std::vector<std::string> suites;
    if (o.suite == "all") {
        suites = kSuites;
    } else if (std::find(kSuites.begin(), kSuites.end(), o.suite) != kSuites.end()) {
        suites = {o.suite};
    } else {
        throw UsageError("unknown suite '" + o.suite + "'");
    }
    Json per_suite = Json::object();
    for (const std::string& name : suites) {
        const Report r = run_suite(name, o.n, o.trials, seed, tol, o.p);
        per_suite[name] = r.passed() ? "pass" : "fail";
        rep.merge(r, name);
    }
    result = Json{{"suites", per_suite}};
}

}  // namespace

const std::vector<std::string>& suite_names() { return kSuites; }

Report run_suite(const std::string& suite, int n, int trials, std::uint64_t seed, const Tolerance& tol,
                 std::optional<double> p) {
    // each suite gets its own stream so single-suite runs match the `all` run
    const auto pos = std::find(kSuites.begin(), kSuites.end(), suite);
    if (pos == kSuites.end()) throw UsageError("unknown suite '" + suite + "'");
    Rng rng(seed * 1000003ULL + static_cast<std::uint64_t>(pos - kSuites.begin()));
    const Index dim = n;
    if (suite == "comp1") return suite_comp1(dim, trials, rng, tol);
    if (suite == "teoshorted") return suite_teoshorted(dim, trials, rng, tol);
    if (suite == "teoshorted2") return suite_teoshorted2(dim, trials, rng, tol);
    if (suite == "minus-rap") return suite_minus_rap(dim, trials, rng, tol);
    if (suite == "prop1") return suite_prop1(dim, trials, rng, tol);
    if (suite == "propmin") return suite_propmin(dim, trials, rng, tol, p);
    if (suite == "thm1") return suite_thm1(dim, trials, rng, tol, p);
    return suite_compression(dim, trials, rng, tol);
}

Tolerance resolve_tolerance(const CommandOptions& opts, const ProblemFile& problem) {
    Tolerance tol;
    if (const char* env = std::getenv("SHORTCALC_TOL"); env && *env) {
        tol = Tolerance::from_scalar(parse_positive(env, "SHORTCALC_TOL"));
    }
    if (problem.tolerance) tol = *problem.tolerance;
    if (opts.tol) {
        if (!(*opts.tol > 0.0) || !std::isfinite(*opts.tol)) throw UsageError("--tol must be a positive number");
        tol = Tolerance::from_scalar(*opts.tol);
    }
    return tol;
}

CommandResult execute(const CommandOptions& opts, const ProblemFile& problem) {
    const Tolerance tol = resolve_tolerance(opts, problem);
    const std::uint64_t seed = opts.seed.value_or(problem.seed.value_or(0));
    if (opts.trials < 0) throw UsageError("--trials must be nonnegative");
    if (opts.p && !(*opts.p >= 1.0)) throw UsageError("--p must be at least 1");

    Inputs in{problem};
    Json result = Json::object();
    Report rep;
    std::string error;
    try {
        if (opts.command == "short") {
            cmd_short(opts, in, tol, seed, result, rep);
        } else if (opts.command == "compat") {
            cmd_compat(opts, in, tol, result, rep);
        } else if (opts.command == "order") {
            cmd_order(opts, in, tol, result, rep);
        } else if (opts.command == "winverse") {
            cmd_winverse(opts, in, tol, result, rep);
        } else if (opts.command == "minimize") {
            cmd_minimize(opts, in, tol, seed, result, rep);
        } else if (opts.command == "verify") {
            cmd_verify(opts, tol, seed, result, rep);
        } else {
            throw UsageError("unknown command '" + opts.command + "'");
        }
    } catch (const HypothesisViolated& e) {
        error = std::string("hypothesis violated: ") + e.what();
    } catch (const Infeasible& e) {
        error = std::string("infeasible: ") + e.what();
    } catch (const NotCompatible& e) {
        error = std::string("not compatible: ") + e.what();
    } catch (const NotComplementary& e) {
        error = std::string("not complementary: ") + e.what();
    }

    const bool pass = error.empty() && rep.passed();
    CommandResult out;
    out.exit_code = pass ? ExitCode::ok : ExitCode::assertion_failed;

    Json params = Json::object();
    if (opts.command == "verify") {
        params["suite"] = opts.suite;
        params["n"] = opts.n;
        params["trials"] = opts.trials;
    } else if (opts.command == "short" || opts.command == "minimize") {
        params["trials"] = opts.trials;
    }
    if (opts.rel) params["rel"] = *opts.rel;
    if (opts.p) params["p"] = p_json(*opts.p);

    Json inputs = Json::object();
    inputs["sha256"] = problem.matrices.empty() && problem.subspaces.empty()
                           ? Json(nullptr)
                           : Json(sha256_hex(serialize_problem(problem)));
    inputs["entries"] = in.entries;

    out.report = Json::object();
    out.report["tool"] = "shortcalc";
    out.report["command"] = opts.command;
    out.report["status"] = pass ? "pass" : "fail";
    out.report["tolerance"] = tolerance_json(tol);
    out.report["seed"] = seed;
    out.report["parameters"] = params;
    out.report["inputs"] = inputs;
    if (!error.empty()) out.report["error"] = error;
    out.report["result"] = result;
    out.report["checks"] = checks_json(rep);

    std::ostringstream text;
    int failed = 0;
    for (const Check& c : rep.checks) {
        if (!c.pass) ++failed;
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.3e", c.residual);
        text << (c.pass ? "  ok    " : "  FAIL  ") << c.name << "  residual " << buf;
        if (!c.note.empty()) text << "  (" << c.note << ")";
        text << "\n";
    }
    if (!error.empty()) text << "  error: " << error << "\n";
    if (opts.command == "order" && result.contains("holds")) {
        text << "  verdict: " << (result["holds"].get<bool>() ? "holds" : "does not hold");
        if (!result["holds"].get<bool>()) text << " (" << result["failure_reason"].get<std::string>() << ")";
        text << "\n";
    }
    text << opts.command << ": " << (pass ? "PASS" : "FAIL") << " (" << rep.checks.size() - failed << "/"
         << rep.checks.size() << " checks)\n";
    out.summary = text.str();
    return out;
}

int run(const CommandOptions& opts, std::ostream& out, std::ostream& err) {
    try {
        ProblemFile problem;
        if (opts.problem_path) problem = parse_problem(*opts.problem_path);
        for (const auto& [id, path] : opts.csv) {
            if (problem.has(id)) throw UsageError("identifier '" + id + "' given twice");
            problem.matrices[id] = parse_csv(path);
        }
        if (opts.command != "verify" && problem.matrices.empty() && problem.subspaces.empty()) {
            throw UsageError(opts.command + " needs a problem file or --csv input");
        }
        const CommandResult res = execute(opts, problem);
        if (opts.json_path) {
            std::ofstream f(*opts.json_path, std::ios::binary);
            if (!f) throw UsageError("cannot write " + *opts.json_path);
            f << emit_json(res.report) << "\n";
        }
        out << res.summary;
        return static_cast<int>(res.exit_code);
    } catch (const ParseError& e) {
        err << "parse error: " << e.what() << "\n";
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\n";
    } catch (const DimensionMismatch& e) {
        err << "dimension error: " << e.what() << "\n";
    } catch (const NotPsd& e) {
        err << "input error: " << e.what() << "\n";
    } catch (const NotHermitian& e) {
        err << "input error: " << e.what() << "\n";
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return static_cast<int>(ExitCode::assertion_failed);
    }
    return static_cast<int>(ExitCode::input_error);
}

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Shorted operators, compatibility, matrix partial orders and weighted least squares"};
    app.require_subcommand(1);
    CommandOptions opts;
    std::vector<std::string> csv;
    std::string p_text;
    std::string seed_text;

    const auto common = [&](CLI::App* sub) {
        sub->add_option("problem", opts.problem_path, "JSON problem file");
        sub->add_option("--csv", csv, "ID=PATH: load a real matrix from CSV under ID (repeatable)");
        sub->add_option("--W", opts.w, "identifier of the weight")->capture_default_str();
        sub->add_option("--S", opts.s, "identifier of the subspace")->capture_default_str();
        sub->add_option("--A", opts.a, "identifier of A")->capture_default_str();
        sub->add_option("--B", opts.b, "identifier of B")->capture_default_str();
        sub->add_option("--C", opts.c, "identifier of C")->capture_default_str();
        sub->add_option("--rel", opts.rel, "relation")->check(CLI::IsMember(kRelations));
        sub->add_option("--p", p_text, "Schatten exponent (>= 1 or inf)");
        sub->add_option("--tol", opts.tol, "comparison tolerance (scales all tolerance fields)");
        sub->add_option("--seed", seed_text, "random seed");
        sub->add_option("--trials", opts.trials, "samples per check or instances per suite")->capture_default_str();
        sub->add_option("--n", opts.n, "dimension for verify")->capture_default_str();
        sub->add_option("--json", opts.json_path, "write the JSON report here");
        sub->add_option("--suite", opts.suite, "verify suite")->capture_default_str();
    };
    const std::vector<std::pair<const char*, const char*>> commands{
        {"short", "shorted operator W_{/S} and compression W_S"},
        {"compat", "compatibility certificate for (W, S)"},
        {"order", "decide a partial order between A and B"},
        {"winverse", "W-inverse of A (B defaults to the identity)"},
        {"minimize", "minimize (AXB - I)^* W (AXB - I)"},
        {"verify", "run property suites on random instances"}};
    for (const auto& [name, help] : commands) {
        CLI::App* sub = app.add_subcommand(name, help);
        common(sub);
        sub->callback([&opts, name = std::string(name)] { opts.command = name; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << "\n";
        return static_cast<int>(ExitCode::input_error);
    }

    try {
        if (!p_text.empty()) {
            opts.p = (p_text == "inf" || p_text == "infinity") ? HUGE_VAL : parse_positive(p_text, "--p");
        }
        if (!seed_text.empty()) {
            std::size_t used = 0;
            unsigned long long v = 0;
            try {
                v = std::stoull(seed_text, &used);
            } catch (const std::exception&) {
                used = 0;
            }
            if (used == 0 || used != seed_text.size() || seed_text[0] == '-') {
                throw UsageError("--seed: expected a nonnegative integer, got '" + seed_text + "'");
            }
            opts.seed = v;
        }
        for (const std::string& item : csv) {
            const auto eq = item.find('=');
            if (eq == std::string::npos || eq == 0 || eq + 1 == item.size()) {
                throw UsageError("--csv expects ID=PATH, got '" + item + "'");
            }
            opts.csv.emplace_back(item.substr(0, eq), item.substr(eq + 1));
        }
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\n";
        return static_cast<int>(ExitCode::input_error);
    }
    return run(opts, out, err);
}

}  // namespace shortcalc
