// Acceptance run: one line per criterion, exit status 1 if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "shortcalc/approx.hpp"
#include "shortcalc/commands.hpp"
#include "shortcalc/compat.hpp"
#include "shortcalc/generators.hpp"
#include "shortcalc/io.hpp"
#include "shortcalc/orders.hpp"
#include "shortcalc/shorted.hpp"

using namespace shortcalc;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
    bool pass;
    std::string detail;
};

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

ComplexMatrix real2(double a, double b, double c, double d) {
    ComplexMatrix m(2, 2);
    m << a, b, c, d;
    return m;
}

PsdOperator mixed_weight(Index n, Rng& rng) { return PsdOperator(random_psd_matrix(n, rng.integer(0, n), rng)); }

const Check& check(const Report& rep, const std::string& name) {
    static const Check missing{"missing", false, INFINITY, ""};
    const Check* c = rep.find(name);
    return c ? *c : missing;
}

Outcome oracle_agreement() {
    Rng rng(101);
    double worst = 0.0;
    const auto t0 = Clock::now();
    for (int t = 0; t < 500; ++t) {
        const Index n = rng.integer(1, 8);
        const PsdOperator w = mixed_weight(n, rng);
        const Subspace s = random_subspace(n, rng.integer(0, n), rng);
        const ComplexMatrix pek = shorted_operator(w, s).shorted.matrix();
        worst = std::max(worst, (pek - shorted_schur_oracle(w, s)).norm() / (w.matrix().norm() + 1.0));
    }
    const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    return {worst <= 1e-9 && secs <= 10.0,
            "max relative error " + fmt("%.2e", worst) + " over 500 instances, " + fmt("%.2f", secs) + " s"};
}

Outcome running_example() {
    const PsdOperator w(real2(2, 1, 1, 1));
    Subspace s = Subspace::coordinate(2, {0});
    const ShortedResult r = shorted_operator(w, s);
    const CompatibilityCertificate cert = is_compatible(w, s);
    ComplexMatrix v(2, 1);
    v << -1.0 / std::sqrt(5.0), 2.0 / std::sqrt(5.0);
    const ComplexMatrix& c = cert.companion.basis();
    double e = 0.0;
    e = std::max(e, (r.shorted.matrix() - real2(0, 0, 0, 0.5)).cwiseAbs().maxCoeff());
    e = std::max(e, (r.compression.matrix() - real2(2, 1, 1, 0.5)).cwiseAbs().maxCoeff());
    e = cert.canonical ? std::max(e, (cert.canonical->matrix() - real2(1, 0.5, 0, 0)).cwiseAbs().maxCoeff()) : INFINITY;
    if (c.cols() != 1) {
        e = INFINITY;
    } else {
        // unit vectors agree up to a phase
        const Complex phase = (v.adjoint() * c)(0, 0);
        e = std::max(e, (c - v * phase).cwiseAbs().maxCoeff());
        e = std::max(e, std::abs(std::abs(phase) - 1.0));
    }
    return {e <= 1e-12, "max entry error " + fmt("%.2e", e)};
}

Outcome maximality() {
    Rng rng(303);
    int violations = 0;
    int members = 0;
    for (int t = 0; t < 100; ++t) {
        const Index n = rng.integer(1, 8);
        const PsdOperator w = mixed_weight(n, rng);
        const Subspace s = random_subspace(n, rng.integer(0, n), rng);
        const ComplexMatrix sh = shorted_operator(w, s).shorted.matrix();
        for (int k = 0; k < 10; ++k, ++members) {
            if (!loewner_leq(sample_dominated(w, s, rng.next_seed()), sh)) ++violations;
        }
    }
    return {violations == 0, std::to_string(violations) + " violations over " + std::to_string(members) + " members"};
}

Outcome projection_infimum() {
    Rng rng(404);
    int violations = 0;
    double worst_eq = 0.0;
    int sampled = 0;
    for (int t = 0; t < 20; ++t) {
        const Index n = rng.integer(2, 8);
        const PsdOperator w = mixed_weight(n, rng);
        const Subspace s = random_subspace(n, rng.integer(1, n - 1), rng);
        const ComplexMatrix sh = shorted_operator(w, s).shorted.matrix();
        for (int k = 0; k < 10; ++k, ++sampled) {
            const ComplexMatrix e = sample_projection_with_nullspace(s, rng.next_seed());
            if (!loewner_leq(sh, e.adjoint() * w.matrix() * e)) ++violations;
        }
        const auto cert = is_compatible(w, s);
        if (!cert.canonical) {
            worst_eq = INFINITY;
            continue;
        }
        const ComplexMatrix e = ComplexMatrix::Identity(n, n) - cert.canonical->matrix();
        worst_eq = std::max(worst_eq, (e.adjoint() * w.matrix() * e - sh).norm());
    }
    return {violations == 0 && worst_eq <= 1e-9, std::to_string(violations) + " violations over " +
                                                     std::to_string(sampled) + " projections; equality gap " +
                                                     fmt("%.2e", worst_eq)};
}

Outcome compatibility_equivalences() {
    Rng rng(505);
    int disagreements = 0;
    double worst = 0.0;
    for (int t = 0; t < 300; ++t) {
        const Index n = rng.integer(1, 8);
        const PsdOperator w = mixed_weight(n, rng);
        const Subspace s = random_subspace(n, rng.integer(0, n), rng);
        const Report rep = verify_comp1(w, s);
        const bool agree = check(rep, "comp1.equivalent").pass && check(rep, "comp1.i_projection_exists").pass;
        if (!agree) ++disagreements;
        for (const char* name : {"teoshorted2.range", "teoshorted2.nullspace"}) {
            const Check& c = check(rep, name);
            worst = std::max(worst, c.pass ? c.residual : INFINITY);
        }
    }
    return {disagreements == 0 && worst <= 1e-8, std::to_string(disagreements) +
                                                     " disagreements over 300 instances; worst subspace residual " +
                                                     fmt("%.2e", worst)};
}

Outcome minus_equivalence() {
    Rng rng(606);
    int mismatches = 0;
    int positives_failed = 0;
    double worst = 0.0;
    const auto one = [&](const ComplexMatrix& a, const ComplexMatrix& b) {
        const OrderVerdict v = leq_minus(a, b);
        if (v.holds != minus_by_witness(a, b)) ++mismatches;
        if (v.holds) {
            const double scale = b.norm() + 1.0;
            worst = std::max(worst, (a - v.left_witness->matrix() * b).norm() / scale);
            worst = std::max(worst, (a.adjoint() - v.right_witness->matrix() * b.adjoint()).norm() / scale);
        }
        return v.holds;
    };
    for (int t = 0; t < 500; ++t) {
        const Index n = rng.integer(1, 8);
        const Index r1 = rng.integer(0, n);
        const Chain ch = minus_chain(n, r1, rng.integer(0, n - r1), 0, rng);
        if (!one(ch.a, ch.b)) ++positives_failed;
    }
    for (int t = 0; t < 500; ++t) {
        const Index n = rng.integer(1, 8);
        one(random_rank_matrix(n, n, rng.integer(0, n), rng), random_rank_matrix(n, n, rng.integer(0, n), rng));
    }
    return {mismatches == 0 && positives_failed == 0 && worst <= 1e-9,
            std::to_string(mismatches) + " mismatches, " + std::to_string(positives_failed) +
                " failed positives; worst witness residual " + fmt("%.2e", worst)};
}

Outcome shorted_minus_below_weight() {
    Rng rng(707);
    int disagreements = 0;
    for (int t = 0; t < 300; ++t) {
        const Index n = rng.integer(1, 8);
        const PsdOperator w = mixed_weight(n, rng);
        const Subspace s = random_subspace(n, rng.integer(0, n), rng);
        const ComplexMatrix sh = shorted_operator(w, s).shorted.matrix();
        const bool minus = leq_minus(sh, w.matrix()).holds;
        const bool inclusion = contains(w.range(), range(sh, {}, w.norm()));
        if (minus != inclusion || !minus) ++disagreements;
    }
    return {disagreements == 0, std::to_string(disagreements) + " disagreements over 300 instances"};
}

Outcome minimization() {
    Rng rng(808);
    double worst = 0.0;
    int short_counts = 0;
    int coincide_fail = 0;
    for (int t = 0; t < 200; ++t) {
        const Index n = rng.integer(2, 8);
        const MinimizationInstance inst = minimization_instance(n, rng, t % 4 == 0);
        MinimizationOptions opts;
        opts.samples = 100;
        opts.seed = rng.next_seed();
        opts.exponents = {2.0};
        const MinimizationReport r = minimize_quadratic(inst.a, inst.b, PsdOperator(inst.w), {}, opts);
        worst = std::max(worst, check(r.checks, "value_equals_shorted").residual);
        if (r.minus_lower_bound_checked != 100) ++short_counts;
        if (!check(r.checks, "minima_coincide").pass || !check(r.checks, "loewner_lower_bound").pass) ++coincide_fail;
    }
    return {worst <= 1e-8 && short_counts == 0 && coincide_fail == 0,
            "worst |F(X0) - shorted| " + fmt("%.2e", worst) + "; " + std::to_string(short_counts) +
                " instances with an undominated sample; " + std::to_string(coincide_fail) + " Loewner/minus mismatches"};
}

Outcome schatten_minimality() {
    Rng rng(909);
    double worst_gap = 0.0;
    double worst_target = 0.0;
    for (int t = 0; t < 20; ++t) {
        const Index n = rng.integer(2, 8);
        const MinimizationInstance inst = minimization_instance(n, rng, t % 4 == 0);
        const PsdOperator w(inst.w);
        for (double p : {1.0, 2.0, 3.0}) {
            const Report r = schatten_min_check(inst.a, inst.b, w, p, 200, {}, rng.next_seed());
            worst_gap = std::max(worst_gap, check(r, "minimal_under_perturbation").residual);
            worst_target = std::max(worst_target, check(r, "norm_equals_shorted_root").residual);
        }
    }
    const PsdOperator w(real2(2, 1, 1, 1));
    ComplexMatrix b = Subspace::span((ComplexMatrix(2, 1) << 2, 1).finished()).projector();
    const Report run = schatten_min_check(real2(1, 0, 0, 0), b, w, 2.0, 200);
    const double ex = std::abs(check(run, "minimum_value").residual - std::sqrt(0.5));
    return {worst_gap <= 1e-10 && worst_target <= 1e-8 && ex <= 1e-12,
            "worst excess over perturbations " + fmt("%.2e", worst_gap) + "; worst norm gap " +
                fmt("%.2e", worst_target) + "; running example off by " + fmt("%.2e", ex)};
}

Outcome simultaneous() {
    Rng rng(1010);
    double worst = 0.0;
    for (int t = 0; t < 100; ++t) {
        const Index n = rng.integer(2, 8);
        const PsdOperator w(random_psd_matrix(n, rng.integer(1, n), rng));
        const WeightedPair pr = weighted_star_pair(n, w, rng);
        const Report r = simultaneous_ls(pr.a, pr.d, random_gaussian(n, rng.integer(1, n), rng), w, 2.0, {},
                                         rng.next_seed());
        for (const char* name : {"joint_solves_A_system", "joint_solves_B_system", "every_joint_solution_solves_both",
                                 "pair_solution_solves_joint"}) {
            const Check& c = check(r, name);
            worst = std::max(worst, c.pass ? c.residual : INFINITY);
        }
    }
    return {worst <= 1e-9, "worst normal-equation residual " + fmt("%.2e", worst) + " over 100 pairs"};
}

Outcome compression_additivity() {
    Rng rng(1111);
    double worst = 0.0;
    for (int t = 0; t < 100; ++t) {
        const Index n = rng.integer(2, 8);
        const PsdOperator w(random_psd_matrix(n, rng.integer(1, n), rng));
        const WeightedPair pr = weighted_star_pair(n, w, rng);
        worst = std::max(worst, compression_additivity_check(pr.a, pr.d, w).checks.front().residual);
    }
    return {worst <= 1e-8, "worst Frobenius gap " + fmt("%.2e", worst) + " over 100 pairs"};
}

Outcome order_axioms() {
    Rng rng(1212);
    std::vector<Chain> minus_chains;
    std::vector<Chain> star_chains;
    std::vector<Chain> wstar_chains;
    const Index n = 6;
    const PsdOperator w(random_psd_matrix(n, n - 1, rng));
    const PsdOperator id = PsdOperator::identity(n);
    for (int t = 0; t < 100; ++t) {
        const Index r1 = rng.integer(0, 2);
        const Index r2 = rng.integer(0, 2);
        const Index r3 = rng.integer(0, n - r1 - r2);
        minus_chains.push_back(minus_chain(n, r1, r2, r3, rng));
        star_chains.push_back(weighted_star_chain(n, id, r1, r2, r3, true, rng));
        wstar_chains.push_back(weighted_star_chain(n, w, r1, r2, r3, true, rng));
    }
    const std::vector<std::pair<const char*, std::pair<OrderRelation, const std::vector<Chain>*>>> runs{
        {"minus", {[](const ComplexMatrix& x, const ComplexMatrix& y) { return leq_minus(x, y).holds; }, &minus_chains}},
        {"star",
         {[](const ComplexMatrix& x, const ComplexMatrix& y) { return leq_star(StarVariant::star, x, y).holds; },
          &star_chains}},
        {"wstar",
         {[&w](const ComplexMatrix& x, const ComplexMatrix& y) {
              return leq_weighted_star(WeightedVariant::both, x, y, w).holds;
          },
          &wstar_chains}}};
    bool ok = true;
    std::string detail;
    for (const auto& [name, run] : runs) {
        const Report r = order_axioms_harness(run.first, *run.second);
        const Check& anti = check(r, "antisymmetry");
        const bool pass = r.passed() && anti.residual <= 1e-8;
        ok = ok && pass;
        detail += std::string(detail.empty() ? "" : "; ") + name + (pass ? " ok" : " FAILED") + " (antisymmetry gap " +
                  fmt("%.1e", anti.residual) + ", " + check(r, "transitivity").note + ")";
    }
    return {ok, detail};
}

int cli(std::vector<std::string> args, std::string* out = nullptr) {
    args.insert(args.begin(), "shortcalc");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream o;
    std::ostringstream e;
    const int code = cli_main(static_cast<int>(argv.size()), argv.data(), o, e);
    if (out) *out = o.str();
    return code;
}

Outcome cli_contract(const std::filesystem::path& corpus) {
    const auto slurp = [](const std::filesystem::path& p) {
        std::ifstream in(p, std::ios::binary);
        std::ostringstream ss;
        ss << in.rdbuf();
        return ss.str();
    };
    bool round_trip = true;
    for (const char* name : {"pass.json", "fail.json"}) {
        const std::string text = slurp(corpus / name);
        round_trip = round_trip && !text.empty() && serialize_problem(parse_problem_text(text)) == text;
    }
    const std::filesystem::path tmp = std::filesystem::temp_directory_path() / "shortcalc_acceptance_report.json";
    const int pass_code = cli({"short", (corpus / "pass.json").string(), "--trials", "20", "--json", tmp.string()});
    const bool golden = slurp(tmp) == slurp(corpus / "pass.short.report.json");
    std::filesystem::remove(tmp);
    const int fail_code = cli({"minimize", (corpus / "fail.json").string()});
    const int bad_code = cli({"short", (corpus / "malformed.json").string()});

    const auto t0 = Clock::now();
    const int verify_code = cli({"verify", "--suite", "all", "--n", "6", "--trials", "200"});
    const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    const bool ok = round_trip && golden && pass_code == 0 && fail_code == 1 && bad_code == 2 && verify_code == 0 &&
                    secs <= 60.0;
    return {ok, std::string("round trip ") + (round_trip ? "identical" : "DIFFERS") + ", golden report " +
                    (golden ? "identical" : "DIFFERS") + ", exit codes " + std::to_string(pass_code) + "/" +
                    std::to_string(fail_code) + "/" + std::to_string(bad_code) + ", verify all exit " +
                    std::to_string(verify_code) + " in " + fmt("%.1f", secs) + " s"};
}

}  // namespace

int main(int argc, char** argv) {
    const std::filesystem::path corpus = argc > 1 ? argv[1] : SHORTCALC_CORPUS_DIR;
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
        {"shorted operator matches the Schur complement oracle", oracle_agreement},
        {"running example golden values", running_example},
        {"maximality over sampled dominated members", maximality},
        {"projection infimum and its attainment", projection_infimum},
        {"compatibility equivalences and range/nullspace identities", compatibility_equivalences},
        {"minus order: rank additivity equals witness definition", minus_equivalence},
        {"shorted operator minus-below W iff range inclusion", shorted_minus_below_weight},
        {"quadratic minimization value and lower bounds", minimization},
        {"weighted Schatten norm minimality", schatten_minimality},
        {"simultaneous weighted least squares", simultaneous},
        {"compression additivity", compression_additivity},
        {"partial order axioms", order_axioms},
        {"command line contract", [&] { return cli_contract(corpus); }},
    };
    int failed = 0;
    int index = 0;
    for (const auto& [name, run] : criteria) {
        ++index;
        Outcome o;
        try {
            o = run();
        } catch (const std::exception& e) {
            o = {false, std::string("threw: ") + e.what()};
        }
        if (!o.pass) ++failed;
        std::printf("[%s] %2d %s: %s\n", o.pass ? "PASS" : "FAIL", index, name, o.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
