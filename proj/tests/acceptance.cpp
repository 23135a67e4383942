// One line per acceptance criterion; exit status 1 if any criterion fails.
#include <Eigen/Dense>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>

#include "weightlab/calibration.hpp"
#include "weightlab/constants.hpp"
#include "weightlab/engine.hpp"
#include "weightlab/majorants.hpp"
#include "weightlab/operators.hpp"
#include "weightlab/scripts.hpp"

using namespace weightlab;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c);
    return buf;
}

int failures = 0;

void criterion(int k, const std::function<Outcome()>& body, double budget_s = 0.0) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (budget_s > 0.0 && secs > budget_s) {
        o.pass = false;
        o.detail += fmt("; over the %.0f s budget", budget_s);
    }
    if (!o.pass) ++failures;
    std::printf("criterion %d: %s - %s (%.2f s)\n", k, o.pass ? "PASS" : "FAIL", o.detail.c_str(), secs);
    std::fflush(stdout);
}

Outcome trivial_weight() {
    const Weight one = constant_weight(make_grid(1.0, 10), 1.0);
    double worst = 0.0;
    for (double p : {1.5, 2.0, 3.0}) worst = std::max(worst, std::abs(ap_constant(one, p) - 1.0));
    worst = std::max(worst, std::abs(a1_constant(one) - 1.0));
    worst = std::max(worst, std::abs(fujii_wilson(one) - 1.0));
    worst = std::max(worst, std::abs(reverse_holder(one, 2.0) - 1.0));
    return {worst <= 1e-12, fmt("max deviation from 1 is %.2e", worst)};
}

Outcome step_weight_closed_form() {
    const Grid g = make_grid(1.0, 12);
    double worst = 0.0;
    for (double k : {2.0, 4.0, 10.0}) {
        const double exact = (2.0 + k + 1.0 / k) / 4.0;
        worst = std::max(worst, std::abs(ap_constant(step_weight(g, k), 2.0) - exact) / exact);
    }
    return {worst <= 0.02, fmt("worst relative error %.3e for K in {2, 4, 10}", worst)};
}

Outcome duality_identity() {
    const Grid g = make_grid(1.0, 8);
    double worst = 0.0, worst_p = 0.0, worst_power = 0.0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const Weight w = random_piecewise_weight(g, seed);
        for (double p : {1.5, 2.0, 3.0}) {
            const double lhs = ap_constant(w, p);
            const double rhs = ap_constant(w.pow(-1.0 / (p - 1.0)), p / (p - 1.0));
            const double rel = std::abs(lhs - rhs) / lhs;
            if (rel > worst) {
                worst = rel;
                worst_p = p;
            }
            worst_power = std::max(worst_power, std::abs(rhs - std::pow(lhs, 1.0 / (p - 1.0))) / rhs);
        }
    }
    return {worst <= 1e-9, fmt("worst relative gap %.3e (at p = %g); the power relation [w]_p^{1/(p-1)} holds to %.1e",
                               worst, worst_p, worst_power)};
}

Outcome hilbert_oracles() {
    const Grid g = make_grid(1.0, 12);
    Samples chi(g.size(), 0.0);
    for (std::size_t i = 0; i < g.size(); ++i) chi[i] = std::abs(g.midpoint(i)) < 0.5 ? 1.0 : 0.0;
    const Samples h = DiscreteOperator::hilbert(g).apply(chi);
    double worst = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double x = g.midpoint(i);
        if (std::min(std::abs(x - 0.5), std::abs(x + 0.5)) < 3.0 * g.cell_width()) continue;
        const double exact = std::log(std::abs((x + 0.5) / (x - 0.5))) / std::numbers::pi;
        if (std::abs(exact) < 1e-3) continue;
        worst = std::max(worst, std::abs(h[i] - exact) / std::abs(exact));
    }

    const Grid small = make_grid(1.0, 8);
    const std::size_t n = small.size();
    const Weight w = step_weight(small, 4.0);
    const auto wf = w.fiber(0);
    Eigen::MatrixXd b(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const double k = i == j ? 0.0 : small.cell_width() / (std::numbers::pi * (small.midpoint(i) - small.midpoint(j)));
            b(i, j) = std::sqrt(wf[i]) * k / std::sqrt(wf[j]);
        }
    }
    const double sigma = Eigen::JacobiSVD<Eigen::MatrixXd>(b).singularValues()(0);
    const double norm = op_norm_weighted(DiscreteOperator::hilbert(small), w, 0).norm;
    const double norm_err = std::abs(norm - sigma) / sigma;
    return {worst <= 0.02 && norm_err <= 1e-6,
            fmt("indicator oracle worst %.3e; weighted norm %.10f vs SVD, relative %.2e", worst, norm, norm_err)};
}

Outcome nondegeneracy() {
    double lo = INFINITY, hi = 0.0;
    for (int k = 10; k <= 14; ++k) {
        const double c = nondegeneracy_constant(DiscreteOperator::hilbert(make_grid(1.0, k)), 3.0).empirical_c;
        lo = std::min(lo, c);
        hi = std::max(hi, c);
    }
    const double target = 1.0 / (2.0 * std::numbers::pi);
    const bool stable = (hi - lo) <= 0.10 * lo;
    return {lo >= target && stable,
            fmt("c in [%.6f, %.6f] over 2^10..2^14, threshold 1/(2 pi) = %.6f", lo, hi, target) +
                (stable ? ", stable within 10%" : ", not stable within 10%")};
}

Outcome shifted_a2() {
    const Grid g = make_grid(1.0, 9);
    const auto op = DiscreteOperator::hilbert(g);
    const double ct = frozen_calibration().shift_ct;
    bool ok = true;
    double worst_shift = 0.0, worst_ap2 = 0.0;
    for (const Weight& w : {constant_weight(g, 1.0), step_weight(g, 4.0), power_weight(g, 0.5), power_weight(g, -0.5)}) {
        const auto r = verify_shift_ap2(op, w, 3.0, ct);
        ok = ok && r.shift_pass && r.ap2_pass;
        worst_shift = std::max(worst_shift, r.worst_ratio);
        worst_ap2 = std::max(worst_ap2, r.ap2_ratio);
    }
    return {ok, fmt("worst shifted ratio %.4f, worst [w]_A2/(c_T C_w m^2) %.4f with c_T = %.4f", worst_shift, worst_ap2, ct)};
}

Outcome rubio_de_francia() {
    const Grid g = make_grid(1.0, 9);
    bool ok = true;
    double worst_norm = 0.0, worst_a1 = 0.0;
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const Samples f = random_profile(g, seed);
        for (double p : {1.5, 2.0, 3.0}) {
            const auto r = rdf_majorant(f, p, g);
            const auto w = r.majorant.fiber(0);
            for (std::size_t i = 0; i < f.size(); ++i) ok = ok && w[i] >= f[i];
            worst_norm = std::max(worst_norm, r.norm_ratio);
            worst_a1 = std::max(worst_a1, r.class_constant / (2.0 * maximal_norm_lp(p, g)));
        }
    }
    ok = ok && worst_norm <= 2.0 && worst_a1 <= 1.05;
    return {ok, fmt("worst ||w||/||f|| %.4f (<= 2), worst A_1/(2||M||_p) %.4f (<= 1.05)", worst_norm, worst_a1)};
}

Outcome chains() {
    const Grid g = make_grid(1.0, 9);
    const double c = frozen_calibration().a2rdiv_c;
    int a1_pass = 0, a2_pass = 0;
    double worst_c = 0.0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto a = a1apt_instance(g, seed);
        a1_pass += chain_a1apt(a.f, a.w, a.u, a.p, a.delta).pass();
        const auto b = a2rdiv_instance(g, seed);
        const auto r = chain_a2rdiv(b.g, b.h, b.p_z, g);
        a2_pass += r.pass() && r.final_constant <= c;
        worst_c = std::max(worst_c, r.final_constant);
    }
    return {a1_pass == 20 && a2_pass == 20,
            fmt("a1apt %g/20, a2rdiv %g/20, worst c'' %.4f", a1_pass, a2_pass, worst_c) + fmt(" (frozen %.4f)", c)};
}

Outcome fixed_point() {
    const Grid g = make_grid(1.0, 9);
    const auto h = DiscreteOperator::hilbert(g);
    const Calibration cal = frozen_calibration();
    int converged = 0, reported = 0;
    double worst_c2 = 0.0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto r = restricted_majorant(random_profile(g, seed), 2.0, h, 2.0);
        if (!r.converged) continue;
        ++converged;
        reported += restricted_majorant_report(r, cal).pass();
        worst_c2 = std::max(worst_c2, r.ap2_over_m2);
    }
    return {converged >= 18 && reported == converged,
            fmt("%g/20 converged, %g pass every check, worst [w]_A2/m^2 %.4f", converged, reported, worst_c2) +
                fmt(" (C_2 = %.4f)", cal.c2)};
}

Outcome replays() {
    const auto t = replay("themcr2");
    const auto f = replay("frdiv-from-duality");
    const auto m = replay("main-chain", Rational(2));
    bool ok = t.ok && f.ok && m.ok;
    ok = ok && m.values.at("r") == Rational(3, 2) && m.values.at("p_Y") == Rational(8, 7) &&
         m.values.at("t") == Rational(8) && m.values.at("u") == Rational(2);
    ok = ok && m.final_fact().str() == "X′ A_2-regular";
    bool threshold = false;
    for (const auto& s : m.steps) threshold = threshold || s.fact.text.find("s′ − 1 > c₄(s′)^{2 − r}") != std::string::npos;
    ok = ok && threshold;
    return {ok, "themcr2 " + std::string(t.ok ? "ok" : "failed") + ", frdiv " + (f.ok ? "ok" : "failed") +
                    ", main-chain ends '" + m.final_fact().str() + "' after " + std::to_string(m.steps.size()) +
                    " steps, threshold " + (threshold ? "verified" : "missing")};
}

Outcome rule_soundness() {
    const Grid g = make_grid(1.0, 8);
    Context ctx;
    const auto c = BoundExpr::symbol("C");
    auto predicted = [&](const Fact& fact, double value) { return evaluate(fact.constant, {{"C", value}}); };
    double worst = 0.0;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const Weight u = random_piecewise_weight(g, seed);
        const Weight v = random_piecewise_weight(g, seed + 50);

        const double cu = f_class_constant(u, 1.0, 1.0);
        RuleArgs ga;
        ga.gamma = Rational(3, 2);
        const Fact pw = apply_rule("power", {weight_fact("u", Rational(1), Rational(1), c)}, ga, ctx);
        worst = std::max(worst, f_class_constant(u.pow(1.5), pw.alpha.to_double(), pw.beta.to_double()) / predicted(pw, cu));

        const double a = f_class_constant(u, 1.0, 1.0), b = f_class_constant(v, 3.0, 1.0);
        const Fact pr = apply_rule("product", {weight_fact("u", Rational(1), Rational(1), BoundExpr::symbol("A")),
                                               weight_fact("v", Rational(3), Rational(1), BoundExpr::symbol("B"))},
                                   {}, ctx);
        const double pred = evaluate(pr.constant, {{"A", a}, {"B", b}});
        worst = std::max(worst, f_class_constant(u * v, pr.alpha.to_double(), pr.beta.to_double()) / pred);

        for (double alpha : {0.0, 2.0}) {
            const double cm = std::max(f_class_constant(u, alpha, 1.0), f_class_constant(v, alpha, 1.0));
            const Fact each = weight_fact("u", Rational(static_cast<std::int64_t>(alpha)), Rational(1), c);
            const Fact mx = apply_rule("max", {each, each}, {}, ctx);
            worst = std::max(worst, f_class_constant(max(u, v), alpha, 1.0) / predicted(mx, cm));
        }
    }
    return {worst <= 1.0 + 1e-9, fmt("worst measured/predicted constant %.4f over power, product and max", worst)};
}

}  // namespace

int main() {
    criterion(1, trivial_weight, 1.0);
    criterion(2, step_weight_closed_form, 10.0);
    criterion(3, duality_identity);
    criterion(4, hilbert_oracles);
    criterion(5, nondegeneracy);
    criterion(6, shifted_a2);
    criterion(7, rubio_de_francia);
    criterion(8, chains, 60.0);
    criterion(9, fixed_point);
    criterion(10, replays, 1.0);
    criterion(11, rule_soundness);
    std::printf("%d of 11 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
