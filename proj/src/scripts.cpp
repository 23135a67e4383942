#include "weightlab/scripts.hpp"

#include "weightlab/error.hpp"

namespace weightlab {

namespace {

const Rational kOne{1};
const Rational kTwo{2};

NormalForm gen(const std::string& name) { return normalize(Expr::generator(name)); }
NormalForm lebesgue(const Rational& t) { return normalize(Expr::lebesgue(t)); }
NormalForm l1_mass(const Rational& m) {
    NormalForm nf;
    nf.mass = m;
    return nf;
}

Generator generator(const std::string& name, Rational convexity, Rational concavity) {
    Generator g;
    g.name = name;
    g.convexity = convexity;
    g.concavity = concavity;
    return g;
}

RuleArgs args_gamma(const Rational& gamma, std::string subject = {}) {
    RuleArgs a;
    a.gamma = gamma;
    a.subject = std::move(subject);
    return a;
}

RuleArgs args_theta(const Rational& theta, std::optional<NormalForm> target = std::nullopt, std::string subject = {}) {
    RuleArgs a;
    a.theta = theta;
    a.target = std::move(target);
    a.subject = std::move(subject);
    return a;
}

RuleArgs args_target(NormalForm target, std::string subject = {}) {
    RuleArgs a;
    a.target = std::move(target);
    a.subject = std::move(subject);
    return a;
}

RuleArgs args_subject(std::string subject) {
    RuleArgs a;
    a.subject = std::move(subject);
    return a;
}

template <class Body>
DerivationTrace run(const std::string& name, Context ctx, Body body) {
    Derivation d(name, std::move(ctx));
    try {
        body(d);
    } catch (const RuleError& e) {
        d.trace().ok = false;
        d.trace().failure = e.what();
    } catch (const FormError& e) {
        d.trace().ok = false;
        d.trace().failure = e.what();
    }
    return d.trace();
}

void expect_final(const Derivation& d, int id, const NormalForm& expr, const Rational& alpha, const Rational& beta) {
    const Fact& f = d.fact(id);
    if (!(f.expr == expr && f.alpha == alpha && f.beta == beta)) {
        throw RuleError("step #" + std::to_string(id) + " concludes " + f.str() + ", expected " + to_string(expr) + " " +
                        class_name(alpha, beta) + "-regular");
    }
}

}  // namespace

ChainExponents chain_exponents(const Rational& p, const Rational& s) {
    if (!(p > kOne) || p > kTwo) throw DomainError("the chain needs 1 < p <= 2, got " + p.str());
    ChainExponents e;
    e.p = p;
    e.r = (kOne + p) / kTwo;
    e.p_y = Rational(4) * p / (Rational(3) * p + kOne);
    if (!(s > kOne) || s > e.p_y) throw DomainError("s must lie in (1, p_Y], got " + s.str());
    e.s = s;
    e.s_prime = conjugate(s);
    e.t = conjugate(e.p_y);
    e.u = (kTwo - e.r) / (e.s_prime.reciprocal() + e.t.reciprocal());
    return e;
}

bool chain_bounds_hold(const ChainExponents& e) {
    const Rational lower = e.t * (Rational(3) - e.p) / Rational(4);
    const Rational upper = e.t * (Rational(3) - e.p) / kTwo;
    return kTwo <= lower && lower <= e.u && e.u <= upper && upper <= e.t;
}

GrowthPolynomial GrowthPolynomial::constant(const Rational& c) { return monomial(c, Rational(0), Rational(0)); }

GrowthPolynomial GrowthPolynomial::monomial(const Rational& coeff, const Rational& c4_exp, const Rational& s_exp) {
    GrowthPolynomial g;
    g.add({c4_exp, s_exp}, coeff);
    return g;
}

void GrowthPolynomial::add(const std::pair<Rational, Rational>& key, const Rational& coeff) {
    const Rational sum = terms_[key] + coeff;
    if (sum.is_zero()) {
        terms_.erase(key);
    } else {
        terms_[key] = sum;
    }
}

GrowthPolynomial operator+(const GrowthPolynomial& a, const GrowthPolynomial& b) {
    GrowthPolynomial out = a;
    for (const auto& [k, c] : b.terms_) out.add(k, c);
    return out;
}

GrowthPolynomial operator-(const GrowthPolynomial& a, const GrowthPolynomial& b) {
    GrowthPolynomial out = a;
    for (const auto& [k, c] : b.terms_) out.add(k, -c);
    return out;
}

GrowthPolynomial operator*(const GrowthPolynomial& a, const GrowthPolynomial& b) {
    GrowthPolynomial out;
    for (const auto& [ka, ca] : a.terms_) {
        for (const auto& [kb, cb] : b.terms_) out.add({ka.first + kb.first, ka.second + kb.second}, ca * cb);
    }
    return out;
}

std::string GrowthPolynomial::str() const {
    if (terms_.empty()) return "0";
    std::string out;
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
        const auto& [key, c] = *it;
        std::string mono;
        if (!key.first.is_zero()) mono += key.first == kOne ? "c₄" : "c₄^{" + key.first.str() + "}";
        if (!key.second.is_zero()) mono += key.second == kOne ? "s′" : "(s′)^{" + key.second.str() + "}";
        const bool neg = c.negative();
        const Rational mag = abs(c);
        std::string term = mono.empty() ? mag.str() : (mag == kOne ? mono : mag.str() + mono);
        if (out.empty()) {
            out = neg ? "−" + term : term;
        } else {
            out += neg ? " − " + term : " + " + term;
        }
    }
    return out;
}

const std::vector<std::string>& script_names() {
    static const std::vector<std::string> names = {"themcr2", "frdiv-from-duality", "main-chain"};
    return names;
}

DerivationTrace replay_themcr2() {
    Context ctx;
    ctx.declare(generator("X", kTwo, Rational(4)));
    return run("themcr2", ctx, [](Derivation& d) {
        const NormalForm x = gen("X");
        const NormalForm y = power(x, kTwo);
        d.axiom(declaration_fact(d.context().get("X")));
        d.check(convexity(x, d.context()) >= kTwo, "X is 2-convex, so Y = X^2 is a Banach lattice");
        d.identity("Y^{1/2}", power(y, Rational(1, 2)), x);
        const int bounded = d.axiom(bounded_fact("T", "Y^{1/2}", x, BoundExpr::symbol("c_X")));
        const int nondeg = d.axiom(nondegenerate_fact("T"));
        const int ydual = d.derive("btsb-axiom", {bounded, nondeg}, args_subject("Y′"));
        const int x_a1 = d.derive("aptoconj", {ydual}, args_subject("X"));
        const int xd_a1 = d.derive("a2rdiv", {ydual}, args_subject("X′"));
        expect_final(d, x_a1, x, kOne, Rational(0));
        expect_final(d, xd_a1, dual(x), kOne, Rational(0));
    });
}

DerivationTrace replay_frdiv(const FrdivParams& prm) {
    Context ctx;
    ctx.declare(generator("X", kTwo, Rational(4)));
    ctx.declare(generator("Y", kTwo, Rational(4)));
    return run("frdiv-from-duality", ctx, [&prm](Derivation& d) {
        const Rational r = prm.r;
        const NormalForm x = gen("X");
        const NormalForm y = gen("Y");
        d.axiom(declaration_fact(d.context().get("X")));
        d.axiom(declaration_fact(d.context().get("Y")));
        d.value("r", r);
        d.check(r.positive() && r <= convexity(x, d.context()) && r <= convexity(y, d.context()),
                "X and Y are r-convex with r = " + r.str());
        d.check(prm.alpha0 * r > kOne, "α₀r = " + (prm.alpha0 * r).str() + " > 1");
        d.check((prm.alpha1 + prm.beta0) * r > kOne, "(α₁ + β₀)r = " + ((prm.alpha1 + prm.beta0) * r).str() + " > 1");
        const int xy = d.axiom(regularity_fact("XY", product(x, y), prm.alpha1, prm.beta1));
        const int yy = d.axiom(regularity_fact("Y", y, prm.alpha0, prm.beta0));

        const int xy_half = d.derive("power", {xy}, args_gamma(r / kTwo));
        const int yr = d.derive("power", {yy}, args_gamma(r, "Y^r"));
        const int yr_dual = d.derive("duality", {yr}, args_subject("(Y^r)′"));
        const int yr_dual_half = d.derive("power", {yr_dual}, args_gamma(Rational(1, 2)));
        const int prod = d.derive("product", {xy_half, yr_dual_half});
        const int contracted = d.derive("lozanovsky", {prod}, args_theta(Rational(1, 2), power(y, r)));
        const int xr_dual_half = d.derive("duality", {contracted});
        const int xr_dual = d.derive("power", {xr_dual_half}, args_gamma(kTwo, "(X^r)′"));
        const int xr = d.derive("duality", {xr_dual}, args_subject("X^r"));
        const int result = d.derive("power", {xr}, args_gamma(r.reciprocal(), "X"));
        expect_final(d, result, x, prm.alpha1 + prm.beta0, prm.beta1 + prm.alpha0);
    });
}

DerivationTrace replay_main_chain(const Rational& p) {
    Context ctx;
    ctx.declare(generator("X", p, Rational(4)));
    ChainExponents e = chain_exponents(p, Rational(4) * p / (Rational(3) * p + kOne));
    return run("main-chain", ctx, [&e](Derivation& d) {
        const Rational& r = e.r;
        const Rational& s = e.s;
        const Rational& sp = e.s_prime;
        const Rational& t = e.t;
        const Rational& u = e.u;
        const NormalForm x = gen("X");
        d.axiom(declaration_fact(d.context().get("X")));
        d.value("p", e.p);
        d.value("r", r);
        d.value("p_Y", e.p_y);
        d.value("s", s);
        d.value("s′", sp);
        d.value("t", t);
        d.value("u", u);

        const NormalForm y = product(power(x, r), lebesgue(sp));
        d.check(r * s <= e.p, "r s = " + (r * s).str() + " ≤ p, so Y is a Banach lattice");
        const Rational p1 = convexity(y, d.context());
        d.check(p1 >= e.p_y, "Y is p_1-convex with p_1 = " + p1.str() + " ≥ p_Y");
        d.check(t >= Rational(8) / (Rational(3) - e.p), "t = " + t.str() + " ≥ 8/(3 − p)");
        d.check(chain_bounds_hold(e), "2 ≤ t(3 − p)/4 ≤ u ≤ t(3 − p)/2 ≤ t");
        d.identity("Y", y, product(power(power(x, r * s), s.reciprocal()), l1_mass(kOne - s.reciprocal())));
        const NormalForm y_half = power(y, Rational(1, 2));
        const NormalForm l_low = lebesgue((kTwo - r) * sp);
        d.identity("Y^{1/2}", y_half, product(power(x, r / kTwo), power(l_low, kOne - r / kTwo)));
        const NormalForm w = product(y_half, power(lebesgue(t), Rational(1, 2)));
        d.identity("W", w, product(power(x, r / kTwo), power(lebesgue(u), kOne - r / kTwo)));

        const int tx = d.axiom(bounded_fact("T", "X", x, BoundExpr::symbol("c_X")));
        const int tlow = d.axiom(bounded_fact("T", "", l_low, BoundExpr::symbol("c_L", kOne)));
        const int tu = d.axiom(bounded_fact("T", "", lebesgue(u), BoundExpr::symbol("c_u")));
        const int nondeg = d.axiom(nondegenerate_fact("T"));

        const int t_yhalf = d.derive("interp", {tx, tlow}, args_theta(r / kTwo, y_half, "Y^{1/2}"));
        d.check(d.fact(t_yhalf).constant.growth == kOne - r / kTwo,
                "‖T‖ on Y^{1/2} grows like (s′)^{" + (kOne - r / kTwo).str() + "}", {t_yhalf});
        const int t_w = d.derive("interp", {tx, tu}, args_theta(r / kTwo, w, "W"));
        d.check(convexity(w, d.context()) == kTwo, "W = Y^{1/2} L^t^{1/2} is 2-convex", {t_w});
        const int wd = d.derive("themcr2", {t_w, nondeg}, args_subject("W′"));
        const int wd2 = d.derive("power", {wd}, args_gamma(kTwo, "Y′L^{t′}"));
        const NormalForm lt_dual = lebesgue(conjugate(t));
        const int lt = d.derive("lebesgue-a1", {}, args_target(lt_dual, "L^{t′}"));
        const NormalForm y_dual = dual(y);
        const int yd21 = d.derive("divisibility", {wd2, lt}, args_target(y_dual, "Y′"));
        const int yd_a2 = d.derive("btsbge", {t_yhalf, nondeg, yd21}, args_subject("Y′"));
        const Rational growth = d.fact(yd_a2).constant.growth;
        d.check(growth == kTwo - r && growth.positive() && growth < kOne,
                "C_3 grows like (s′)^{2 − r} with 0 < 2 − r = " + (kTwo - r).str() + " < 1", {yd_a2});

        // rho = 1 + 1/(c4 S^{2-r}) and 1/s = (S - 1)/S with S = s'.
        const Rational g = kTwo - r;
        const auto rho = GrowthPolynomial::constant(kOne) + GrowthPolynomial::monomial(kOne, -kOne, -g);
        const auto inv_s = GrowthPolynomial::constant(kOne) - GrowthPolynomial::monomial(kOne, Rational(0), -kOne);
        const auto denom = GrowthPolynomial::monomial(kOne, kOne, g + kOne);
        const auto numer = GrowthPolynomial::monomial(kOne, kOne, g + kOne) - GrowthPolynomial::monomial(kOne, kOne, g) +
                           GrowthPolynomial::monomial(kOne, Rational(0), kOne) - GrowthPolynomial::constant(kOne);
        d.check(rho * inv_s * denom == numer, "ρ/s = (" + numer.str() + ")/(" + denom.str() + ")", {yd_a2});
        d.check(numer - denom ==
                    GrowthPolynomial::monomial(kOne, Rational(0), kOne) - GrowthPolynomial::constant(kOne) -
                        GrowthPolynomial::monomial(kOne, kOne, g),
                "ρ/s > 1 ⇔ s′ − 1 > c₄(s′)^{2 − r}");
        // s' - 1 >= s'/2 >= c4 (s')^{2-r} once s' >= 2 and (s')^{r-1} >= 2 c4.
        const int threshold = d.check(r > kOne && (s - kOne) * (sp - kOne) == kOne,
                                      "ρ = s admissible: s − 1 = 1/(s′ − 1) ≤ 1/(c₄(s′)^{2 − r}) for s′ ≥ max(2, (2c₄)^{" +
                                          (r - kOne).reciprocal().str() + "})",
                                      {yd_a2}, "rh-threshold", s);
        RuleArgs rh;
        rh.exponent = s;
        rh.subject = "(X^{rs})′";
        const int xrs_dual = d.derive("aregrh", {yd_a2, threshold}, rh);
        d.check(d.fact(xrs_dual).expr == dual(power(x, r * s)), "(Y′)^s = (X^{rs})′", {xrs_dual});
        const int xd = d.derive("l1clp", {xrs_dual}, args_theta((r * s).reciprocal(), std::nullopt, "X′"));
        expect_final(d, xd, dual(x), kOne, kOne);
    });
}

DerivationTrace replay(std::string_view script, std::optional<Rational> p) {
    if (script == "themcr2") return replay_themcr2();
    if (script == "frdiv-from-duality") return replay_frdiv();
    if (script == "main-chain") return replay_main_chain(p.value_or(Rational(2)));
    throw DomainError("unknown script '" + std::string(script) + "'");
}

}  // namespace weightlab
