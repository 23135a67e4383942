#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "weightlab/engine.hpp"
#include "weightlab/error.hpp"
#include "weightlab/lattice.hpp"
#include "weightlab/rational.hpp"
#include "weightlab/scripts.hpp"

using namespace weightlab;

namespace {

NormalForm gen(const std::string& name) { return normalize(Expr::generator(name)); }
NormalForm leb(std::int64_t t) { return normalize(Expr::lebesgue(Rational(t))); }

Context two_generators() {
    Context ctx;
    ctx.declare({"X", Rational(2), Rational(4)});
    ctx.declare({"Y", Rational(2), Rational(4)});
    return ctx;
}

RuleArgs with_gamma(Rational g) {
    RuleArgs a;
    a.gamma = g;
    return a;
}

}  // namespace

TEST_CASE("exact rationals") {
    CHECK(Rational(1, 2) + Rational(1, 3) == Rational(5, 6));
    CHECK(Rational(2, 4) == Rational(1, 2));
    CHECK(Rational(1, -2) == Rational(-1, 2));
    CHECK(Rational(3, 2).str() == "3/2");
    CHECK(Rational(-4, 2).str() == "-2");
    CHECK(conjugate(Rational(3, 2)) == Rational(3));
    CHECK(conjugate(Rational(8, 7)) == Rational(8));
    CHECK(pow(Rational(2, 3), -2) == Rational(9, 4));
    CHECK(parse_rational("-7/14") == Rational(-1, 2));
    CHECK(Rational(1, 3) < Rational(1, 2));
    CHECK_THROWS_AS(Rational(1, 0), DomainError);
    CHECK_THROWS_AS(parse_rational("1/x"), ParseError);
    CHECK_THROWS_AS(parse_rational("3/0"), ParseError);
    CHECK_THROWS_AS(conjugate(Rational(1)), DomainError);
    CHECK_THROWS_AS(Rational(INT64_MAX) * Rational(2), DomainError);
}

TEST_CASE("lattice normal forms") {
    const Context ctx = two_generators();
    const NormalForm x = gen("X");
    const NormalForm y = product(power(x, Rational(3, 2)), leb(8));
    CHECK(to_string(y) == "X^{3/2} L^8");
    CHECK(convexity(y, ctx) == Rational(8, 7));
    CHECK(convexity(x, ctx) == Rational(2));
    CHECK(normalize(Expr::generator("X").pow(Rational(2)).pow(Rational(1, 2))) == x);
    CHECK(power(power(y, Rational(2)), Rational(1, 2)) == y);

    const NormalForm z = product(power(x, Rational(1, 2)), leb(2));
    CHECK(dual(dual(z)) == z);
    CHECK(dual(dual(y)) == y);
    CHECK(to_string(dual(x)) == "X′");
    CHECK(equivalent(dual(dual(x)), x));
    CHECK(to_string(normalize(Expr::lebesgue_inf())) == "L^∞");

    CHECK_THROWS_AS(Expr::lebesgue(Rational(1, 2)), FormError);
    CHECK_THROWS_AS(power(x, Rational(-1)), FormError);
    CHECK_THROWS_AS(convexity(normalize(Expr::lebesgue_inf()), ctx), FormError);
    CHECK_THROWS_AS(convexity(gen("W"), ctx), DeclarationError);
    Context bad;
    CHECK_THROWS_AS(bad.declare({"Z", Rational(3), Rational(2)}), DeclarationError);
}

TEST_CASE("Lozanovsky contraction") {
    const NormalForm x = gen("X");
    const NormalForm both = product(power(x, Rational(1, 2)), power(dual(x), Rational(1, 2)));
    const NormalForm out = lozanovsky_contract(both, x, Rational(1, 2));
    CHECK(out == leb(2));
    CHECK_THROWS_AS(lozanovsky_contract(power(x, Rational(1, 2)), x, Rational(1, 2)), FormError);
}

TEST_CASE("regularity rules") {
    const Context ctx = two_generators();
    const NormalForm x = gen("X");
    const NormalForm y = gen("Y");

    const Fact a1 = regularity_fact("X", x, Rational(1), Rational(0));
    CHECK(a1.str() == "X A_1-regular");
    const Fact sq = apply_rule("power", {a1}, with_gamma(Rational(2)), ctx);
    CHECK(sq.alpha == Rational(2));
    CHECK(sq.beta == Rational(0));
    CHECK(sq.expr == power(x, Rational(2)));
    CHECK_THROWS_AS(apply_rule("power", {a1}, with_gamma(Rational(-1)), ctx), RuleError);

    const Fact f21 = regularity_fact("X", x, Rational(2), Rational(1));
    const Fact d = apply_rule("duality", {f21}, {}, ctx);
    CHECK(d.alpha == Rational(2));
    CHECK(d.beta == Rational(1));
    CHECK(d.expr == dual(x));
    CHECK(d.str() == "X′ F(2,1)-regular");
    CHECK_THROWS_WITH_AS(apply_rule("duality", {sq}, {}, ctx), doctest::Contains("beta > 0"), RuleError);

    const Fact whole = regularity_fact("XY", product(x, y), Rational(2), Rational(0));
    const Fact div = regularity_fact("Y", y, Rational(1), Rational(0));
    RuleArgs target;
    target.target = x;
    const Fact q = apply_rule("divisibility", {whole, div}, target, ctx);
    CHECK(q.alpha == Rational(2));
    CHECK(q.beta == Rational(1));
    CHECK(q.expr == x);
    RuleArgs wrong;
    wrong.target = y;
    CHECK_THROWS_AS(apply_rule("divisibility", {whole, div}, wrong, ctx), RuleError);
    CHECK_THROWS_AS(apply_rule("no-such-rule", {}, {}, ctx), RuleError);
}

TEST_CASE("weight-class rules and constants") {
    const Context ctx = two_generators();
    const Fact u = weight_fact("u", Rational(1), Rational(1), BoundExpr::symbol("C"));
    const Fact v = weight_fact("v", Rational(1), Rational(1), BoundExpr::symbol("C"));
    const Fact m = apply_rule("max", {u, v}, {}, ctx);
    CHECK(evaluate(m.constant, {{"C", 3.0}}) == doctest::Approx(6.0));
    const Fact w0 = weight_fact("u", Rational(0), Rational(1), BoundExpr::symbol("C"));
    CHECK(evaluate(apply_rule("max", {w0, w0}, {}, ctx).constant, {{"C", 3.0}}) == doctest::Approx(3.0));

    const Fact p = apply_rule("power", {u}, with_gamma(Rational(3, 2)), ctx);
    CHECK(p.alpha == Rational(3, 2));
    CHECK(p.constant == u.constant);
    const Fact inv = apply_rule("power", {weight_fact("u", Rational(2), Rational(1), BoundExpr::symbol("C"))},
                                with_gamma(Rational(-1)), ctx);
    CHECK(inv.alpha == Rational(1));
    CHECK(inv.beta == Rational(2));

    const Fact a = weight_fact("u", Rational(1), Rational(1), BoundExpr::symbol("A"));
    const Fact b = weight_fact("v", Rational(3), Rational(1), BoundExpr::symbol("B"));
    const Fact prod = apply_rule("product", {a, b}, {}, ctx);
    CHECK(prod.alpha == Rational(4));
    CHECK(evaluate(prod.constant, {{"A", 16.0}, {"B", 1.0}}) == doctest::Approx(2.0));
    CHECK_THROWS_AS(evaluate(prod.constant, {{"A", 1.0}}), DeclarationError);
}

TEST_CASE("interpolated norm bounds") {
    const BoundExpr b = interp_norm_bound(BoundExpr::symbol("c_L", Rational(1)), BoundExpr::symbol("c_X"), Rational(1, 4));
    CHECK(b.growth == Rational(1, 4));
    CHECK(b.str() == "c_L^{1/4}·c_X^{3/4}·(s′)^{1/4}");
    CHECK(evaluate(b, {{"c_L", 16.0}, {"c_X", 1.0}}, 81.0) == doctest::Approx(6.0));
    CHECK_THROWS_AS(interp_norm_bound(b, b, Rational(3, 2)), DomainError);
}

TEST_CASE("chain exponents") {
    const ChainExponents e = chain_exponents(Rational(2), Rational(8, 7));
    CHECK(e.r == Rational(3, 2));
    CHECK(e.p_y == Rational(8, 7));
    CHECK(e.s_prime == Rational(8));
    CHECK(e.t == Rational(8));
    CHECK(e.u == Rational(2));
    for (int k = 1; k <= 16; ++k) {
        const Rational s = Rational(1) + Rational(k, 112);
        CHECK(chain_bounds_hold(chain_exponents(Rational(2), s)));
    }
    CHECK_THROWS_AS(chain_exponents(Rational(2), Rational(2)), DomainError);
    CHECK_THROWS_AS(chain_exponents(Rational(3), Rational(9, 8)), DomainError);
}

TEST_CASE("growth polynomials") {
    const auto a = GrowthPolynomial::monomial(Rational(2), Rational(1), Rational(1, 2));
    const auto b = GrowthPolynomial::constant(Rational(3));
    CHECK((a + b) - b == a);
    CHECK(a * GrowthPolynomial::constant(Rational(1)) == a);
    CHECK((a - a) == GrowthPolynomial::constant(Rational(0)));
    CHECK_FALSE(a.str().empty());
}

TEST_CASE("derivation replays") {
    const auto t = replay("themcr2");
    CHECK(t.ok);
    CHECK(t.final_fact().str() == "X′ A_1-regular");

    const auto f = replay("frdiv-from-duality");
    CHECK(f.ok);
    CHECK(f.final_fact().str() == "X F(5/2,1)-regular");

    const auto m = replay("main-chain", Rational(2));
    REQUIRE(m.ok);
    CHECK(m.values.at("r") == Rational(3, 2));
    CHECK(m.values.at("p_Y") == Rational(8, 7));
    CHECK(m.values.at("t") == Rational(8));
    CHECK(m.values.at("u") == Rational(2));
    CHECK(m.final_fact().str() == "X′ A_2-regular");
    CHECK(m.render().find("#35: X′ A_2-regular") != std::string::npos);

    for (const Rational& p : {Rational(3, 2), Rational(5, 4), Rational(9, 5)}) CHECK(replay_main_chain(p).ok);
    CHECK_THROWS_AS(replay("nope"), DomainError);
    CHECK(script_names().size() == 3);

    FrdivParams bad;
    bad.beta0 = Rational(0);
    const auto fb = replay_frdiv(bad);
    CHECK_FALSE(fb.ok);
    CHECK(fb.failure.find("beta > 0") != std::string::npos);
    CHECK(fb.render().find("FAILED") != std::string::npos);
}
