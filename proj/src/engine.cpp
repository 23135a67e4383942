#include "weightlab/engine.hpp"

#include <cmath>
#include <sstream>

#include "weightlab/error.hpp"

namespace weightlab {

namespace {

const Rational kZero{0};
const Rational kOne{1};

std::string power_text(const std::string& base, const Rational& e) {
    if (e == kOne) return base;
    if (e.is_integer() && e.positive() && e.num() < 10) return base + "^" + e.str();
    return base + "^{" + e.str() + "}";
}

class RuleContext {
public:
    RuleContext(std::string_view rule, const std::vector<Fact>& premises, const RuleArgs& args, const Context& ctx)
        : rule_(rule), premises_(premises), args_(args), ctx_(ctx) {}

    [[noreturn]] void fail(const std::string& what) const { throw RuleError("rule " + rule_ + ": " + what); }
    void require(bool cond, const std::string& what) const {
        if (!cond) fail(what);
    }

    const Fact& premise(std::size_t i, FactKind kind, const char* what) const {
        require(premises_.size() > i, std::string("missing premise: ") + what);
        require(premises_[i].kind == kind, std::string("premise ") + std::to_string(i + 1) + " must be " + what);
        return premises_[i];
    }
    void arity(std::size_t n) const {
        require(premises_.size() == n, "expects " + std::to_string(n) + " premise(s), got " +
                                           std::to_string(premises_.size()));
    }
    const Rational& need(const std::optional<Rational>& v, const char* name) const {
        require(v.has_value(), std::string("argument ") + name + " is required");
        return *v;
    }
    const NormalForm& target() const {
        require(args_.target.has_value(), "a target expression is required");
        return *args_.target;
    }
    BoundExpr opaque(const char* fallback) const {
        return BoundExpr::symbol(args_.symbol.empty() ? std::string(fallback) : args_.symbol);
    }
    void require_attribute(const NormalForm& nf, bool Generator::*flag, const char* name) const {
        for (const auto& g : generator_names(nf)) {
            require(ctx_.get(g).*flag, "generator " + g + " lacks the " + name + " assumption");
        }
    }
    Rational ap_exponent(const Fact& f) const {
        require(f.alpha == kOne, "premise " + f.str() + " is not an A_p statement");
        return f.beta + kOne;
    }

    const RuleArgs& args() const { return args_; }
    const Context& ctx() const { return ctx_; }

private:
    std::string rule_;
    const std::vector<Fact>& premises_;
    const RuleArgs& args_;
    const Context& ctx_;
};

Fact regularity(const RuleContext& rc, const NormalForm& expr, Rational alpha, Rational beta, BoundExpr c,
                BoundExpr m) {
    rc.require(!(alpha.is_zero() && beta.is_zero()), "conclusion F(0,0) is not a regularity class");
    rc.require(!alpha.negative() && !beta.negative(), "regularity indices must be nonnegative");
    return regularity_fact(rc.args().subject, expr, alpha, beta, std::move(c), std::move(m));
}

Fact rule_power(const RuleContext& rc, [[maybe_unused]] const std::vector<Fact>& p) {
    rc.arity(1);
    const Rational gamma = rc.need(rc.args().gamma, "gamma");
    const Fact& f = p[0];
    if (f.kind == FactKind::weight_class) {
        rc.require(!gamma.is_zero(), "weight power needs gamma != 0");
        const Rational g = abs(gamma);
        Fact out = gamma.positive() ? weight_fact(rc.args().subject, g * f.alpha, g * f.beta, f.constant)
                                    : weight_fact(rc.args().subject, g * f.beta, g * f.alpha, f.constant);
        return out;
    }
    rc.premise(0, FactKind::regularity, "a regularity fact");
    rc.require(gamma.positive(), "lattice power needs gamma > 0");
    return regularity(rc, power(f.expr, gamma), gamma * f.alpha, gamma * f.beta, f.constant, f.norm_factor);
}

Fact rule_product(const RuleContext& rc, [[maybe_unused]] const std::vector<Fact>& p) {
    rc.arity(2);
    const Fact& a = p[0];
    const Fact& b = p[1];
    rc.require(a.kind == b.kind && (a.kind == FactKind::regularity || a.kind == FactKind::weight_class),
               "premises must both be regularity facts or both weight-class facts");
    const Rational alpha = a.alpha + b.alpha;
    const Rational beta = a.beta + b.beta;
    // Log-convexity of the A_1 balls: the constant is the geometric mean
    // weighted by the share of the combined index.
    const Rational theta = alpha.positive() ? a.alpha / alpha : a.beta / beta;
    const BoundExpr c = interp_norm_bound(a.constant, b.constant, theta);
    if (a.kind == FactKind::weight_class) return weight_fact(rc.args().subject, alpha, beta, c);
    return regularity(rc, product(a.expr, b.expr), alpha, beta, c, a.norm_factor * b.norm_factor);
}

Fact rule_max(const RuleContext& rc, [[maybe_unused]] const std::vector<Fact>& p) {
    rc.arity(2);
    const Fact& a = rc.premise(0, FactKind::weight_class, "a weight-class fact");
    const Fact& b = rc.premise(1, FactKind::weight_class, "a weight-class fact");
    rc.require(a.alpha == b.alpha && a.beta == b.beta, "both weights must lie in the same class");
    rc.require(a.constant == b.constant, "both weights must share the constant");
    const BoundExpr c = a.alpha.positive() ? BoundExpr::symbol("2") * a.constant : a.constant;
    return weight_fact(rc.args().subject, a.alpha, a.beta, c);
}

Fact rule_duality(const RuleContext& rc, [[maybe_unused]] const std::vector<Fact>& p) {
    rc.arity(1);
    const Fact& f = rc.premise(0, FactKind::regularity, "a regularity fact");
    rc.require(f.alpha > kOne, "duality needs alpha > 1, got alpha = " + f.alpha.str());
    rc.require(f.beta.positive(), "duality needs beta > 0, got beta = " + f.beta.str());
    rc.require_attribute(f.expr, &Generator::fatou, "Fatou");
    return regularity(rc, dual(f.expr), f.beta + kOne, f.alpha - kOne, rc.opaque("c_dual") * f.constant,
                      rc.opaque("c_dual") * f.norm_factor);
}

Fact rule_divisibility(const RuleContext& rc, [[maybe_unused]] const std::vector<Fact>& p) {
    rc.arity(2);
    const Fact& whole = rc.premise(0, FactKind::regularity, "the regularity of the product XY");
    const Fact& divisor = rc.premise(1, FactKind::regularity, "the regularity of Y");
    const NormalForm& x = rc.target();
    rc.require(equivalent(product(x, divisor.expr), whole.expr),
               to_string(x) + " times " + to_string(divisor.expr) + " is not " + to_string(whole.expr));
    rc.require_attribute(whole.expr, &Generator::fatou, "Fatou");
    rc.require_attribute(divisor.expr, &Generator::fatou, "Fatou");
    return regularity(rc, x, whole.alpha + divisor.beta, whole.beta + divisor.alpha,
                      rc.opaque("c_div") * whole.constant * divisor.constant,
                      rc.opaque("m_div") * whole.norm_factor * divisor.norm_factor);
}

Fact rule_aptoconj(const RuleContext& rc, [[maybe_unused]] const std::vector<Fact>& p) {
    rc.arity(1);
    const Fact& f = rc.premise(0, FactKind::regularity, "an A_p-regularity fact");
    const Rational pexp = rc.ap_exponent(f);
    rc.require(pexp > kOne, "needs p > 1");
    const NormalForm normed = dual(f.expr);
    // The premise lattice is norming for its dual when the dual has the
    // Fatou property or order continuous norm.
    for (const auto& g : generator_names(normed)) {
        const Generator& gen = rc.ctx().get(g);
        rc.require(gen.fatou || gen.order_continuous, "norming fails: " + g + " is neither Fatou nor order continuous");
    }
    return regularity(rc, power(normed, pexp.reciprocal()), kOne, kZero, rc.opaque("c_conj") * f.constant,
                      rc.opaque("c_conj") * f.norm_factor);
}

Fact rule_a2rdiv(const RuleContext& rc, [[maybe_unused]] const std::vector<Fact>& p) {
    rc.arity(1);
    const Fact& f = rc.premise(0, FactKind::regularity, "an A_2-regularity fact");
    rc.require(rc.ap_exponent(f) == Rational(2), "premise must be A_2-regular");
    NormalForm half_l1;
    half_l1.mass = Rational(1, 2);
    return regularity(rc, product(power(f.expr, Rational(1, 2)), half_l1), kOne, kZero,
                      rc.opaque("c_a2rdiv") * f.constant, rc.opaque("c_a2rdiv") * f.norm_factor);
}

Fact rule_a1apt(const RuleContext& rc, [[maybe_unused]] const std::vector<Fact>& p) {
    rc.arity(2);
    const Fact& ap = rc.premise(0, FactKind::regularity, "an A_p-regularity fact");
    const Fact& a1 = rc.premise(1, FactKind::regularity, "an A_1-regularity fact for a power");
    rc.ap_exponent(ap);
    rc.require(rc.ap_exponent(a1) == kOne, "second premise must be A_1-regular");
    const Rational delta = rc.need(rc.args().exponent, "delta");
    rc.require(delta.positive(), "delta must be positive");
    rc.require(power(ap.expr, delta) == a1.expr, "second premise is not about the delta-th power of the first");
    return regularity(rc, ap.expr, kOne, kZero, rc.opaque("c_a1apt") * ap.constant * a1.constant.pow(delta.reciprocal()),
                      rc.opaque("c_a1apt") * ap.norm_factor * a1.norm_factor);
}

Fact rule_ainfainf(const RuleContext& rc, [[maybe_unused]] const std::vector<Fact>& p) {
    rc.arity(2);
    const Fact& x = rc.premise(0, FactKind::regularity, "an A_p-regularity fact for X");
    const Fact& xd = rc.premise(1, FactKind::regularity, "an A_q-regularity fact for X′");
    rc.ap_exponent(x);
    rc.ap_exponent(xd);
    rc.require(dual(x.expr) == xd.expr, "second premise must concern the dual of the first");
    rc.require_attribute(x.expr, &Generator::fatou, "Fatou");
    return regularity(rc, x.expr, kOne, kZero, rc.opaque("c_ainf") * x.constant * xd.constant,
                      rc.opaque("c_ainf") * x.norm_factor);
}

Fact rule_aregrh(const RuleContext& rc, [[maybe_unused]] const std::vector<Fact>& p) {
    rc.arity(2);
    const Fact& f = rc.premise(0, FactKind::regularity, "an A_p-regularity fact");
    const Fact& threshold = rc.premise(1, FactKind::check, "the reverse Holder threshold check");
    rc.ap_exponent(f);
    const Rational rho = rc.need(rc.args().exponent, "rho");
    rc.require(rho > kOne, "rho must exceed 1");
    rc.require(threshold.tag == "rh-threshold" && threshold.value == rho,
               "no verified threshold admits rho = " + rho.str());
    return regularity(rc, power(f.expr, rho), f.alpha, f.beta, rc.opaque("c_rh") * f.constant,
                      f.norm_factor.pow(rho));
}

Fact rule_l1clp(const RuleContext& rc, [[maybe_unused]] const std::vector<Fact>& p) {
    rc.arity(1);
    const Fact& f = rc.premise(0, FactKind::regularity, "an A_p-regularity fact");
    rc.ap_exponent(f);
    const Rational theta = rc.need(rc.args().theta, "theta");
    rc.require(theta.positive() && theta < kOne, "theta must lie in (0, 1)");
    NormalForm rest;
    rest.mass = kOne - theta;
    return regularity(rc, product(power(f.expr, theta), rest), f.alpha, f.beta, rc.opaque("c_l1clp") * f.constant,
                      rc.opaque("c_l1clp") * f.norm_factor);
}

Fact rule_lozanovsky(const RuleContext& rc, [[maybe_unused]] const std::vector<Fact>& p) {
    rc.arity(1);
    const Fact& f = rc.premise(0, FactKind::regularity, "a regularity fact");
    const Rational theta = rc.need(rc.args().theta, "theta");
    NormalForm contracted;
    try {
        contracted = lozanovsky_contract(f.expr, rc.target(), theta);
    } catch (const FormError& e) {
        rc.fail(e.what());
    }
    return regularity(rc, contracted, f.alpha, f.beta, f.constant, f.norm_factor);
}

Fact rule_btsb(const RuleContext& rc, [[maybe_unused]] const std::vector<Fact>& p) {
    rc.arity(2);
    const Fact& b = rc.premise(0, FactKind::bounded, "a boundedness fact on Y^{1/2}");
    const Fact& n = rc.premise(1, FactKind::nondegenerate, "a nondegeneracy fact");
    rc.require(b.op == n.op, "boundedness and nondegeneracy concern different operators");
    const NormalForm y = power(b.expr, Rational(2));
    rc.require_attribute(y, &Generator::order_continuous, "order continuity");
    return regularity(rc, dual(y), kOne, kOne, rc.opaque("c_btsb") * b.constant.pow(Rational(2)),
                      BoundExpr::symbol("2"));
}

Fact rule_btsbge(const RuleContext& rc, [[maybe_unused]] const std::vector<Fact>& p) {
    rc.arity(3);
    const Fact& b = rc.premise(0, FactKind::bounded, "a boundedness fact on Y^{1/2}");
    const Fact& n = rc.premise(1, FactKind::nondegenerate, "a nondegeneracy fact");
    const Fact& f = rc.premise(2, FactKind::regularity, "an F(alpha,1)-regularity fact for Y′");
    rc.require(b.op == n.op, "boundedness and nondegeneracy concern different operators");
    rc.require(f.alpha.positive() && f.beta == kOne, "Y′ must be F(alpha, 1)-regular with alpha > 0");
    const NormalForm y = dual(f.expr);
    rc.require(power(y, Rational(1, 2)) == b.expr,
               "the bounded lattice " + to_string(b.expr) + " is not Y^{1/2} for Y = " + to_string(y));
    rc.require_attribute(y, &Generator::order_continuous, "order continuity");
    // [w]_A2 <= C_2 ||T||^2: the growth of the norm bound doubles.
    return regularity(rc, f.expr, kOne, kOne, rc.opaque("c_3") * b.constant.pow(Rational(2)),
                      BoundExpr::symbol("m_3"));
}

Fact rule_themcr2(const RuleContext& rc, [[maybe_unused]] const std::vector<Fact>& p) {
    rc.arity(2);
    const Fact& b = rc.premise(0, FactKind::bounded, "a boundedness fact");
    const Fact& n = rc.premise(1, FactKind::nondegenerate, "a nondegeneracy fact");
    rc.require(b.op == n.op, "boundedness and nondegeneracy concern different operators");
    rc.require(inverse_convexity(b.expr, rc.ctx()) <= Rational(1, 2),
               to_string(b.expr) + " is not 2-convex (convexity " + convexity(b.expr, rc.ctx()).str() + ")");
    rc.require_attribute(b.expr, &Generator::order_continuous, "order continuity");
    rc.require_attribute(b.expr, &Generator::fatou, "Fatou");
    const NormalForm e = rc.args().dual_side ? dual(b.expr) : b.expr;
    return regularity(rc, e, kOne, kZero, rc.opaque("c_mcr2") * b.constant.pow(Rational(2)),
                      BoundExpr::symbol("m_mcr2"));
}

Fact rule_interp(const RuleContext& rc, [[maybe_unused]] const std::vector<Fact>& p) {
    rc.arity(2);
    const Fact& b0 = rc.premise(0, FactKind::bounded, "a boundedness fact");
    const Fact& b1 = rc.premise(1, FactKind::bounded, "a boundedness fact");
    rc.require(b0.op == b1.op, "bounds concern different operators");
    const Rational theta = rc.need(rc.args().theta, "theta");
    rc.require(!theta.negative() && theta <= kOne, "theta must lie in [0, 1]");
    NormalForm e;
    if (theta == kOne) {
        e = b0.expr;
    } else if (theta.is_zero()) {
        e = b1.expr;
    } else {
        e = product(power(b0.expr, theta), power(b1.expr, kOne - theta));
    }
    if (rc.args().target) rc.require(equivalent(e, *rc.args().target), "interpolated lattice differs from target");
    return bounded_fact(b0.op, rc.args().subject, e, interp_norm_bound(b0.constant, b1.constant, theta));
}

Fact rule_lebesgue_a1(const RuleContext& rc, [[maybe_unused]] const std::vector<Fact>& p) {
    rc.arity(0);
    const NormalForm& e = rc.target();
    rc.require(e.atoms.empty() && e.mass.positive() && e.mass < kOne, to_string(e) + " is not L^t with 1 < t < ∞");
    return regularity(rc, e, kOne, kZero, rc.opaque("c_M"), BoundExpr::symbol("2"));
}

Fact rule_weaken(const RuleContext& rc, [[maybe_unused]] const std::vector<Fact>& p) {
    rc.arity(1);
    const Fact& f = p[0];
    rc.require(f.kind == FactKind::regularity || f.kind == FactKind::weight_class, "premise must carry an F class");
    const Rational alpha = rc.need(rc.args().gamma, "alpha (passed as gamma)");
    const Rational beta = rc.need(rc.args().theta, "beta (passed as theta)");
    rc.require(alpha >= f.alpha && beta >= f.beta, "weakening must not decrease the indices");
    Fact out = f;
    out.alpha = alpha;
    out.beta = beta;
    if (!rc.args().subject.empty()) out.subject = rc.args().subject;
    return out;
}

Fact rule_rewrite(const RuleContext& rc, [[maybe_unused]] const std::vector<Fact>& p) {
    rc.arity(1);
    const Fact& f = p[0];
    rc.require(f.kind == FactKind::regularity || f.kind == FactKind::bounded, "premise must name a lattice");
    rc.require(equivalent(f.expr, rc.target()), to_string(f.expr) + " and " + to_string(rc.target()) + " differ");
    Fact out = f;
    out.expr = normalize(rc.target());
    out.subject = rc.args().subject;
    return out;
}

using RuleFn = Fact (*)(const RuleContext&, const std::vector<Fact>&);

const std::vector<std::pair<std::string, RuleFn>>& rule_table() {
    static const std::vector<std::pair<std::string, RuleFn>> table = {
        {"power", rule_power},         {"product", rule_product},     {"max", rule_max},
        {"duality", rule_duality},     {"divisibility", rule_divisibility},
        {"aptoconj", rule_aptoconj},   {"a2rdiv", rule_a2rdiv},       {"a1apt", rule_a1apt},
        {"ainfainf", rule_ainfainf},   {"aregrh", rule_aregrh},       {"l1clp", rule_l1clp},
        {"lozanovsky", rule_lozanovsky}, {"btsb-axiom", rule_btsb},   {"btsbge", rule_btsbge},
        {"themcr2", rule_themcr2},     {"interp", rule_interp},       {"lebesgue-a1", rule_lebesgue_a1},
        {"weaken", rule_weaken},       {"rewrite", rule_rewrite},
    };
    return table;
}

}  // namespace

BoundExpr BoundExpr::symbol(const std::string& name, Rational growth) {
    BoundExpr b;
    b.factors[name] = Rational(1);
    b.growth = growth;
    return b;
}

BoundExpr BoundExpr::pow(const Rational& exponent) const {
    BoundExpr out;
    if (exponent.is_zero()) return out;
    for (const auto& [name, e] : factors) out.factors[name] = e * exponent;
    out.growth = growth * exponent;
    return out;
}

BoundExpr operator*(const BoundExpr& a, const BoundExpr& b) {
    BoundExpr out = a;
    for (const auto& [name, e] : b.factors) {
        const Rational sum = out.factors[name] + e;
        if (sum.is_zero()) {
            out.factors.erase(name);
        } else {
            out.factors[name] = sum;
        }
    }
    out.growth += b.growth;
    return out;
}

std::string BoundExpr::str() const {
    std::string out;
    auto append = [&out](const std::string& part) {
        if (!out.empty()) out += "·";
        out += part;
    };
    for (const auto& [name, e] : factors) append(power_text(name, e));
    if (!growth.is_zero()) append(growth == kOne ? "s′" : power_text("(s′)", growth));
    return out.empty() ? "1" : out;
}

BoundExpr interp_norm_bound(const BoundExpr& b1, const BoundExpr& b2, const Rational& theta) {
    if (theta.negative() || theta > kOne) throw DomainError("interpolation parameter must lie in [0, 1]");
    return b1.pow(theta) * b2.pow(kOne - theta);
}

double evaluate(const BoundExpr& b, const std::map<std::string, double>& values, double s_prime) {
    double out = std::pow(s_prime, b.growth.to_double());
    for (const auto& [name, e] : b.factors) {
        double base = 0.0;
        const auto it = values.find(name);
        if (it != values.end()) {
            base = it->second;
        } else {
            try {
                base = parse_rational(name).to_double();
            } catch (const ParseError&) {
                throw DeclarationError("no value for constant " + name);
            }
        }
        out *= std::pow(base, e.to_double());
    }
    return out;
}

std::string class_name(const Rational& alpha, const Rational& beta) {
    if (alpha == kOne) {
        const Rational p = beta + kOne;
        return p.is_integer() ? "A_" + p.str() : "A_{" + p.str() + "}";
    }
    return "F(" + alpha.str() + "," + beta.str() + ")";
}

std::string Fact::subject_text() const { return subject.empty() ? to_string(expr) : subject; }

std::string Fact::str() const {
    switch (kind) {
        case FactKind::regularity: return subject_text() + " " + class_name(alpha, beta) + "-regular";
        case FactKind::bounded: return "‖" + op + "‖ on " + subject_text() + " ≤ " + constant.str();
        case FactKind::nondegenerate: return op + " A_2-nondegenerate";
        case FactKind::weight_class:
            return subject + " ∈ " + class_name(alpha, beta) + " with constant ≤ " + constant.str();
        case FactKind::identity: return subject_text() + " = " + to_string(rhs);
        case FactKind::value:
        case FactKind::check:
        case FactKind::declaration: return text;
    }
    return text;
}

Fact regularity_fact(std::string subject, const NormalForm& expr, Rational alpha, Rational beta, BoundExpr constant,
                     BoundExpr norm_factor) {
    Fact f;
    f.kind = FactKind::regularity;
    f.subject = std::move(subject);
    f.expr = normalize(expr);
    f.alpha = alpha;
    f.beta = beta;
    f.constant = std::move(constant);
    f.norm_factor = std::move(norm_factor);
    return f;
}

Fact weight_fact(std::string subject, Rational alpha, Rational beta, BoundExpr constant) {
    Fact f;
    f.kind = FactKind::weight_class;
    f.subject = std::move(subject);
    f.alpha = alpha;
    f.beta = beta;
    f.constant = std::move(constant);
    return f;
}

Fact bounded_fact(std::string op, std::string subject, const NormalForm& expr, BoundExpr bound) {
    Fact f;
    f.kind = FactKind::bounded;
    f.op = std::move(op);
    f.subject = std::move(subject);
    f.expr = normalize(expr);
    f.constant = std::move(bound);
    return f;
}

Fact nondegenerate_fact(std::string op) {
    Fact f;
    f.kind = FactKind::nondegenerate;
    f.op = std::move(op);
    return f;
}

Fact value_fact(std::string name, Rational value) {
    Fact f;
    f.kind = FactKind::value;
    f.tag = name;
    f.value = value;
    f.text = name + " = " + value.str();
    return f;
}

Fact check_fact(std::string text, std::string tag, Rational value) {
    Fact f;
    f.kind = FactKind::check;
    f.text = std::move(text);
    f.tag = std::move(tag);
    f.value = value;
    return f;
}

Fact identity_fact(std::string subject, const NormalForm& lhs, const NormalForm& rhs) {
    Fact f;
    f.kind = FactKind::identity;
    f.subject = std::move(subject);
    f.expr = normalize(lhs);
    f.rhs = normalize(rhs);
    return f;
}

Fact declaration_fact(const Generator& g) {
    Fact f;
    f.kind = FactKind::declaration;
    std::ostringstream os;
    os << g.name << ": " << g.convexity.str() << "-convex, " << g.concavity.str() << "-concave";
    if (g.fatou) os << ", Fatou";
    if (g.order_continuous) os << ", order continuous";
    f.text = os.str();
    f.subject = g.name;
    return f;
}

const std::vector<std::string>& rule_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> out;
        for (const auto& [name, fn] : rule_table()) out.push_back(name);
        return out;
    }();
    return names;
}

Fact apply_rule(std::string_view rule, const std::vector<Fact>& premises, const RuleArgs& args, const Context& ctx) {
    for (const auto& [name, fn] : rule_table()) {
        if (name == rule) {
            const RuleContext rc(rule, premises, args, ctx);
            try {
                return fn(rc, premises);
            } catch (const FormError& e) {
                rc.fail(e.what());
            } catch (const DeclarationError& e) {
                rc.fail(e.what());
            }
        }
    }
    throw RuleError("unknown rule '" + std::string(rule) + "'");
}

const Fact& DerivationTrace::fact(int id) const {
    if (id < 1 || static_cast<std::size_t>(id) > steps.size()) {
        throw RuleError("reference to unknown step #" + std::to_string(id));
    }
    return steps[static_cast<std::size_t>(id - 1)].fact;
}

std::string DerivationTrace::render() const {
    std::ostringstream os;
    for (const auto& s : steps) {
        os << "#" << s.id << ": " << s.fact.str() << "  [";
        if (s.rule == "axiom") {
            os << "axiom";
        } else {
            os << "rule " << s.rule;
            for (std::size_t i = 0; i < s.premises.size(); ++i) os << (i == 0 ? " from #" : ", #") << s.premises[i];
        }
        os << "]\n";
    }
    if (!ok) os << "FAILED: " << failure << "\n";
    return os.str();
}

Derivation::Derivation(std::string script, Context ctx) : ctx_(std::move(ctx)) { trace_.script = std::move(script); }

int Derivation::push(std::string rule, std::vector<int> premises, Fact fact) {
    const int id = static_cast<int>(trace_.steps.size()) + 1;
    trace_.steps.push_back({id, std::move(rule), std::move(premises), std::move(fact)});
    return id;
}

int Derivation::axiom(Fact fact) { return push("axiom", {}, std::move(fact)); }

int Derivation::derive(const std::string& rule, std::vector<int> premises, const RuleArgs& args) {
    std::vector<Fact> facts;
    for (int id : premises) facts.push_back(trace_.fact(id));
    const int next = static_cast<int>(trace_.steps.size()) + 1;
    try {
        return push(rule, std::move(premises), apply_rule(rule, facts, args, ctx_));
    } catch (const RuleError& e) {
        throw RuleError("step #" + std::to_string(next) + ": " + e.what());
    }
}

int Derivation::value(const std::string& name, const Rational& v) {
    trace_.values[name] = v;
    return push("arith", {}, value_fact(name, v));
}

int Derivation::check(bool holds, const std::string& text, std::vector<int> premises, std::string tag,
                      Rational tagged_value) {
    if (!holds) {
        throw RuleError("step #" + std::to_string(trace_.steps.size() + 1) + ": check failed: " + text);
    }
    return push("check", std::move(premises), check_fact(text, std::move(tag), tagged_value));
}

int Derivation::identity(const std::string& subject, const NormalForm& lhs, const NormalForm& rhs) {
    if (!equivalent(lhs, rhs)) {
        throw RuleError("step #" + std::to_string(trace_.steps.size() + 1) + ": identity fails: " + to_string(lhs) +
                        " vs " + to_string(rhs));
    }
    return push("normalize", {}, identity_fact(subject, lhs, rhs));
}

}  // namespace weightlab
