#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "weightlab/lattice.hpp"
#include "weightlab/rational.hpp"

namespace weightlab {

/// Opaque constant monomial: product of symbols raised to rational powers
/// times (s')^growth. A symbol spelled as a number ("2") stands for itself.
struct BoundExpr {
    std::map<std::string, Rational> factors;
    Rational growth{0};

    static BoundExpr one() { return {}; }
    static BoundExpr symbol(const std::string& name, Rational growth = Rational(0));

    BoundExpr pow(const Rational& exponent) const;
    friend BoundExpr operator*(const BoundExpr& a, const BoundExpr& b);
    friend bool operator==(const BoundExpr& a, const BoundExpr& b) = default;

    std::string str() const;
};

/// b1^theta b2^(1-theta); growth exponents combine linearly. DomainError
/// unless 0 <= theta <= 1.
BoundExpr interp_norm_bound(const BoundExpr& b1, const BoundExpr& b2, const Rational& theta);

/// Numeric value with the given symbol values and s' value. Numeric symbols
/// evaluate to themselves; a missing symbol throws DeclarationError.
double evaluate(const BoundExpr& b, const std::map<std::string, double>& values, double s_prime = 1.0);

enum class FactKind {
    declaration,     ///< generator axioms
    regularity,      ///< lattice is F(alpha, beta)-regular with constants (C, m)
    bounded,         ///< operator bounded on a lattice with a norm bound
    nondegenerate,   ///< operator is A_2-nondegenerate
    weight_class,    ///< a weight lies in F(alpha, beta) with constant C
    value,           ///< named exact exponent
    check,           ///< verified exact condition
    identity,        ///< two lattice expressions coincide
};

struct Fact {
    FactKind kind = FactKind::check;
    std::string subject;          ///< display name; empty means print the normal form
    NormalForm expr;
    Rational alpha{0};
    Rational beta{0};
    BoundExpr constant;           ///< C, or the operator norm bound
    BoundExpr norm_factor;        ///< m
    std::string op;               ///< operator name
    NormalForm rhs;               ///< identity right-hand side
    std::string text;             ///< value, check and declaration text
    std::string tag;              ///< machine-readable check tag
    Rational value{0};            ///< value facts and tagged checks

    std::string subject_text() const;
    /// "X′ A_2-regular", "Y′ F(2,1)-regular", "‖T‖ on X ≤ c_X", ...
    std::string str() const;
};

/// "A_1", "A_{5/2}" for alpha = 1, otherwise "F(2,1)".
std::string class_name(const Rational& alpha, const Rational& beta);

Fact regularity_fact(std::string subject, const NormalForm& expr, Rational alpha, Rational beta,
                     BoundExpr constant = BoundExpr::symbol("C"), BoundExpr norm_factor = BoundExpr::symbol("m"));
Fact weight_fact(std::string subject, Rational alpha, Rational beta, BoundExpr constant);
Fact bounded_fact(std::string op, std::string subject, const NormalForm& expr, BoundExpr bound);
Fact nondegenerate_fact(std::string op);
Fact value_fact(std::string name, Rational value);
Fact check_fact(std::string text, std::string tag = {}, Rational value = Rational(0));
Fact identity_fact(std::string subject, const NormalForm& lhs, const NormalForm& rhs);
Fact declaration_fact(const Generator& g);

struct RuleArgs {
    std::optional<Rational> gamma;     ///< power rule exponent
    std::optional<Rational> theta;     ///< interpolation / l1clp / lozanovsky parameter
    std::optional<Rational> exponent;  ///< aregrh exponent rho, a1apt delta
    std::optional<NormalForm> target;  ///< expression named by the conclusion
    std::string subject;               ///< display name of the conclusion
    std::string symbol;                ///< opaque constant introduced by the rule
    bool dual_side = true;             ///< themcr2: conclude for W' (true) or W (false)
};

/// Rule names accepted by apply_rule.
const std::vector<std::string>& rule_names();

/// Applies one named rule. Throws RuleError naming the failed pattern or
/// side condition; all index arithmetic is exact.
Fact apply_rule(std::string_view rule, const std::vector<Fact>& premises, const RuleArgs& args, const Context& ctx);

struct TraceStep {
    int id = 0;
    std::string rule;            ///< "axiom" for assumptions
    std::vector<int> premises;
    Fact fact;
};

struct DerivationTrace {
    std::string script;
    std::vector<TraceStep> steps;
    std::map<std::string, Rational> values;
    bool ok = true;
    std::string failure;

    const Fact& fact(int id) const;
    const Fact& final_fact() const { return steps.back().fact; }
    /// One line per step: "#k: <fact>  [rule <name> from #i, #j]".
    std::string render() const;
};

/// Incremental builder; each derived step goes through apply_rule.
class Derivation {
public:
    Derivation(std::string script, Context ctx);

    int axiom(Fact fact);
    int derive(const std::string& rule, std::vector<int> premises, const RuleArgs& args = {});
    /// Records an exact value or verified condition (rule "arith" / "check").
    int value(const std::string& name, const Rational& v);
    /// Throws RuleError with `text` if `holds` is false.
    int check(bool holds, const std::string& text, std::vector<int> premises = {}, std::string tag = {},
              Rational tagged_value = Rational(0));
    int identity(const std::string& subject, const NormalForm& lhs, const NormalForm& rhs);

    const Context& context() const { return ctx_; }
    const Fact& fact(int id) const { return trace_.fact(id); }
    DerivationTrace& trace() { return trace_; }

private:
    int push(std::string rule, std::vector<int> premises, Fact fact);

    Context ctx_;
    DerivationTrace trace_;
};

}  // namespace weightlab
