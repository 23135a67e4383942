#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "weightlab/rational.hpp"

namespace weightlab {

/// Abstract lattice generator with declared p-convexity and q-concavity.
struct Generator {
    std::string name;
    Rational convexity{2};
    Rational concavity{4};
    bool fatou = true;
    bool order_continuous = true;
};

/// Generator declarations; the engine trusts them as axioms.
class Context {
public:
    /// Throws DeclarationError unless 1 < convexity <= concavity.
    void declare(Generator g);
    bool has(const std::string& name) const { return generators_.count(name) != 0; }
    /// Throws DeclarationError for an undeclared name.
    const Generator& get(const std::string& name) const;

private:
    std::map<std::string, Generator> generators_;
};

struct NormalForm;

/// One factor of a normal form: a generator (possibly primed) or the dual of
/// a mass-free normal form that has no generator-level expression.
struct Atom {
    enum class Kind { generator, dual } kind = Kind::generator;
    std::string name;
    bool primed = false;
    std::shared_ptr<const NormalForm> inner;

    /// Canonical text, also the ordering key inside a normal form.
    std::string key() const;
};

/// Product of atoms with positive rational exponents times the Lebesgue
/// factor L^1 raised to `mass` (so (L^t)^a contributes a/t; L^infinity is
/// the empty product).
struct NormalForm {
    std::map<std::string, std::pair<Atom, Rational>> atoms;
    Rational mass{0};

    /// Sum of atom exponents.
    Rational atom_weight() const;
    bool has_dual_atom() const;

    friend bool operator==(const NormalForm& a, const NormalForm& b);
};

/// Expression tree as written; normalize() turns it into a NormalForm.
class Expr {
public:
    enum class Kind { generator, lebesgue, power, product, dual };

    static Expr generator(std::string name);
    /// L^t for t >= 1; nullopt means L^infinity. FormError for t < 1.
    static Expr lebesgue(std::optional<Rational> t);
    static Expr lebesgue_inf() { return lebesgue(std::nullopt); }
    static Expr from(const NormalForm& nf);

    Expr pow(const Rational& exponent) const;
    Expr dual() const;
    friend Expr operator*(const Expr& a, const Expr& b);

    Kind kind() const;

    struct Node;
    const Node& node() const { return *node_; }

private:
    explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
    std::shared_ptr<const Node> node_;
};

struct Expr::Node {
    Kind kind = Kind::generator;
    std::string name;
    std::optional<Rational> t;
    Rational exponent{1};
    std::vector<Expr> children;
    std::optional<NormalForm> literal;
};

NormalForm normalize(const Expr& e);
/// Canonicalizes an already merged form; idempotent.
NormalForm normalize(const NormalForm& nf);

NormalForm power(const NormalForm& nf, const Rational& exponent);
NormalForm product(const NormalForm& a, const NormalForm& b);

/// Koethe dual via the Calderon-Lozanovsky rules. With theta the atom weight
/// and mu the mass: theta + mu <= 1 primes every atom and leaves mass
/// 1 - theta - mu; otherwise, for mu < 1, the result is the dual atom of
/// (atoms)^{1/(1 - mu)} raised to 1 - mu. FormError for mu >= 1 with
/// theta + mu > 1.
NormalForm dual(const NormalForm& nf);
NormalForm dual(const Expr& e);

/// Same lattice: equal normal forms or equal duals.
bool equivalent(const NormalForm& a, const NormalForm& b);

/// 1 / convexity and 1 / concavity, reciprocal-additive over factors. L^t
/// contributes a/t. Primed generators use the conjugates of the declared
/// concavity and convexity. DeclarationError for an undeclared generator.
Rational inverse_convexity(const NormalForm& nf, const Context& ctx);
Rational inverse_concavity(const NormalForm& nf, const Context& ctx);
/// FormError if the expression is infinitely convex (L^infinity).
Rational convexity(const NormalForm& nf, const Context& ctx);

/// Every generator mentioned (at any depth) without the prime.
std::vector<std::string> generator_names(const NormalForm& nf);

/// Removes theta E and theta E' from `nf` and adds L^1 mass theta
/// (E E' = L^1). FormError if a needed exponent is missing.
NormalForm lozanovsky_contract(const NormalForm& nf, const NormalForm& e, const Rational& theta);

/// Display form: "X^{3/4} L^8", "X′", "(X^{12/7})′^{7/8}", "L^∞".
std::string to_string(const NormalForm& nf);
std::string to_string(const Expr& e);

}  // namespace weightlab
