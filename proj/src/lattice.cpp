#include "weightlab/lattice.hpp"

#include <algorithm>
#include <set>

#include "weightlab/error.hpp"

namespace weightlab {

namespace {

const Rational kZero{0};
const Rational kOne{1};

Atom make_generator(std::string name, bool primed) {
    Atom a;
    a.kind = Atom::Kind::generator;
    a.name = std::move(name);
    a.primed = primed;
    return a;
}

Atom make_dual(NormalForm inner) {
    Atom a;
    a.kind = Atom::Kind::dual;
    a.inner = std::make_shared<const NormalForm>(std::move(inner));
    return a;
}

void add_atom(NormalForm& nf, const Atom& atom, const Rational& exponent) {
    if (exponent.is_zero()) return;
    const std::string key = atom.key();
    auto it = nf.atoms.find(key);
    if (it == nf.atoms.end()) {
        nf.atoms.emplace(key, std::make_pair(atom, exponent));
    } else {
        it->second.second += exponent;
    }
}

NormalForm scale_raw(const NormalForm& nf, const Rational& a) {
    if (!a.positive()) throw FormError("lattice exponents must be positive, got " + a.str());
    NormalForm out;
    for (const auto& [key, entry] : nf.atoms) out.atoms.emplace(key, std::make_pair(entry.first, entry.second * a));
    out.mass = nf.mass * a;
    return out;
}

NormalForm product_raw(const NormalForm& a, const NormalForm& b) {
    NormalForm out = a;
    for (const auto& [key, entry] : b.atoms) add_atom(out, entry.first, entry.second);
    out.mass += b.mass;
    return out;
}

NormalForm canonical(NormalForm nf);

NormalForm dual_raw(const NormalForm& nf) {
    const Rational theta = nf.atom_weight();
    const Rational mu = nf.mass;
    if (theta + mu <= kOne) {
        NormalForm out;
        for (const auto& [key, entry] : nf.atoms) {
            const auto& [atom, a] = entry;
            if (atom.kind == Atom::Kind::generator) {
                add_atom(out, make_generator(atom.name, !atom.primed), a);
            } else {
                out = product_raw(out, scale_raw(*atom.inner, a));
            }
        }
        out.mass += kOne - theta - mu;
        return out;
    }
    if (mu >= kOne) {
        throw FormError("dual undefined: L^1 mass " + mu.str() + " with atom weight " + theta.str());
    }
    NormalForm atoms_only;
    atoms_only.atoms = nf.atoms;
    NormalForm out;
    add_atom(out, make_dual(canonical(scale_raw(atoms_only, (kOne - mu).reciprocal()))), kOne - mu);
    return out;
}

std::size_t dual_atom_count(const NormalForm& nf) {
    return static_cast<std::size_t>(std::count_if(nf.atoms.begin(), nf.atoms.end(), [](const auto& kv) {
        return kv.second.first.kind == Atom::Kind::dual;
    }));
}

/// Rewrites dual atoms into generator form where the L^1 mass allows it,
/// using (Z^s)' = Z'^s (L^1)^{1-s} for Z of atom weight 1, and otherwise
/// folds the remaining mass and atoms into a single dual atom.
NormalForm canonical(NormalForm nf) {
    bool changed = true;
    while (changed) {
        changed = false;
        for (auto it = nf.atoms.begin(); it != nf.atoms.end(); ++it) {
            const auto& [atom, a] = it->second;
            if (atom.kind != Atom::Kind::dual) continue;
            const NormalForm inner = *atom.inner;
            const Rational exponent = a;
            const Rational s = inner.atom_weight();
            if (s + inner.mass <= kOne) {
                nf.atoms.erase(it);
                nf = product_raw(nf, scale_raw(dual_raw(inner), exponent));
                changed = true;
                break;
            }
            if (inner.mass.is_zero() && nf.mass >= exponent * (s - kOne)) {
                nf.atoms.erase(it);
                NormalForm expanded = scale_raw(dual_raw(scale_raw(inner, s.reciprocal())), s * exponent);
                nf = product_raw(nf, expanded);
                nf.mass += exponent * (kOne - s);
                changed = true;
                break;
            }
        }
    }
    if (dual_atom_count(nf) > 0 && (nf.atoms.size() > 1 || nf.mass.positive()) &&
        nf.atom_weight() + nf.mass <= kOne) {
        const NormalForm d = dual_raw(nf);
        if (dual_atom_count(d) == 0) {
            NormalForm folded = dual_raw(d);
            if (folded.atoms.size() == 1 && dual_atom_count(folded) == 1 && folded.mass.is_zero()) return folded;
        }
    }
    return nf;
}

std::string exponent_suffix(const Rational& a) {
    if (a == kOne) return "";
    if (a.is_integer() && a.positive() && a.num() < 10) return "^" + a.str();
    return "^{" + a.str() + "}";
}

void collect_names(const NormalForm& nf, std::set<std::string>& out) {
    for (const auto& [key, entry] : nf.atoms) {
        if (entry.first.kind == Atom::Kind::generator) {
            out.insert(entry.first.name);
        } else {
            collect_names(*entry.first.inner, out);
        }
    }
}

}  // namespace

void Context::declare(Generator g) {
    if (g.name.empty() || g.name == "L") throw DeclarationError("generator name '" + g.name + "' is reserved");
    if (!(g.convexity > kOne) || g.concavity < g.convexity) {
        throw DeclarationError("generator " + g.name + " needs 1 < convexity <= concavity");
    }
    generators_[g.name] = std::move(g);
}

const Generator& Context::get(const std::string& name) const {
    const auto it = generators_.find(name);
    if (it == generators_.end()) throw DeclarationError("generator " + name + " has no convexity declaration");
    return it->second;
}

std::string Atom::key() const {
    if (kind == Kind::generator) return primed ? name + "′" : name;
    return "(" + to_string(*inner) + ")′";
}

Rational NormalForm::atom_weight() const {
    Rational sum{0};
    for (const auto& [key, entry] : atoms) sum += entry.second;
    return sum;
}

bool NormalForm::has_dual_atom() const { return dual_atom_count(*this) > 0; }

bool operator==(const NormalForm& a, const NormalForm& b) {
    if (a.mass != b.mass || a.atoms.size() != b.atoms.size()) return false;
    auto ia = a.atoms.begin();
    auto ib = b.atoms.begin();
    for (; ia != a.atoms.end(); ++ia, ++ib) {
        if (ia->first != ib->first || ia->second.second != ib->second.second) return false;
    }
    return true;
}

Expr Expr::generator(std::string name) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::generator;
    n->name = std::move(name);
    return Expr(n);
}

Expr Expr::lebesgue(std::optional<Rational> t) {
    if (t && *t < kOne) throw FormError("Lebesgue exponent must be at least 1, got " + t->str());
    auto n = std::make_shared<Node>();
    n->kind = Kind::lebesgue;
    n->t = t;
    return Expr(n);
}

Expr Expr::from(const NormalForm& nf) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::product;
    n->literal = nf;
    return Expr(n);
}

Expr Expr::pow(const Rational& exponent) const {
    if (!exponent.positive()) throw FormError("lattice exponents must be positive, got " + exponent.str());
    auto n = std::make_shared<Node>();
    n->kind = Kind::power;
    n->exponent = exponent;
    n->children.push_back(*this);
    return Expr(n);
}

Expr Expr::dual() const {
    auto n = std::make_shared<Node>();
    n->kind = Kind::dual;
    n->children.push_back(*this);
    return Expr(n);
}

Expr operator*(const Expr& a, const Expr& b) {
    auto n = std::make_shared<Expr::Node>();
    n->kind = Expr::Kind::product;
    n->children = {a, b};
    return Expr(n);
}

Expr::Kind Expr::kind() const { return node_->kind; }

NormalForm normalize(const Expr& e) {
    const auto& n = e.node();
    if (n.literal) return normalize(*n.literal);
    switch (n.kind) {
        case Expr::Kind::generator: {
            NormalForm nf;
            add_atom(nf, make_generator(n.name, false), kOne);
            return nf;
        }
        case Expr::Kind::lebesgue: {
            NormalForm nf;
            if (n.t) nf.mass = n.t->reciprocal();
            return nf;
        }
        case Expr::Kind::power: return power(normalize(n.children.front()), n.exponent);
        case Expr::Kind::product: {
            NormalForm nf;
            for (const auto& c : n.children) nf = product_raw(nf, normalize(c));
            return canonical(std::move(nf));
        }
        case Expr::Kind::dual: return dual(normalize(n.children.front()));
    }
    throw FormError("unknown expression node");
}

NormalForm normalize(const NormalForm& nf) {
    for (const auto& [key, entry] : nf.atoms) {
        if (!entry.second.positive()) throw FormError("lattice exponents must be positive in " + key);
    }
    if (nf.mass.negative()) throw FormError("negative L^1 mass");
    return canonical(nf);
}

NormalForm power(const NormalForm& nf, const Rational& exponent) { return canonical(scale_raw(nf, exponent)); }

NormalForm product(const NormalForm& a, const NormalForm& b) { return canonical(product_raw(a, b)); }

NormalForm dual(const NormalForm& nf) { return canonical(dual_raw(normalize(nf))); }

NormalForm dual(const Expr& e) { return dual(normalize(e)); }

bool equivalent(const NormalForm& a, const NormalForm& b) {
    const NormalForm na = normalize(a);
    const NormalForm nb = normalize(b);
    if (na == nb) return true;
    try {
        return dual(na) == dual(nb);
    } catch (const FormError&) {
        return false;
    }
}

Rational inverse_convexity(const NormalForm& nf, const Context& ctx) {
    Rational sum = nf.mass;
    for (const auto& [key, entry] : nf.atoms) {
        const auto& [atom, a] = entry;
        if (atom.kind == Atom::Kind::dual) {
            sum += a * (kOne - inverse_concavity(*atom.inner, ctx));
            continue;
        }
        const Generator& g = ctx.get(atom.name);
        sum += atom.primed ? a * (kOne - g.concavity.reciprocal()) : a * g.convexity.reciprocal();
    }
    return sum;
}

Rational inverse_concavity(const NormalForm& nf, const Context& ctx) {
    Rational sum = nf.mass;
    for (const auto& [key, entry] : nf.atoms) {
        const auto& [atom, a] = entry;
        if (atom.kind == Atom::Kind::dual) {
            sum += a * (kOne - inverse_convexity(*atom.inner, ctx));
            continue;
        }
        const Generator& g = ctx.get(atom.name);
        sum += atom.primed ? a * (kOne - g.convexity.reciprocal()) : a * g.concavity.reciprocal();
    }
    return sum;
}

Rational convexity(const NormalForm& nf, const Context& ctx) {
    const Rational inv = inverse_convexity(nf, ctx);
    if (!inv.positive()) throw FormError(to_string(nf) + " has no finite convexity");
    return inv.reciprocal();
}

std::vector<std::string> generator_names(const NormalForm& nf) {
    std::set<std::string> names;
    collect_names(nf, names);
    return {names.begin(), names.end()};
}

NormalForm lozanovsky_contract(const NormalForm& nf, const NormalForm& e, const Rational& theta) {
    if (!(theta.positive())) throw FormError("Lozanovsky factor needs a positive exponent");
    const NormalForm ne = normalize(e);
    const NormalForm pair = product_raw(scale_raw(ne, theta), scale_raw(dual(ne), theta));
    NormalForm out = normalize(nf);
    for (const auto& [key, entry] : pair.atoms) {
        auto it = out.atoms.find(key);
        if (it == out.atoms.end() || it->second.second < entry.second) {
            throw FormError("factor " + key + exponent_suffix(entry.second) + " missing from " + to_string(nf));
        }
        it->second.second -= entry.second;
        if (it->second.second.is_zero()) out.atoms.erase(it);
    }
    if (out.mass < pair.mass) throw FormError("L^1 mass missing from " + to_string(nf));
    out.mass = out.mass - pair.mass + theta;
    return canonical(std::move(out));
}

std::string to_string(const NormalForm& nf) {
    std::string out;
    auto append = [&out](const std::string& part) {
        if (!out.empty()) out += " ";
        out += part;
    };
    for (const auto& [key, entry] : nf.atoms) append(key + exponent_suffix(entry.second));
    if (nf.mass.positive()) {
        const Rational t = nf.mass.reciprocal();
        append(t.is_integer() ? "L^" + t.str() : "L^{" + t.str() + "}");
    }
    return out.empty() ? "L^∞" : out;
}

std::string to_string(const Expr& e) { return to_string(normalize(e)); }

}  // namespace weightlab
