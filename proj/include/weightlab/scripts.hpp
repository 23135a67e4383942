#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "weightlab/engine.hpp"

namespace weightlab {

/// Indices of the two divisibility premises: XY is F(alpha1, beta1), Y is
/// F(alpha0, beta0); both X and Y are r-convex.
struct FrdivParams {
    Rational alpha1{2};
    Rational beta1{0};
    Rational alpha0{1};
    Rational beta0{1, 2};
    Rational r{3, 2};
};

/// Exponents of the 3 => 1 chain for a given p in (1, 2] and s in (1, p_Y].
struct ChainExponents {
    Rational p;
    Rational r;        ///< (1 + p) / 2
    Rational p_y;      ///< 4p / (3p + 1)
    Rational s;
    Rational s_prime;
    Rational t;        ///< p_Y'
    Rational u;        ///< (2 - r) / (1/s' + 1/t)
};

ChainExponents chain_exponents(const Rational& p, const Rational& s);

/// 2 <= t(3-p)/4 <= u <= t(3-p)/2 <= t, exactly.
bool chain_bounds_hold(const ChainExponents& e);

/// Sum of c4^a (s')^b monomials with rational coefficients.
class GrowthPolynomial {
public:
    static GrowthPolynomial constant(const Rational& c);
    static GrowthPolynomial monomial(const Rational& coeff, const Rational& c4_exp, const Rational& s_exp);

    friend GrowthPolynomial operator+(const GrowthPolynomial& a, const GrowthPolynomial& b);
    friend GrowthPolynomial operator-(const GrowthPolynomial& a, const GrowthPolynomial& b);
    friend GrowthPolynomial operator*(const GrowthPolynomial& a, const GrowthPolynomial& b);
    friend bool operator==(const GrowthPolynomial& a, const GrowthPolynomial& b) = default;

    std::string str() const;

private:
    std::map<std::pair<Rational, Rational>, Rational> terms_;
    void add(const std::pair<Rational, Rational>& key, const Rational& coeff);
};

const std::vector<std::string>& script_names();

DerivationTrace replay_themcr2();
DerivationTrace replay_frdiv(const FrdivParams& params = {});
/// Replays at s = p_Y so that every index is an exact rational; the
/// admissibility of large s' is checked symbolically.
DerivationTrace replay_main_chain(const Rational& p = Rational(2));

/// Dispatch by script name; `p` is used by "main-chain" only. DomainError
/// for an unknown script.
DerivationTrace replay(std::string_view script, std::optional<Rational> p = std::nullopt);

}  // namespace weightlab
