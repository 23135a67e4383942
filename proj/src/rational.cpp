#include "weightlab/rational.hpp"

#include <charconv>
#include <limits>
#include <numeric>

#include "weightlab/error.hpp"

namespace weightlab {

namespace {

using Wide = __int128;

std::int64_t narrow(Wide v) {
    if (v > std::numeric_limits<std::int64_t>::max() || v < std::numeric_limits<std::int64_t>::min()) {
        throw DomainError("rational arithmetic overflow");
    }
    return static_cast<std::int64_t>(v);
}

Wide wide_gcd(Wide a, Wide b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b != 0) {
        const Wide t = a % b;
        a = b;
        b = t;
    }
    return a;
}

Rational reduce(Wide num, Wide den) {
    if (den == 0) throw DomainError("rational division by zero");
    if (den < 0) {
        num = -num;
        den = -den;
    }
    const Wide g = wide_gcd(num, den);
    if (g > 1) {
        num /= g;
        den /= g;
    }
    return Rational(narrow(num), narrow(den));
}

}  // namespace

Rational::Rational(std::int64_t num, std::int64_t den) {
    if (den == 0) throw DomainError("rational with zero denominator");
    if (den < 0) {
        if (num == std::numeric_limits<std::int64_t>::min() || den == std::numeric_limits<std::int64_t>::min()) {
            throw DomainError("rational arithmetic overflow");
        }
        num = -num;
        den = -den;
    }
    const std::int64_t g = std::gcd(num, den);
    num_ = g > 1 ? num / g : num;
    den_ = g > 1 ? den / g : den;
}

Rational Rational::operator-() const { return reduce(-static_cast<Wide>(num_), den_); }

Rational Rational::reciprocal() const {
    if (num_ == 0) throw DomainError("reciprocal of zero");
    return reduce(den_, num_);
}

Rational operator+(const Rational& a, const Rational& b) {
    return reduce(static_cast<Wide>(a.num_) * b.den_ + static_cast<Wide>(b.num_) * a.den_,
                  static_cast<Wide>(a.den_) * b.den_);
}

Rational operator-(const Rational& a, const Rational& b) {
    return reduce(static_cast<Wide>(a.num_) * b.den_ - static_cast<Wide>(b.num_) * a.den_,
                  static_cast<Wide>(a.den_) * b.den_);
}

Rational operator*(const Rational& a, const Rational& b) {
    return reduce(static_cast<Wide>(a.num_) * b.num_, static_cast<Wide>(a.den_) * b.den_);
}

Rational operator/(const Rational& a, const Rational& b) {
    if (b.num_ == 0) throw DomainError("rational division by zero");
    return reduce(static_cast<Wide>(a.num_) * b.den_, static_cast<Wide>(a.den_) * b.num_);
}

std::strong_ordering operator<=>(const Rational& a, const Rational& b) noexcept {
    const Wide l = static_cast<Wide>(a.num_) * b.den_;
    const Wide r = static_cast<Wide>(b.num_) * a.den_;
    if (l < r) return std::strong_ordering::less;
    if (l > r) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
}

std::string Rational::str() const {
    if (den_ == 1) return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(den_);
}

Rational pow(const Rational& a, int k) {
    if (k < 0) return pow(a.reciprocal(), -k);
    Rational result(1);
    Rational base = a;
    while (k > 0) {
        if (k & 1) result *= base;
        k >>= 1;
        if (k > 0) base *= base;
    }
    return result;
}

Rational min(const Rational& a, const Rational& b) { return b < a ? b : a; }
Rational max(const Rational& a, const Rational& b) { return a < b ? b : a; }
Rational abs(const Rational& a) { return a.negative() ? -a : a; }

Rational conjugate(const Rational& p) {
    if (!(p > Rational(1))) throw DomainError("conjugate exponent needs p > 1");
    return p / (p - Rational(1));
}

Rational parse_rational(std::string_view text) {
    auto parse_int = [&](std::string_view part) {
        std::int64_t v = 0;
        const char* first = part.data();
        const char* last = part.data() + part.size();
        if (!part.empty() && *first == '+') ++first;
        const auto [ptr, ec] = std::from_chars(first, last, v);
        if (part.empty() || ec != std::errc() || ptr != last) {
            throw ParseError("not a rational number: '" + std::string(text) + "'");
        }
        return v;
    };
    const auto slash = text.find('/');
    if (slash == std::string_view::npos) return Rational(parse_int(text));
    const std::int64_t den = parse_int(text.substr(slash + 1));
    if (den == 0) throw ParseError("zero denominator in '" + std::string(text) + "'");
    return Rational(parse_int(text.substr(0, slash)), den);
}

}  // namespace weightlab
