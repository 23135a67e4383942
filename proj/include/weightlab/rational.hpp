#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace weightlab {

/// Exact fraction num/den with den > 0 and gcd(num, den) = 1. Arithmetic goes
/// through 128-bit intermediates; a result outside int64 throws DomainError.
class Rational {
public:
    constexpr Rational() = default;
    Rational(std::int64_t value) : num_(value), den_(1) {}  // NOLINT: implicit on purpose
    Rational(std::int64_t num, std::int64_t den);

    std::int64_t num() const noexcept { return num_; }
    std::int64_t den() const noexcept { return den_; }

    bool is_zero() const noexcept { return num_ == 0; }
    bool is_integer() const noexcept { return den_ == 1; }
    bool positive() const noexcept { return num_ > 0; }
    bool negative() const noexcept { return num_ < 0; }

    Rational operator-() const;
    Rational reciprocal() const;

    friend Rational operator+(const Rational& a, const Rational& b);
    friend Rational operator-(const Rational& a, const Rational& b);
    friend Rational operator*(const Rational& a, const Rational& b);
    friend Rational operator/(const Rational& a, const Rational& b);
    Rational& operator+=(const Rational& o) { return *this = *this + o; }
    Rational& operator-=(const Rational& o) { return *this = *this - o; }
    Rational& operator*=(const Rational& o) { return *this = *this * o; }
    Rational& operator/=(const Rational& o) { return *this = *this / o; }

    friend bool operator==(const Rational& a, const Rational& b) noexcept {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) noexcept;

    /// "3/2", "2", "-1/4".
    std::string str() const;
    /// Approximation for display and for bridging to numeric code.
    double to_double() const noexcept { return static_cast<double>(num_) / static_cast<double>(den_); }

private:
    std::int64_t num_ = 0;
    std::int64_t den_ = 1;
};

/// a^k for integer k (negative allowed for a != 0).
Rational pow(const Rational& a, int k);
Rational min(const Rational& a, const Rational& b);
Rational max(const Rational& a, const Rational& b);
Rational abs(const Rational& a);
/// Hölder conjugate p / (p - 1); DomainError for p <= 1.
Rational conjugate(const Rational& p);

/// Parses "a", "a/b" with optional sign. Throws ParseError.
Rational parse_rational(std::string_view text);

}  // namespace weightlab
