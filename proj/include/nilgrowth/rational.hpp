#ifndef NILGROWTH_RATIONAL_HPP
#define NILGROWTH_RATIONAL_HPP

// Exact rational arithmetic over arbitrary-precision integers. Everything in
// the algebraic layers (Hall bases, BCH, structure constants, volumes) runs
// on these; floating point appears only in rendering and diagnostics.

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <functional>
#include <iterator>
#include <stdexcept>
#include <string>
#include <vector>

namespace nilgrowth {

using BigInt = boost::multiprecision::cpp_int;

inline BigInt big_gcd(BigInt a, BigInt b) { return boost::multiprecision::gcd(a, b); }

inline BigInt big_abs(const BigInt& a) { return a < 0 ? BigInt(-a) : a; }

inline BigInt big_pow(const BigInt& base, unsigned exp) {
    BigInt r = 1, b = base;
    while (exp) {
        if (exp & 1u) r *= b;
        b *= b;
        exp >>= 1u;
    }
    return r;
}

// Floor of a/b for b > 0.
inline BigInt floor_div(const BigInt& a, const BigInt& b) {
    BigInt q = a / b;
    if ((a % b) != 0 && ((a < 0) != (b < 0))) --q;
    return q;
}

inline std::size_t hash_bigint(const BigInt& x) {
    std::vector<std::uint64_t> limbs;
    if (x != 0) boost::multiprecision::export_bits(x, std::back_inserter(limbs), 64);
    std::uint64_t h = x < 0 ? 0x9e3779b97f4a7c15ull : 0x243f6a8885a308d3ull;
    for (std::uint64_t w : limbs) {
        h ^= w + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    }
    return static_cast<std::size_t>(h);
}

class Rational {
public:
    Rational() : num_(0), den_(1) {}
    Rational(long long n) : num_(n), den_(1) {}           // NOLINT: implicit by design
    Rational(BigInt n) : num_(std::move(n)), den_(1) {}   // NOLINT: implicit by design
    Rational(BigInt n, BigInt d) : num_(std::move(n)), den_(std::move(d)) { reduce(); }

    const BigInt& num() const { return num_; }
    const BigInt& den() const { return den_; }

    bool is_zero() const { return num_ == 0; }
    bool is_integer() const { return den_ == 1; }
    int sign() const { return num_ == 0 ? 0 : (num_ < 0 ? -1 : 1); }

    Rational operator-() const { return Rational(unchecked{}, -num_, den_); }

    Rational& operator+=(const Rational& o) {
        num_ = num_ * o.den_ + o.num_ * den_;
        den_ *= o.den_;
        reduce();
        return *this;
    }
    Rational& operator-=(const Rational& o) { return *this += -o; }
    Rational& operator*=(const Rational& o) {
        num_ *= o.num_;
        den_ *= o.den_;
        reduce();
        return *this;
    }
    Rational& operator/=(const Rational& o) {
        if (o.num_ == 0) throw std::domain_error("rational division by zero");
        num_ *= o.den_;
        den_ *= o.num_;
        reduce();
        return *this;
    }

    friend Rational operator+(Rational a, const Rational& b) { return a += b; }
    friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

    friend bool operator==(const Rational& a, const Rational& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
    friend bool operator<(const Rational& a, const Rational& b) {
        return a.num_ * b.den_ < b.num_ * a.den_;
    }
    friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
    friend bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }
    friend bool operator>=(const Rational& a, const Rational& b) { return !(a < b); }

    Rational abs() const { return num_ < 0 ? -*this : *this; }

    Rational pow(unsigned e) const {
        return Rational(unchecked{}, big_pow(num_, e), big_pow(den_, e));
    }

    Rational inverse() const {
        if (num_ == 0) throw std::domain_error("inverse of zero");
        return num_ < 0 ? Rational(unchecked{}, -den_, -num_) : Rational(unchecked{}, den_, num_);
    }

    BigInt floor() const { return floor_div(num_, den_); }

    // Nearest integer, ties to even.
    BigInt round_half_even() const {
        BigInt q = floor();
        Rational frac = *this - Rational(q);
        Rational half(1, 2);
        if (frac > half) return q + 1;
        if (frac < half) return q;
        return (q % 2 == 0) ? q : q + 1;
    }

    double to_double() const {
        return static_cast<double>(boost::multiprecision::cpp_rational(num_, den_));
    }

    std::string str() const {
        std::string s = num_.str();
        if (den_ != 1) s += "/" + den_.str();
        return s;
    }

    // Parses "a" or "a/b" (optionally signed).
    static Rational parse(const std::string& text) {
        auto slash = text.find('/');
        try {
            if (slash == std::string::npos) return Rational(BigInt(text));
            return Rational(BigInt(text.substr(0, slash)), BigInt(text.substr(slash + 1)));
        } catch (const std::exception&) {
            throw std::invalid_argument("bad rational literal: '" + text + "'");
        }
    }

    std::size_t hash() const {
        std::size_t h = hash_bigint(num_);
        h ^= hash_bigint(den_) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
        return h;
    }

private:
    struct unchecked {};
    Rational(unchecked, BigInt n, BigInt d) : num_(std::move(n)), den_(std::move(d)) {}

    void reduce() {
        if (den_ == 0) throw std::domain_error("rational with zero denominator");
        if (den_ < 0) {
            num_ = -num_;
            den_ = -den_;
        }
        if (num_ == 0) {
            den_ = 1;
            return;
        }
        BigInt g = big_gcd(big_abs(num_), den_);
        if (g > 1) {
            num_ /= g;
            den_ /= g;
        }
    }

    BigInt num_;
    BigInt den_;
};

using RationalVector = std::vector<Rational>;

inline std::size_t hash_rational_vector(const RationalVector& v) {
    std::size_t h = 0x2545f4914f6cdd1dull;
    for (const auto& r : v) h ^= r.hash() + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    return h;
}

// Lexicographic order on coordinate vectors; used for canonical element order.
inline bool lex_less(const RationalVector& a, const RationalVector& b) {
    for (std::size_t i = 0; i < a.size() && i < b.size(); ++i) {
        if (a[i] != b[i]) return a[i] < b[i];
    }
    return a.size() < b.size();
}

}  // namespace nilgrowth

template <>
struct std::hash<nilgrowth::Rational> {
    std::size_t operator()(const nilgrowth::Rational& r) const { return r.hash(); }
};

#endif  // NILGROWTH_RATIONAL_HPP
