#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <cstdint>
#include <functional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace quasicross {

/// Exact rational number in lowest terms with a positive denominator.
///
/// Thin value wrapper over GMP's mpq_class. Every constructor canonicalizes,
/// so equality is structural and `str()` is a canonical spelling
/// ("-3/7", "12", "0").
class Rational {
public:
    Rational() = default;
    Rational(long value) : q_(value) {}  // NOLINT(google-explicit-constructor)
    Rational(int value) : q_(static_cast<long>(value)) {}  // NOLINT
    Rational(long long value) : q_(mpz_class(std::to_string(value))) {}  // NOLINT
    Rational(const mpz_class& value) : q_(value) {}  // NOLINT
    explicit Rational(const mpq_class& value) : q_(value) { q_.canonicalize(); }

    Rational(const mpz_class& num, const mpz_class& den) {
        if (den == 0) throw std::domain_error("rational with zero denominator");
        q_ = mpq_class(num, den);
        q_.canonicalize();
    }
    Rational(long num, long den) : Rational(mpz_class(num), mpz_class(den)) {}

    /// Parses `[+-]?digits(/digits)?`. The denominator must be positive.
    static Rational parse(std::string_view text);

    [[nodiscard]] std::string str() const { return q_.get_str(); }
    [[nodiscard]] mpz_class numerator() const { return q_.get_num(); }
    [[nodiscard]] mpz_class denominator() const { return q_.get_den(); }
    [[nodiscard]] int sign() const { return sgn(q_); }
    [[nodiscard]] bool is_integer() const { return q_.get_den() == 1; }
    [[nodiscard]] const mpq_class& raw() const { return q_; }

    [[nodiscard]] mpz_class floor() const {
        mpz_class r;
        mpz_fdiv_q(r.get_mpz_t(), q_.get_num_mpz_t(), q_.get_den_mpz_t());
        return r;
    }
    [[nodiscard]] mpz_class ceil() const {
        mpz_class r;
        mpz_cdiv_q(r.get_mpz_t(), q_.get_num_mpz_t(), q_.get_den_mpz_t());
        return r;
    }
    /// Nearest double; for display and heuristics only, never for decisions.
    [[nodiscard]] double approx() const { return q_.get_d(); }

    Rational& operator+=(const Rational& o) { q_ += o.q_; return *this; }
    Rational& operator-=(const Rational& o) { q_ -= o.q_; return *this; }
    Rational& operator*=(const Rational& o) { q_ *= o.q_; return *this; }
    Rational& operator/=(const Rational& o) {
        if (o.sign() == 0) throw std::domain_error("rational division by zero");
        q_ /= o.q_;
        return *this;
    }

    friend Rational operator+(Rational a, const Rational& b) { return a += b; }
    friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
    friend Rational operator-(const Rational& a) { return Rational(mpq_class(-a.q_)); }

    friend bool operator==(const Rational& a, const Rational& b) { return cmp(a.q_, b.q_) == 0; }
    friend bool operator!=(const Rational& a, const Rational& b) { return cmp(a.q_, b.q_) != 0; }
    friend bool operator<(const Rational& a, const Rational& b) { return cmp(a.q_, b.q_) < 0; }
    friend bool operator>(const Rational& a, const Rational& b) { return cmp(a.q_, b.q_) > 0; }
    friend bool operator<=(const Rational& a, const Rational& b) { return cmp(a.q_, b.q_) <= 0; }
    friend bool operator>=(const Rational& a, const Rational& b) { return cmp(a.q_, b.q_) >= 0; }

    friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

private:
    mpq_class q_{0};
};

inline Rational Rational::parse(std::string_view text) {
    auto bad = [&](const char* why) {
        return std::invalid_argument(std::string(why) + ": \"" + std::string(text) + "\"");
    };
    std::size_t i = 0;
    bool negative = false;
    if (i < text.size() && (text[i] == '+' || text[i] == '-')) {
        negative = text[i] == '-';
        ++i;
    }
    auto digits = [&](std::size_t from) {
        std::size_t j = from;
        while (j < text.size() && text[j] >= '0' && text[j] <= '9') ++j;
        return j;
    };
    std::size_t num_end = digits(i);
    if (num_end == i) throw bad("malformed rational");
    mpz_class num(std::string(text.substr(i, num_end - i)));
    mpz_class den(1);
    if (num_end < text.size()) {
        if (text[num_end] != '/') throw bad("malformed rational");
        std::size_t den_end = digits(num_end + 1);
        if (den_end == num_end + 1 || den_end != text.size()) throw bad("malformed rational");
        den = mpz_class(std::string(text.substr(num_end + 1, den_end - num_end - 1)));
        if (den == 0) throw std::domain_error("zero denominator: \"" + std::string(text) + "\"");
    }
    if (negative) num = -num;
    return Rational(num, den);
}

/// Exact power with a non-negative exponent.
inline Rational pow(const Rational& base, unsigned exponent) {
    mpz_class num, den;
    mpz_pow_ui(num.get_mpz_t(), base.raw().get_num_mpz_t(), exponent);
    mpz_pow_ui(den.get_mpz_t(), base.raw().get_den_mpz_t(), exponent);
    return Rational(num, den);
}

/// Exact value of a finite double (every finite double is dyadic).
inline Rational from_double(double value) {
    mpq_class q(value);
    return Rational(q);
}

inline mpz_class binomial(unsigned long n, unsigned long k) {
    mpz_class r;
    mpz_bin_uiui(r.get_mpz_t(), n, k);
    return r;
}

/// floor(sqrt(x) * 10^digits) / 10^digits for x >= 0, computed with integers.
inline Rational sqrt_floor(const Rational& x, unsigned digits) {
    if (x.sign() < 0) throw std::domain_error("sqrt of negative rational");
    mpz_class scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, digits);
    // sqrt(n/d) * s = sqrt(n * d * s^2) / d
    mpz_class radicand = x.numerator() * x.denominator() * scale * scale;
    mpz_class root;
    mpz_sqrt(root.get_mpz_t(), radicand.get_mpz_t());
    // root / d is the floor-ish value; floor again onto the decimal grid
    mpz_class grid;
    mpz_fdiv_q(grid.get_mpz_t(), root.get_mpz_t(), x.denominator().get_mpz_t());
    return Rational(grid, scale);
}

/// Fixed-point decimal rendering rounded half away from zero, e.g. "12.500".
inline std::string to_decimal(const Rational& x, unsigned digits) {
    mpz_class scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, digits);
    mpz_class scaled_num = abs(x.numerator()) * scale * 2 + x.denominator();
    mpz_class twice_den = x.denominator() * 2;
    mpz_class rounded;
    mpz_fdiv_q(rounded.get_mpz_t(), scaled_num.get_mpz_t(), twice_den.get_mpz_t());
    std::string s = rounded.get_str();
    if (digits > 0) {
        if (s.size() <= digits) s.insert(0, digits + 1 - s.size(), '0');
        s.insert(s.size() - digits, ".");
    }
    if (x.sign() < 0 && rounded != 0) s.insert(0, "-");
    return s;
}

}  // namespace quasicross

template <>
struct std::hash<quasicross::Rational> {
    std::size_t operator()(const quasicross::Rational& r) const noexcept {
        std::size_t h = std::hash<std::string>{}(r.numerator().get_str(16));
        std::size_t g = std::hash<std::string>{}(r.denominator().get_str(16));
        return h ^ (g + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
    }
};
