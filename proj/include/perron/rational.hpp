#ifndef PERRON_RATIONAL_HPP
#define PERRON_RATIONAL_HPP

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <string_view>

#include "perron/errors.hpp"

namespace perron {

/// Arbitrary-precision integer, used for digits, r-values and products.
using BigInt = mpz_class;

/// Exact reduced fraction with positive denominator; the sole numeric
/// carrier for all expansion algebra. Backed by GMP's mpq, which keeps
/// the gcd = 1 / den > 0 invariants on every operation.
class Rational {
public:
    Rational() : q_(0) {}
    Rational(long n) : q_(n) {} // NOLINT(google-explicit-constructor)
    explicit Rational(const BigInt& n) : q_(n) {}
    Rational(const BigInt& num, const BigInt& den) {
        if (den == 0) throw validation_error("zero denominator");
        q_ = mpq_class(num, den);
        q_.canonicalize();
    }

    /// m / 2^bits — an exact dyadic sample point.
    static Rational dyadic(const BigInt& m, unsigned bits) {
        BigInt den = 1;
        mpz_mul_2exp(den.get_mpz_t(), den.get_mpz_t(), bits);
        return Rational(m, den);
    }

    /// Accepts "num/den" or a bare integer; whitespace is not allowed.
    static Rational parse(std::string_view text);

    /// 1 / 2^bits.
    static Rational pow2_inverse(unsigned bits) { return dyadic(1, bits); }

    BigInt num() const { return q_.get_num(); }
    BigInt den() const { return q_.get_den(); }

    bool is_zero() const { return sgn(q_) == 0; }
    bool is_integer() const { return q_.get_den() == 1; }
    int sign() const { return sgn(q_); }

    /// ⌊·⌋ (towards −∞).
    BigInt floor() const {
        BigInt out;
        mpz_fdiv_q(out.get_mpz_t(), q_.get_num().get_mpz_t(), q_.get_den().get_mpz_t());
        return out;
    }

    Rational abs() const {
        Rational out(*this);
        mpq_abs(out.q_.get_mpq_t(), q_.get_mpq_t());
        return out;
    }

    Rational& operator+=(const Rational& o) { q_ += o.q_; return *this; }
    Rational& operator-=(const Rational& o) { q_ -= o.q_; return *this; }
    Rational& operator*=(const Rational& o) { q_ *= o.q_; return *this; }
    Rational& operator/=(const Rational& o) {
        if (o.is_zero()) throw validation_error("division by zero");
        q_ /= o.q_;
        return *this;
    }

    friend Rational operator+(Rational a, const Rational& b) { return a += b; }
    friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
    friend Rational operator-(const Rational& a) { Rational r; r.q_ = -a.q_; return r; }

    friend bool operator==(const Rational& a, const Rational& b) { return a.q_ == b.q_; }
    friend bool operator!=(const Rational& a, const Rational& b) { return a.q_ != b.q_; }
    friend bool operator<(const Rational& a, const Rational& b) { return a.q_ < b.q_; }
    friend bool operator<=(const Rational& a, const Rational& b) { return a.q_ <= b.q_; }
    friend bool operator>(const Rational& a, const Rational& b) { return a.q_ > b.q_; }
    friend bool operator>=(const Rational& a, const Rational& b) { return a.q_ >= b.q_; }

    /// Canonical "num/den" form, denominator always spelled out ("0/1", "3/1").
    std::string str() const { return q_.get_num().get_str() + "/" + q_.get_den().get_str(); }

    double to_double() const { return q_.get_d(); }

private:
    mpq_class q_;
};

/// Number of bits in |z| (0 for z = 0).
std::size_t bit_length(const BigInt& z);

/// Natural log of a positive big integer, computed from the top 64 bits of
/// the mantissa in long double (>= 64-bit significand on x86-64).
long double log_approx(const BigInt& z);

/// Natural log of a positive rational.
long double log_approx(const Rational& x);

} // namespace perron

#endif
