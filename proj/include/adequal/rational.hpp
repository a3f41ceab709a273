#pragma once

/**
 * @file rational.hpp
 * @brief Arbitrary-precision exact rationals, the scalar bedrock.
 *
 * A thin value wrapper around GMP's mpq_class that keeps every value in
 * canonical form (positive denominator, gcd(|num|, den) = 1) and adds the
 * handful of exact predicates the series field and the solvers need.
 */

#include <gmpxx.h>

#include <cstdlib>
#include <optional>
#include <string>
#include <string_view>

#include "adequal/errors.hpp"

namespace adq {

class rational {
public:
    rational() : v_(0) {}
    rational(int n) : v_(n) {}
    rational(long n) : v_(static_cast<signed long>(n)) {}
    rational(long num, long den) {
        if (den == 0) raise(errc::division_by_zero, "rational with zero denominator");
        v_ = mpq_class(num, den);
        v_.canonicalize();
    }
    explicit rational(const mpq_class& q) : v_(q) { v_.canonicalize(); }
    explicit rational(const mpz_class& n) : v_(n) {}

    /// Exact conversion: every finite double is a dyadic rational.
    explicit rational(double d) : v_(d) { v_.canonicalize(); }

    /// Parses "p" or "p/q" with optional leading minus, e.g. "-16/3".
    static rational from_string(std::string_view text) {
        std::string s(text);
        if (s.empty()) raise(errc::syntax_error, "empty rational literal");
        mpq_class q;
        if (q.set_str(s, 10) != 0)
            raise(errc::syntax_error, "invalid rational literal '" + s + "'");
        if (q.get_den() == 0) raise(errc::division_by_zero, "rational with zero denominator");
        q.canonicalize();
        return rational(q);
    }

    const mpz_class numerator() const { return v_.get_num(); }
    const mpz_class denominator() const { return v_.get_den(); }

    bool is_zero() const { return sgn(v_) == 0; }
    bool is_one() const { return v_ == 1; }
    bool is_integer() const { return v_.get_den() == 1; }
    int sign() const { return sgn(v_); }

    rational operator-() const { return rational(mpq_class(-v_)); }
    rational& operator+=(const rational& o) { v_ += o.v_; return *this; }
    rational& operator-=(const rational& o) { v_ -= o.v_; return *this; }
    rational& operator*=(const rational& o) { v_ *= o.v_; return *this; }
    rational& operator/=(const rational& o) {
        if (o.is_zero()) raise(errc::division_by_zero, "rational division by zero");
        v_ /= o.v_;
        return *this;
    }

    friend rational operator+(rational a, const rational& b) { return a += b; }
    friend rational operator-(rational a, const rational& b) { return a -= b; }
    friend rational operator*(rational a, const rational& b) { return a *= b; }
    friend rational operator/(rational a, const rational& b) { return a /= b; }

    friend bool operator==(const rational& a, const rational& b) { return a.v_ == b.v_; }
    friend bool operator!=(const rational& a, const rational& b) { return a.v_ != b.v_; }
    friend bool operator<(const rational& a, const rational& b) { return a.v_ < b.v_; }
    friend bool operator<=(const rational& a, const rational& b) { return a.v_ <= b.v_; }
    friend bool operator>(const rational& a, const rational& b) { return a.v_ > b.v_; }
    friend bool operator>=(const rational& a, const rational& b) { return a.v_ >= b.v_; }

    rational abs() const { return sign() < 0 ? -*this : *this; }

    rational inverse() const {
        if (is_zero()) raise(errc::division_by_zero, "inverse of zero");
        return rational(mpq_class(1) / v_);
    }

    rational pow(int k) const {
        if (k == 0) return rational(1);
        rational base = k < 0 ? inverse() : *this;
        unsigned long e = k < 0 ? static_cast<unsigned long>(-static_cast<long>(k))
                                : static_cast<unsigned long>(k);
        mpz_class num, den;
        mpz_pow_ui(num.get_mpz_t(), base.v_.get_num().get_mpz_t(), e);
        mpz_pow_ui(den.get_mpz_t(), base.v_.get_den().get_mpz_t(), e);
        return rational(mpq_class(num, den));
    }

    /// Exact square root, when one exists in the rationals.
    std::optional<rational> exact_sqrt() const {
        if (sign() < 0) return std::nullopt;
        if (is_zero()) return rational(0);
        const mpz_class num = v_.get_num(), den = v_.get_den();
        if (!mpz_perfect_square_p(num.get_mpz_t()) || !mpz_perfect_square_p(den.get_mpz_t()))
            return std::nullopt;
        mpz_class rn, rd;
        mpz_sqrt(rn.get_mpz_t(), num.get_mpz_t());
        mpz_sqrt(rd.get_mpz_t(), den.get_mpz_t());
        return rational(mpq_class(rn, rd));
    }

    double to_double() const { return v_.get_d(); }

    std::string to_string() const { return v_.get_str(); }

    const mpq_class& raw() const { return v_; }

private:
    mpq_class v_;
};

inline rational abs(const rational& q) { return q.abs(); }

} // namespace adq
