#pragma once

/**
 * @file rational_function.hpp
 * @brief Univariate rational functions in normal form.
 *
 * Quotients of polynomials in one variable (by default the subtangent
 * unknown t), kept gcd-reduced with a monic denominator. They form a field
 * and satisfy coefficient_field, so a series can be built over them; that is
 * how the subtangent solver carries the unknown t through the infinitesimal
 * expansion.
 */

#include <string>
#include <utility>

#include "adequal/polynomial.hpp"

namespace adq {

class rational_function {
public:
    rational_function() : rational_function(polynomial::constant(rational(0))) {}
    rational_function(int n) : rational_function(polynomial::constant(rational(n))) {}
    explicit rational_function(const rational& q)
        : rational_function(polynomial::constant(q)) {}
    explicit rational_function(polynomial num)
        : num_(std::move(num)), den_(polynomial::constant(rational(1), num_.var())) {}
    rational_function(polynomial num, polynomial den) : num_(std::move(num)), den_(std::move(den)) {
        normalize();
    }

    static rational_function variable(std::string var = "t") {
        return rational_function(polynomial::variable(std::move(var)));
    }

    const polynomial& numerator() const { return num_; }
    const polynomial& denominator() const { return den_; }
    bool is_zero() const { return num_.is_zero(); }
    bool is_polynomial() const { return den_.degree() == 0; }

    rational_function operator-() const { return rational_function(-num_, den_); }

    friend rational_function operator+(const rational_function& a, const rational_function& b) {
        return rational_function(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
    }
    friend rational_function operator-(const rational_function& a, const rational_function& b) {
        return a + (-b);
    }
    friend rational_function operator*(const rational_function& a, const rational_function& b) {
        return rational_function(a.num_ * b.num_, a.den_ * b.den_);
    }
    friend rational_function operator/(const rational_function& a, const rational_function& b) {
        if (b.is_zero()) raise(errc::division_by_zero, "rational function division by zero");
        return rational_function(a.num_ * b.den_, a.den_ * b.num_);
    }

    friend bool operator==(const rational_function& a, const rational_function& b) {
        return a.num_ == b.num_ && a.den_ == b.den_; // both in normal form
    }
    friend bool operator!=(const rational_function& a, const rational_function& b) {
        return !(a == b);
    }

    /// Grammar-conformant rendering, e.g. "(8 - 4*t)/t" or "4/t^2".
    std::string to_string() const {
        if (is_polynomial()) return num_.to_string(); // monic constant denominator is 1
        std::string n = num_.to_string();
        if (needs_paren(n, false)) n = "(" + n + ")";
        std::string d = den_.to_string();
        if (needs_paren(d, true)) d = "(" + d + ")";
        return n + "/" + d;
    }

private:
    // A rendered operand needs parentheses in a quotient when it is a sum or
    // (for the divisor) a product, or carries a leading minus.
    static bool needs_paren(const std::string& s, bool divisor) {
        if (!s.empty() && s[0] == '-') return true;
        for (char ch : s) {
            if (ch == ' ') return true;
            if (divisor && (ch == '*' || ch == '/')) return true;
        }
        return false;
    }

    void normalize() {
        if (den_.is_zero()) raise(errc::division_by_zero, "rational function with zero denominator");
        if (num_.is_zero()) {
            den_ = polynomial::constant(rational(1), den_.var());
            return;
        }
        const polynomial g = gcd(num_, den_);
        if (g.degree() > 0) {
            num_ = num_.divmod(g).first;
            den_ = den_.divmod(g).first;
        }
        const rational lead = den_.leading();
        if (!lead.is_one()) {
            num_ = num_ * lead.inverse();
            den_ = den_ * lead.inverse();
        }
    }

    polynomial num_;
    polynomial den_;
};

} // namespace adq
