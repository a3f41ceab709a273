#pragma once

/**
 * @file multipoly.hpp
 * @brief Sparse multivariate polynomials and formal quotients over rationals.
 *
 * The solver pipeline and the derivation checker both manipulate expressions
 * in several symbols at once (the unknown, parameters, the infinitesimal E,
 * the subtangent t). This header supplies the exact normal forms they share:
 * multipoly for expanded polynomials and multirat for quotients kept as
 * unreduced numerator/denominator pairs, compared by cross-multiplication so
 * no multivariate gcd is ever needed.
 */

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "adequal/expr.hpp"
#include "adequal/polynomial.hpp"
#include "adequal/rational.hpp"
#include "adequal/series.hpp"

namespace adq {

class multipoly {
public:
    /// Variable name -> positive exponent.
    using monomial = std::map<std::string, int>;

    multipoly() = default;

    static multipoly constant(const rational& q) {
        multipoly p;
        if (!q.is_zero()) p.terms_.emplace(monomial{}, q);
        return p;
    }
    static multipoly variable(const std::string& name) {
        multipoly p;
        p.terms_.emplace(monomial{{name, 1}}, rational(1));
        return p;
    }

    const std::map<monomial, rational>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    bool is_constant() const {
        return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.empty());
    }
    rational constant_value() const {
        return terms_.empty() ? rational(0) : terms_.begin()->second;
    }

    std::set<std::string> variables() const {
        std::set<std::string> vs;
        for (const auto& [m, c] : terms_)
            for (const auto& [v, k] : m) vs.insert(v);
        return vs;
    }

    multipoly operator-() const {
        multipoly r;
        for (const auto& [m, c] : terms_) r.terms_.emplace(m, -c);
        return r;
    }

    friend multipoly operator+(const multipoly& a, const multipoly& b) {
        multipoly r = a;
        for (const auto& [m, c] : b.terms_) r.add_term(m, c);
        return r;
    }
    friend multipoly operator-(const multipoly& a, const multipoly& b) { return a + (-b); }
    friend multipoly operator*(const multipoly& a, const multipoly& b) {
        multipoly r;
        for (const auto& [ma, ca] : a.terms_) {
            for (const auto& [mb, cb] : b.terms_) {
                monomial m = ma;
                for (const auto& [v, k] : mb) m[v] += k;
                r.add_term(m, ca * cb);
            }
        }
        return r;
    }
    friend multipoly operator*(const multipoly& a, const rational& s) {
        multipoly r;
        if (s.is_zero()) return r;
        for (const auto& [m, c] : a.terms_) r.terms_.emplace(m, c * s);
        return r;
    }

    multipoly pow(int k) const {
        if (k < 0) raise(errc::not_polynomial, "negative power of a non-constant");
        multipoly r = constant(rational(1));
        for (int i = 0; i < k; ++i) r = r * *this;
        return r;
    }

    friend bool operator==(const multipoly& a, const multipoly& b) { return a.terms_ == b.terms_; }
    friend bool operator!=(const multipoly& a, const multipoly& b) { return !(a == b); }

    static int exponent_of(const monomial& m, const std::string& var) {
        auto it = m.find(var);
        return it == m.end() ? 0 : it->second;
    }

    /// Lowest exponent of `var` across all terms; val_infinity for zero.
    int valuation(const std::string& var) const {
        if (terms_.empty()) return val_infinity;
        int v = val_infinity;
        for (const auto& [m, c] : terms_) v = std::min(v, exponent_of(m, var));
        return v;
    }

    int degree(const std::string& var) const {
        int d = 0;
        for (const auto& [m, c] : terms_) d = std::max(d, exponent_of(m, var));
        return d;
    }

    /// Exact division by var^k; every term must carry at least var^k.
    multipoly divide_by_power(const std::string& var, int k) const {
        multipoly r;
        for (const auto& [m, c] : terms_) {
            const int e = exponent_of(m, var);
            if (e < k) raise(errc::not_polynomial, "inexact division by " + var + "^" +
                                                       std::to_string(k));
            monomial n = m;
            if (e == k)
                n.erase(var);
            else
                n[var] = e - k;
            r.terms_.emplace(n, c);
        }
        return r;
    }

    /// Sets var to zero: keeps only terms free of var.
    multipoly substitute_zero(const std::string& var) const {
        multipoly r;
        for (const auto& [m, c] : terms_)
            if (exponent_of(m, var) == 0) r.terms_.emplace(m, c);
        return r;
    }

    /// Sets var to a rational value.
    multipoly substitute(const std::string& var, const rational& value) const {
        multipoly r;
        for (const auto& [m, c] : terms_) {
            const int e = exponent_of(m, var);
            monomial n = m;
            n.erase(var);
            r.add_term(n, c * value.pow(e));
        }
        return r;
    }

    multipoly derivative(const std::string& var) const {
        multipoly r;
        for (const auto& [m, c] : terms_) {
            const int e = exponent_of(m, var);
            if (e == 0) continue;
            monomial n = m;
            if (e == 1)
                n.erase(var);
            else
                n[var] = e - 1;
            r.add_term(n, c * rational(e));
        }
        return r;
    }

    /// Splits into (positive-coefficient part, negated negative part); both
    /// results carry only positive coefficients.
    std::pair<multipoly, multipoly> split_by_sign() const {
        multipoly pos, neg;
        for (const auto& [m, c] : terms_) {
            if (c.sign() > 0)
                pos.terms_.emplace(m, c);
            else
                neg.terms_.emplace(m, -c);
        }
        return {pos, neg};
    }

    /// Dense univariate image; every term must involve only `var`.
    polynomial to_polynomial(const std::string& var) const {
        std::vector<rational> c(std::size_t(degree(var)) + 1, rational(0));
        for (const auto& [m, q] : terms_) {
            for (const auto& [v, k] : m)
                if (v != var)
                    raise(errc::not_polynomial, "stray variable '" + v + "' in univariate image");
            c[std::size_t(exponent_of(m, var))] += q;
        }
        return polynomial(var, std::move(c));
    }

    expr to_expr() const;

private:
    void add_term(const monomial& m, const rational& c) {
        if (c.is_zero()) return;
        auto it = terms_.find(m);
        if (it == terms_.end()) {
            terms_.emplace(m, c);
        } else {
            it->second += c;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }

    std::map<monomial, rational> terms_;
};

namespace detail {

// Display order: E-degree ascending, then degree in the remaining symbols
// ascending, then lexicographic; inside a monomial E renders last.
inline bool display_before(const multipoly::monomial& a, const multipoly::monomial& b) {
    const int ea = multipoly::exponent_of(a, "E"), eb = multipoly::exponent_of(b, "E");
    if (ea != eb) return ea < eb;
    int ra = 0, rb = 0;
    for (const auto& [v, k] : a)
        if (v != "E") ra += k;
    for (const auto& [v, k] : b)
        if (v != "E") rb += k;
    if (ra != rb) return ra < rb;
    return a < b;
}

inline expr monomial_to_expr(const multipoly::monomial& m, const rational& coeff_mag) {
    std::vector<std::pair<std::string, int>> parts(m.begin(), m.end());
    std::stable_sort(parts.begin(), parts.end(), [](const auto& x, const auto& y) {
        const bool xe = x.first == "E", ye = y.first == "E";
        if (xe != ye) return ye; // E last
        return x.first < y.first;
    });
    expr acc;
    if (!coeff_mag.is_one() || parts.empty()) acc = make_const(coeff_mag);
    for (const auto& [v, k] : parts) {
        expr f = make_pow(make_var(v), k);
        acc = acc ? make_mul(acc, f) : f;
    }
    return acc;
}

} // namespace detail

/// Canonical expression image of the polynomial (see detail::display_before).
inline expr multipoly::to_expr() const {
    if (terms_.empty()) return make_const(rational(0));
    std::vector<std::pair<monomial, rational>> ts(terms_.begin(), terms_.end());
    std::stable_sort(ts.begin(), ts.end(), [](const auto& x, const auto& y) {
        return detail::display_before(x.first, y.first);
    });
    expr acc;
    for (const auto& [m, c] : ts) {
        const bool neg = c.sign() < 0;
        if (!acc) {
            // Leading term keeps its sign inside the coefficient.
            acc = detail::monomial_to_expr(m, c);
        } else {
            expr term = detail::monomial_to_expr(m, neg ? -c : c);
            acc = neg ? make_sub(acc, term) : make_add(acc, term);
        }
    }
    return acc;
}

/**
 * Strict polynomial image of an expression: division is admitted only by
 * nonzero rational constants, negative powers only of nonzero constants,
 * and analytic functions not at all.
 */
inline multipoly expr_to_multipoly(const expr& e) {
    if (const auto* c = as<const_node>(e)) return multipoly::constant(c->value);
    if (const auto* v = as<var_node>(e)) return multipoly::variable(v->name);
    if (const auto* n = as<add_node>(e))
        return expr_to_multipoly(n->lhs) + expr_to_multipoly(n->rhs);
    if (const auto* n = as<sub_node>(e))
        return expr_to_multipoly(n->lhs) - expr_to_multipoly(n->rhs);
    if (const auto* n = as<mul_node>(e))
        return expr_to_multipoly(n->lhs) * expr_to_multipoly(n->rhs);
    if (const auto* n = as<div_node>(e)) {
        const multipoly den = expr_to_multipoly(n->rhs);
        if (!den.is_constant())
            raise(errc::not_polynomial, "division by a non-constant expression");
        const rational d = den.constant_value();
        if (d.is_zero()) raise(errc::division_by_zero, "division by zero");
        return expr_to_multipoly(n->lhs) * d.inverse();
    }
    if (const auto* n = as<pow_node>(e)) {
        const multipoly base = expr_to_multipoly(n->base);
        if (n->exponent < 0) {
            if (!base.is_constant())
                raise(errc::not_polynomial, "negative power of a non-constant expression");
            const rational b = base.constant_value();
            if (b.is_zero()) raise(errc::division_by_zero, "zero to a negative power");
            return multipoly::constant(b.pow(n->exponent));
        }
        return base.pow(n->exponent);
    }
    if (const auto* n = as<neg_node>(e)) return -expr_to_multipoly(n->arg);
    raise(errc::not_polynomial, "analytic function in a polynomial context");
}

/**
 * Formal quotient of multivariate polynomials. Not reduced; equality is
 * decided by cross-multiplication, which is exact and gcd-free.
 */
struct multirat {
    multipoly num;
    multipoly den; // never identically zero

    static multirat from_poly(multipoly p) {
        return {std::move(p), multipoly::constant(rational(1))};
    }

    bool is_zero() const { return num.is_zero(); }

    multirat operator-() const { return {-num, den}; }
    friend multirat operator+(const multirat& a, const multirat& b) {
        return {a.num * b.den + b.num * a.den, a.den * b.den};
    }
    friend multirat operator-(const multirat& a, const multirat& b) { return a + (-b); }
    friend multirat operator*(const multirat& a, const multirat& b) {
        return {a.num * b.num, a.den * b.den};
    }
    friend multirat operator/(const multirat& a, const multirat& b) {
        if (b.num.is_zero()) raise(errc::division_by_zero, "division by identically zero");
        return {a.num * b.den, a.den * b.num};
    }
};

/// a == b as rational functions.
inline bool mr_equal(const multirat& a, const multirat& b) {
    return (a.num * b.den - b.num * a.den).is_zero();
}

/// E-valuation of the quotient (valuation of num minus valuation of den).
inline int mr_valuation_e(const multirat& a) {
    if (a.num.is_zero()) return val_infinity;
    return a.num.valuation("E") - a.den.valuation("E");
}

/// True when d(a)/dE vanishes identically, i.e. the quotient is free of E.
inline bool mr_free_of_e(const multirat& a) {
    const multipoly dn = a.num.derivative("E"), dd = a.den.derivative("E");
    return (dn * a.den - a.num * dd).is_zero();
}

/// Standard part as a formal quotient; requires E-finiteness.
inline multirat mr_standard_part(const multirat& a) {
    if (a.num.is_zero()) return multirat::from_poly(multipoly());
    const int w = a.den.valuation("E");
    if (a.num.valuation("E") < w)
        raise(errc::infinite_value, "standard part of an E-infinite quotient");
    return {a.num.divide_by_power("E", w).substitute_zero("E"),
            a.den.divide_by_power("E", w).substitute_zero("E")};
}

/// Quotient image of an expression; throws not_polynomial on sin/cos/sqrt.
inline multirat expr_to_multirat(const expr& e) {
    if (const auto* c = as<const_node>(e))
        return multirat::from_poly(multipoly::constant(c->value));
    if (const auto* v = as<var_node>(e))
        return multirat::from_poly(multipoly::variable(v->name));
    if (const auto* n = as<add_node>(e))
        return expr_to_multirat(n->lhs) + expr_to_multirat(n->rhs);
    if (const auto* n = as<sub_node>(e))
        return expr_to_multirat(n->lhs) - expr_to_multirat(n->rhs);
    if (const auto* n = as<mul_node>(e))
        return expr_to_multirat(n->lhs) * expr_to_multirat(n->rhs);
    if (const auto* n = as<div_node>(e)) {
        multirat den = expr_to_multirat(n->rhs);
        if (den.num.is_zero()) raise(errc::malformed_step, "division by identically zero");
        return expr_to_multirat(n->lhs) / den;
    }
    if (const auto* n = as<pow_node>(e)) {
        multirat base = expr_to_multirat(n->base);
        const int k = n->exponent;
        if (k >= 0) return {base.num.pow(k), base.den.pow(k)};
        if (base.num.is_zero()) raise(errc::malformed_step, "zero to a negative power");
        return {base.den.pow(-k), base.num.pow(-k)};
    }
    if (const auto* n = as<neg_node>(e)) return -expr_to_multirat(n->arg);
    raise(errc::not_polynomial, "analytic function in a polynomial identity");
}

} // namespace adq
