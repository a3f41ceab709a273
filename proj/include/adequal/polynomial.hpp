#pragma once

/**
 * @file polynomial.hpp
 * @brief Dense univariate polynomials over exact rationals.
 *
 * Used for critical equations, curve properties and the univariate
 * rational-function coefficient field. Coefficients are stored ascending in
 * the degree with trailing zeros trimmed; the zero polynomial has an empty
 * coefficient list.
 */

#include <algorithm>
#include <string>
#include <vector>

#include "adequal/errors.hpp"
#include "adequal/rational.hpp"

namespace adq {

class polynomial {
public:
    explicit polynomial(std::string var = "t") : var_(std::move(var)) {}
    polynomial(std::string var, std::vector<rational> coeffs)
        : var_(std::move(var)), c_(std::move(coeffs)) {
        trim();
    }

    static polynomial constant(const rational& q, std::string var = "t") {
        return polynomial(std::move(var), {q});
    }
    static polynomial variable(std::string var) {
        return polynomial(std::move(var), {rational(0), rational(1)});
    }

    const std::string& var() const { return var_; }
    const std::vector<rational>& coefficients() const { return c_; }
    bool is_zero() const { return c_.empty(); }
    bool is_constant() const { return c_.size() <= 1; }
    int degree() const { return static_cast<int>(c_.size()) - 1; } // -1 for zero
    rational coefficient(int k) const {
        return (k >= 0 && k < static_cast<int>(c_.size())) ? c_[k] : rational(0);
    }
    rational leading() const { return c_.empty() ? rational(0) : c_.back(); }

    polynomial operator-() const {
        std::vector<rational> r;
        r.reserve(c_.size());
        for (const auto& q : c_) r.push_back(-q);
        return polynomial(var_, std::move(r));
    }

    friend polynomial operator+(const polynomial& a, const polynomial& b) {
        a.check_var(b);
        std::vector<rational> r(std::max(a.c_.size(), b.c_.size()), rational(0));
        for (std::size_t i = 0; i < r.size(); ++i) r[i] = a.coefficient(int(i)) + b.coefficient(int(i));
        return polynomial(a.var_.empty() ? b.var_ : a.var_, std::move(r));
    }
    friend polynomial operator-(const polynomial& a, const polynomial& b) { return a + (-b); }
    friend polynomial operator*(const polynomial& a, const polynomial& b) {
        a.check_var(b);
        if (a.is_zero() || b.is_zero()) return polynomial(a.var_);
        std::vector<rational> r(a.c_.size() + b.c_.size() - 1, rational(0));
        for (std::size_t i = 0; i < a.c_.size(); ++i)
            for (std::size_t j = 0; j < b.c_.size(); ++j) r[i + j] += a.c_[i] * b.c_[j];
        return polynomial(a.var_, std::move(r));
    }
    friend polynomial operator*(const polynomial& a, const rational& s) {
        std::vector<rational> r;
        r.reserve(a.c_.size());
        for (const auto& q : a.c_) r.push_back(q * s);
        return polynomial(a.var_, std::move(r));
    }

    friend bool operator==(const polynomial& a, const polynomial& b) {
        return a.c_ == b.c_; // the variable name is bookkeeping, not identity
    }

    rational eval(const rational& x) const {
        rational acc(0);
        for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
        return acc;
    }

    polynomial derivative() const {
        if (c_.size() <= 1) return polynomial(var_);
        std::vector<rational> r(c_.size() - 1, rational(0));
        for (std::size_t i = 1; i < c_.size(); ++i) r[i - 1] = c_[i] * rational(long(i));
        return polynomial(var_, std::move(r));
    }

    /// Quotient and remainder of exact division.
    std::pair<polynomial, polynomial> divmod(const polynomial& d) const {
        check_var(d);
        if (d.is_zero()) raise(errc::division_by_zero, "polynomial division by zero");
        polynomial q(var_), r = *this;
        std::vector<rational> qc(std::max<int>(degree() - d.degree() + 1, 0), rational(0));
        while (!r.is_zero() && r.degree() >= d.degree()) {
            const int k = r.degree() - d.degree();
            const rational f = r.leading() / d.leading();
            qc[std::size_t(k)] += f;
            polynomial shift(var_, monomial_coeffs(f, k));
            r = r - shift * d;
        }
        return {polynomial(var_, std::move(qc)), r};
    }

    polynomial monic() const {
        if (is_zero()) return *this;
        return *this * leading().inverse();
    }

    std::string to_string() const;

private:
    static std::vector<rational> monomial_coeffs(const rational& f, int k) {
        std::vector<rational> m(std::size_t(k) + 1, rational(0));
        m.back() = f;
        return m;
    }

    void check_var(const polynomial& o) const {
        if (!var_.empty() && !o.var_.empty() && var_ != o.var_)
            raise(errc::invalid_input, "polynomial arithmetic across variables '" + var_ +
                                           "' and '" + o.var_ + "'");
    }

    void trim() {
        while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
    }

    std::string var_;
    std::vector<rational> c_;
};

inline polynomial gcd(polynomial a, polynomial b) {
    while (!b.is_zero()) {
        auto [q, r] = a.divmod(b);
        a = b;
        b = r;
    }
    return a.monic();
}

/// Ascending-degree renderer in the expression grammar, e.g. "8 - 4*t + t^2".
inline std::string polynomial::to_string() const {
    if (is_zero()) return "0";
    std::string out;
    bool first = true;
    for (std::size_t i = 0; i < c_.size(); ++i) {
        if (c_[i].is_zero()) continue;
        const bool neg = c_[i].sign() < 0;
        const rational mag = neg ? -c_[i] : c_[i];
        if (first) {
            if (neg) out += "-";
            first = false;
        } else {
            out += neg ? " - " : " + ";
        }
        const bool unit = mag.is_one() && i != 0;
        if (!unit) out += mag.to_string();
        if (i != 0) {
            if (!unit) out += "*";
            out += var_;
            if (i != 1) out += "^" + std::to_string(i);
        }
    }
    return out;
}

namespace detail {

inline std::vector<mpz_class> positive_divisors(mpz_class n) {
    n = ::abs(n);
    std::vector<mpz_class> divs;
    if (n == 0) return divs;
    mpz_class i = 1;
    for (; i * i <= n; ++i) {
        if (mpz_divisible_p(n.get_mpz_t(), i.get_mpz_t())) {
            divs.push_back(i);
            mpz_class j = n / i;
            if (j != i) divs.push_back(j);
        }
    }
    return divs;
}

} // namespace detail

/**
 * All rational roots, found exactly: the polynomial is deflated by its root
 * at zero, cleared to integer coefficients, and candidate roots p/q with
 * p | constant term and q | leading coefficient are tested by evaluation.
 * Roots are returned sorted and distinct.
 */
inline std::vector<rational> rational_roots(const polynomial& p) {
    if (p.is_zero())
        raise(errc::degenerate_constant, "root search on the zero polynomial");
    std::vector<rational> roots;
    std::vector<rational> c = p.coefficients();

    std::size_t low = 0;
    while (low < c.size() && c[low].is_zero()) ++low;
    if (low > 0) {
        roots.push_back(rational(0));
        c.erase(c.begin(), c.begin() + long(low));
    }
    if (c.size() <= 1) {
        std::sort(roots.begin(), roots.end());
        return roots;
    }

    // Clear denominators to an integer polynomial.
    mpz_class scale = 1;
    for (const auto& q : c) {
        mpz_class d = q.denominator();
        mpz_class g;
        mpz_gcd(g.get_mpz_t(), scale.get_mpz_t(), d.get_mpz_t());
        scale = scale / g * d;
    }
    std::vector<mpz_class> ic;
    ic.reserve(c.size());
    for (const auto& q : c) ic.push_back(q.numerator() * (scale / q.denominator()));

    const auto ps = detail::positive_divisors(ic.front());
    const auto qs = detail::positive_divisors(ic.back());
    polynomial probe(p.var(), c);
    for (const auto& pn : ps) {
        for (const auto& qd : qs) {
            for (int s : {1, -1}) {
                rational cand(mpq_class(s < 0 ? mpz_class(-pn) : pn, qd));
                if (probe.eval(cand).is_zero()) roots.push_back(cand);
            }
        }
    }
    std::sort(roots.begin(), roots.end());
    roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
    return roots;
}

} // namespace adq
