#pragma once

/**
 * @file series.hpp
 * @brief Truncated formal Laurent series in the infinitesimal E.
 *
 * This is the computable stand-in for an infinitesimal-enriched ordered
 * field. A series is a finite map exponent -> nonzero coefficient together
 * with a truncation order `trunc` ("coefficients at exponents <= trunc are
 * trusted") and an exactness flag that records whether any coefficient has
 * ever been discarded. The order is decided by the sign of the lowest-order
 * coefficient of a difference, so E is a positive element smaller than every
 * positive rational: for each positive r, 0 < E < r.
 *
 * On top of the field arithmetic the header defines the three relations the
 * solvers are built on:
 *   - infinitely close  a ~ b   : a - b is infinitesimal (valuation >= 1),
 *   - adequal           a adq b : a/b infinitely close to 1, or a = b = 0,
 *   - standard part     st(a)   : the order-zero coefficient of a finite a.
 *
 * Comparisons that would need discarded information raise
 * errc::precision_exhausted instead of guessing.
 */

#include <algorithm>
#include <map>
#include <string>
#include <utility>

#include "adequal/coefficient.hpp"
#include "adequal/errors.hpp"

namespace adq {

enum class ordering { less, equal, greater };

/// Sentinel for the valuation of the zero series ("+infinity").
inline constexpr int val_infinity = 1 << 24;

template <coefficient_field C>
class series {
public:
    static constexpr int default_order = 8;

    /// The exact zero series at the default truncation order.
    series() : trunc_(default_order), exact_(true) {}

    static series zero(int trunc, bool exact = true) {
        series s;
        s.trunc_ = trunc;
        s.exact_ = exact;
        return s;
    }

    /// Embeds a scalar as the order-zero term.
    static series constant(const C& c, int trunc) {
        if (!c.is_zero() && trunc < 0)
            raise(errc::invalid_precision, "constant term lies beyond the truncation order");
        series s = zero(trunc);
        if (!c.is_zero()) s.terms_.emplace(0, c);
        return s;
    }

    /// The infinitesimal E itself: the single term 1*E^1.
    static series epsilon(int trunc) {
        if (trunc < 1) raise(errc::invalid_precision, "epsilon requires truncation order >= 1");
        series s = zero(trunc);
        s.terms_.emplace(1, C(1));
        return s;
    }

    static series monomial(const C& c, int exponent, int trunc) {
        std::map<int, C> t;
        if (!c.is_zero()) t.emplace(exponent, c);
        return from_terms(std::move(t), trunc, true);
    }

    /// Normalizing constructor: drops zero coefficients, and drops (while
    /// clearing the exactness flag) anything beyond the truncation order.
    static series from_terms(std::map<int, C> terms, int trunc, bool exact) {
        series s = zero(trunc, exact);
        for (auto& [k, c] : terms) {
            if (c.is_zero()) continue;
            if (k > trunc) {
                s.exact_ = false;
                continue;
            }
            s.terms_.emplace(k, c);
        }
        return s;
    }

    int trunc() const { return trunc_; }
    bool exact() const { return exact_; }
    const std::map<int, C>& terms() const { return terms_; }
    bool has_terms() const { return !terms_.empty(); }

    /// True only when the series is known to be exactly zero.
    bool is_zero_certain() const { return terms_.empty() && exact_; }

    /// Empty but with possible discarded tail: zero as far as we can see.
    bool is_zero_uncertain() const { return terms_.empty() && !exact_; }

    C coefficient(int k) const {
        auto it = terms_.find(k);
        return it == terms_.end() ? C(0) : it->second;
    }

    /// Lowest stored exponent; val_infinity for the (certain) zero series.
    int valuation() const { return terms_.empty() ? val_infinity : terms_.begin()->first; }

    /// Sound lower bound on the true valuation, usable when the series is
    /// empty but inexact (the tail, if any, starts beyond trunc).
    int valuation_lower_bound() const {
        if (!terms_.empty()) return terms_.begin()->first;
        return exact_ ? val_infinity : trunc_ + 1;
    }

    series operator-() const {
        series r = zero(trunc_, exact_);
        for (const auto& [k, c] : terms_) r.terms_.emplace(k, -c);
        return r;
    }

    friend series operator+(const series& a, const series& b) {
        const int t = std::min(a.trunc_, b.trunc_);
        std::map<int, C> acc = a.terms_;
        for (const auto& [k, c] : b.terms_) {
            auto it = acc.find(k);
            if (it == acc.end())
                acc.emplace(k, c);
            else
                it->second = it->second + c;
        }
        return from_terms(std::move(acc), t, a.exact_ && b.exact_);
    }

    friend series operator-(const series& a, const series& b) { return a + (-b); }

    friend series operator*(const series& a, const series& b) {
        const int t = std::min(sat_add(a.trunc_, b.valuation_lower_bound()),
                               sat_add(b.trunc_, a.valuation_lower_bound()));
        bool dropped = false;
        std::map<int, C> acc;
        for (const auto& [i, ci] : a.terms_) {
            for (const auto& [j, cj] : b.terms_) {
                const int k = i + j;
                if (k > t) {
                    dropped = true;
                    continue;
                }
                auto it = acc.find(k);
                if (it == acc.end())
                    acc.emplace(k, ci * cj);
                else
                    it->second = it->second + ci * cj;
            }
        }
        return from_terms(std::move(acc), t, a.exact_ && b.exact_ && !dropped);
    }

    friend bool operator==(const series& a, const series& b) {
        return a.trunc_ == b.trunc_ && a.exact_ == b.exact_ && a.terms_ == b.terms_;
    }

private:
    static int sat_add(int a, int b) {
        long s = static_cast<long>(a) + static_cast<long>(b);
        if (s > val_infinity) s = val_infinity;
        if (s < -val_infinity) s = -val_infinity;
        return static_cast<int>(s);
    }

    std::map<int, C> terms_;
    int trunc_;
    bool exact_;
};

/// The paper-facing embedding of a rational scalar.
inline series<rational> from_rational(const rational& q, int trunc = series<rational>::default_order) {
    return series<rational>::constant(q, trunc);
}

/**
 * Multiplicative inverse. Writing a = c*E^v*(1 + h) with h of positive
 * valuation, returns c^-1 * E^-v * sum_k (-h)^k, truncated at a conservative
 * trunc - 2v. The exactness flag survives only when the geometric series
 * terminates (h = 0).
 */
template <coefficient_field C>
series<C> inv(const series<C>& a) {
    if (a.is_zero_certain()) raise(errc::division_by_zero, "inverse of the zero series");
    if (a.is_zero_uncertain())
        raise(errc::precision_exhausted, "inverse of a series with no trusted leading term");

    const int v = a.valuation();
    const C lead = a.terms().begin()->second;
    const int result_trunc = a.trunc() - 2 * v;
    const int work_trunc = a.trunc() - v;

    // m = a / (lead * E^v), so m = 1 + h with val(h) >= 1.
    std::map<int, C> shifted;
    for (const auto& [k, c] : a.terms()) shifted.emplace(k - v, c / lead);
    series<C> m = series<C>::from_terms(std::move(shifted), work_trunc, a.exact());
    series<C> h = m - series<C>::constant(C(1), work_trunc);

    if (h.is_zero_certain()) {
        series<C> r = series<C>::monomial(C(1) / lead, -v, result_trunc);
        return series<C>::from_terms(r.terms(), result_trunc, a.exact());
    }

    series<C> geom = series<C>::constant(C(1), work_trunc);
    series<C> power = series<C>::constant(C(1), work_trunc);
    const series<C> neg_h = -h;
    const int step = std::max(1, h.valuation_lower_bound());
    for (int k = 1; k * step <= work_trunc; ++k) {
        power = power * neg_h;
        if (!power.has_terms()) break;
        geom = geom + power;
    }

    std::map<int, C> out;
    for (const auto& [k, c] : geom.terms()) {
        if (k - v <= result_trunc) out.emplace(k - v, c / lead);
    }
    return series<C>::from_terms(std::move(out), result_trunc, false);
}

template <coefficient_field C>
series<C> div(const series<C>& a, const series<C>& b) {
    return a * inv(b);
}

template <coefficient_field C>
series<C> pow(const series<C>& a, int k) {
    if (k == 0) return series<C>::constant(C(1), a.trunc());
    series<C> base = k < 0 ? inv(a) : a;
    int n = k < 0 ? -k : k;
    series<C> acc = base;
    for (int i = 1; i < n; ++i) acc = acc * base;
    return acc;
}

/// Infinitesimal: zero, or valuation >= 1.
template <coefficient_field C>
bool is_infinitesimal(const series<C>& a) {
    if (a.has_terms()) return a.valuation() >= 1;
    if (a.exact()) return true;
    if (a.trunc() >= 0) return true; // the unseen tail starts at trunc + 1 >= 1
    raise(errc::precision_exhausted, "cannot certify infinitesimality");
}

/// Finite: zero, or valuation >= 0.
template <coefficient_field C>
bool is_finite(const series<C>& a) {
    if (a.has_terms()) return a.valuation() >= 0;
    if (a.exact()) return true;
    if (a.trunc() >= -1) return true;
    raise(errc::precision_exhausted, "cannot certify finiteness");
}

/**
 * Standard part: rounds a finite element to its scalar shadow, i.e. the
 * coefficient at exponent zero. a - st(a) is always infinitesimal.
 */
template <coefficient_field C>
C st(const series<C>& a) {
    if (!is_finite(a)) raise(errc::infinite_value, "standard part of an infinite element");
    return a.coefficient(0);
}

/// Total order on trusted data; raises precision_exhausted when the
/// difference is empty but inexact (equality cannot be certified).
template <ordered_coefficient_field C>
ordering compare(const series<C>& a, const series<C>& b) {
    const series<C> d = a - b;
    if (d.has_terms()) {
        const int s = d.terms().begin()->second.sign();
        if (s > 0) return ordering::greater;
        if (s < 0) return ordering::less;
        // A stored coefficient is never zero; sign 0 can only mean an
        // approx-mode coefficient inside its tolerance band, treat as equal.
        return ordering::equal;
    }
    if (d.exact()) return ordering::equal;
    raise(errc::precision_exhausted, "difference has no trusted terms");
}

/// Infinite proximity: a - b is infinitesimal.
template <coefficient_field C>
bool approx(const series<C>& a, const series<C>& b) {
    return is_infinitesimal(a - b);
}

/**
 * Adequality: both zero, or the ratio infinitely close to 1. When exactly
 * one side is zero the relation is false (the definition gives no escape).
 */
template <coefficient_field C>
bool adequal(const series<C>& a, const series<C>& b) {
    if (a.is_zero_uncertain() || b.is_zero_uncertain())
        raise(errc::precision_exhausted, "cannot certify zero-ness of an adequality side");
    const bool za = a.is_zero_certain();
    const bool zb = b.is_zero_certain();
    if (za && zb) return true;
    if (za != zb) return false;
    const series<C> r = div(a, b);
    return approx(r, series<C>::constant(C(1), r.trunc()));
}

namespace detail {

inline rational factorial_inverse(int k) {
    mpz_class f;
    mpz_fac_ui(f.get_mpz_t(), static_cast<unsigned long>(k));
    return rational(1) / rational(mpz_class(f));
}

/// Generalized binomial coefficient C(1/2, k).
inline rational binom_half(int k) {
    rational acc(1);
    rational top(1, 2);
    for (int j = 0; j < k; ++j) {
        acc *= top - rational(j);
    }
    return acc * factorial_inverse(k);
}

/// k-th Taylor coefficient f^(k)(c)/k! in exact mode. sin/cos admit only
/// the base point 0; sqrt admits perfect squares of positive rationals.
struct rational_taylor {
    analytic_fn fn;
    rational c;
    rational sqrt_c; // only for sqrt

    static rational_taylor prepare(analytic_fn fn, const rational& c) {
        rational_taylor t{fn, c, rational(0)};
        switch (fn) {
        case analytic_fn::sin:
        case analytic_fn::cos:
            if (!c.is_zero())
                raise(errc::exact_mode_unsupported,
                      "sin/cos at a nonzero base point requires approx mode");
            break;
        case analytic_fn::sqrt: {
            if (c.sign() <= 0)
                raise(errc::negative_sqrt_argument, "sqrt requires a positive constant term");
            auto r = c.exact_sqrt();
            if (!r)
                raise(errc::exact_mode_unsupported,
                      "sqrt of a non-square rational requires approx mode");
            t.sqrt_c = *r;
            break;
        }
        }
        return t;
    }

    rational coeff(int k) const {
        switch (fn) {
        case analytic_fn::sin:
            if (k % 2 == 0) return rational(0);
            return (((k - 1) / 2) % 2 == 0 ? rational(1) : rational(-1)) * factorial_inverse(k);
        case analytic_fn::cos:
            if (k % 2 == 1) return rational(0);
            return ((k / 2) % 2 == 0 ? rational(1) : rational(-1)) * factorial_inverse(k);
        case analytic_fn::sqrt:
            return binom_half(k) * sqrt_c * c.pow(-k);
        }
        return rational(0);
    }
};

struct approx_taylor {
    analytic_fn fn;
    approx_real c;

    static approx_taylor prepare(analytic_fn fn, const approx_real& c) {
        if (fn == analytic_fn::sqrt && c.sign() <= 0)
            raise(errc::negative_sqrt_argument, "sqrt requires a positive constant term");
        return approx_taylor{fn, c};
    }

    approx_real coeff(int k) const {
        double kfac = 1.0;
        for (int j = 2; j <= k; ++j) kfac *= j;
        switch (fn) {
        case analytic_fn::sin:
            return approx_real(std::sin(c.value() + k * 1.5707963267948966) / kfac, c.eps());
        case analytic_fn::cos:
            return approx_real(std::cos(c.value() + k * 1.5707963267948966) / kfac, c.eps());
        case analytic_fn::sqrt: {
            double acc = 1.0;
            for (int j = 0; j < k; ++j) acc *= 0.5 - j;
            return approx_real(acc / kfac * std::pow(c.value(), 0.5 - k), c.eps());
        }
        }
        return approx_real(0.0, c.eps());
    }
};

template <typename C>
struct taylor_support;

template <>
struct taylor_support<rational> {
    using impl = rational_taylor;
};

template <>
struct taylor_support<approx_real> {
    using impl = approx_taylor;
};

template <typename C>
concept taylor_scalar = requires { typename taylor_support<C>::impl; };

} // namespace detail

/**
 * Composes an analytic function with a finite series: splitting a = c + h
 * with h the positive-valuation part, returns sum_k f^(k)(c)/k! * h^k,
 * truncated at a's order. The exactness flag survives only when the
 * expansion terminates (h = 0).
 */
template <coefficient_field C>
    requires detail::taylor_scalar<C>
series<C> taylor_apply(analytic_fn fn, const series<C>& a) {
    if (a.has_terms() && a.valuation() < 0)
        raise(errc::infinite_value, "analytic function of an infinite element");

    const C c = a.coefficient(0);
    const auto gen = detail::taylor_support<C>::impl::prepare(fn, c);
    const int t = a.trunc();
    const series<C> h = a - series<C>::constant(c, t);

    if (h.is_zero_certain()) {
        series<C> r = series<C>::constant(gen.coeff(0), t);
        return series<C>::from_terms(r.terms(), t, a.exact());
    }

    series<C> acc = series<C>::constant(gen.coeff(0), t);
    series<C> hk = series<C>::constant(C(1), t);
    const int step = std::max(1, h.valuation_lower_bound());
    for (int k = 1; k * step <= t; ++k) {
        hk = hk * h;
        if (!hk.has_terms()) break;
        acc = acc + series<C>::constant(gen.coeff(k), t) * hk;
    }
    return series<C>::from_terms(acc.terms(), t, false);
}

/// Renders "c0 + c1*E + c2*E^2 + ..." ascending in the exponent, with an
/// O(E^{trunc+1}) marker when coefficients have been discarded.
template <ordered_coefficient_field C>
std::string to_string(const series<C>& s) {
    std::string out;
    if (!s.has_terms()) {
        out = "0";
    } else {
        bool first = true;
        for (const auto& [k, c] : s.terms()) {
            const bool neg = c.sign() < 0;
            const C mag = neg ? -c : c;
            if (first) {
                out += neg ? "-" : "";
                first = false;
            } else {
                out += neg ? " - " : " + ";
            }
            const bool unit = (mag == C(1)) && k != 0;
            if (!unit) out += mag.to_string();
            if (k != 0) {
                if (!unit) out += "*";
                out += "E";
                if (k != 1) out += "^" + std::to_string(k);
            }
        }
    }
    if (!s.exact()) out += " + O(E^" + std::to_string(s.trunc() + 1) + ")";
    return out;
}

} // namespace adq
