#pragma once

/**
 * @file solvers.hpp
 * @brief The four incremental solvers, each emitting a checkable derivation.
 *
 * All four follow the same engine: perturb the unknown by the infinitesimal
 * E, compare the perturbed and unperturbed expressions as if equal, remove
 * what is common, divide the remaining homogeneous parts by the shared power
 * of E, and only then pass to standard parts -- turning the adequality into
 * the equality that determines the answer.
 *
 *   - maximize: critical equation of a polynomial extremum problem
 *   - subtangent: tangent/diameter intersection of an algebraic curve
 *   - parametric_tangent: chord-to-tangent slope of a parametric curve
 *   - refract: stationary travel time across an interface (Snell's law)
 *
 * None of them differentiates symbolically; the derivative oracle in
 * eval.hpp is for tests only.
 */

#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "adequal/derivation.hpp"
#include "adequal/eval.hpp"
#include "adequal/multipoly.hpp"
#include "adequal/polynomial.hpp"
#include "adequal/rational_function.hpp"
#include "adequal/series.hpp"

namespace adq {

namespace detail {

template <typename C>
rational scalar_to_rational(const C& c) {
    if constexpr (std::same_as<C, rational>)
        return c;
    else
        return rational(c.value()); // exact dyadic image of the double
}

inline expr multipoly_from_polynomial_expr(const polynomial& p) {
    multipoly m;
    for (int k = 0; k <= p.degree(); ++k)
        m = m + multipoly::variable(p.var()).pow(k) * p.coefficient(k);
    return m.to_expr();
}

inline expr rf_to_expr(const rational_function& f) {
    if (f.is_polynomial()) return multipoly_from_polynomial_expr(f.numerator());
    return make_div(multipoly_from_polynomial_expr(f.numerator()),
                    multipoly_from_polynomial_expr(f.denominator()));
}

inline expr epsilon_power_expr(int k) { return make_pow(make_var("E"), k); }

/// Expression image of a series with scalar coefficients, ascending in E.
template <coefficient_field C>
expr series_to_expr(const series<C>& s) {
    if (!s.has_terms()) return make_const(rational(0));
    auto term_expr = [](const rational& q, int k) {
        if (k == 0) return make_const(q);
        if (q.is_one()) return epsilon_power_expr(k);
        return make_mul(make_const(q), epsilon_power_expr(k));
    };
    expr acc;
    for (const auto& [k, c] : s.terms()) {
        const rational q = scalar_to_rational(c);
        if (!acc) {
            acc = term_expr(q, k); // leading term keeps its sign
        } else {
            const bool neg = q.sign() < 0;
            acc = neg ? make_sub(acc, term_expr(-q, k)) : make_add(acc, term_expr(q, k));
        }
    }
    return acc;
}

/// Expression image of a series with rational-function coefficients.
inline expr rf_series_to_expr(const series<rational_function>& s) {
    if (!s.has_terms()) return make_const(rational(0));
    expr acc;
    for (const auto& [k, c] : s.terms()) {
        expr coeff = rf_to_expr(c);
        expr term = k == 0 ? coeff : make_mul(coeff, epsilon_power_expr(k));
        acc = acc ? make_add(acc, term) : term;
    }
    return acc;
}

} // namespace detail

// ---------------------------------------------------------------------------
// Extremum
// ---------------------------------------------------------------------------

struct extremum_result {
    std::string unknown;
    polynomial critical_equation;      // in the unknown, parameters bound
    std::vector<rational> rational_roots; // exact roots, sorted, distinct
    derivation trace;                  // symbolic in the parameters
};

/**
 * Critical points of a polynomial expression in one unknown. The trace keeps
 * parameters symbolic; the critical equation and its exact rational roots
 * are reported with the parameter values substituted. Irrational critical
 * points are represented only by the critical equation itself.
 */
inline extremum_result maximize(const expr& p, const std::map<std::string, rational>& params,
                                int trunc = series<rational>::default_order) {
    (void)trunc; // the pipeline is exact polynomial algebra at every order

    const std::set<std::string> free = free_variables(p);
    if (free.count("E"))
        raise(errc::invalid_input, "the name E is reserved for the infinitesimal");
    std::vector<std::string> unknowns;
    for (const auto& v : free)
        if (!params.count(v)) unknowns.push_back(v);
    if (unknowns.empty())
        raise(errc::degenerate_constant, "expression is constant in the unknown");
    if (unknowns.size() > 1) {
        std::string names;
        for (const auto& u : unknowns) names += (names.empty() ? "" : ", ") + u;
        raise(errc::unbound_variable,
              "several unbound names (" + names + "); bind all parameters but the unknown");
    }
    const std::string var = unknowns.front();

    const multipoly mp = expr_to_multipoly(p);
    const expr p_shift = substitute(p, var, make_add(make_var(var), make_var("E")));
    const multipoly mp_shift = expr_to_multipoly(p_shift);
    const multipoly diff = mp_shift - mp;
    if (diff.is_zero())
        raise(errc::degenerate_constant, "expression is constant in the unknown");

    derivation trace;
    trace.steps.push_back({p_shift, mp_shift.to_expr(), relation_kind::equality,
                           step_rule::substitute,
                           "substitute " + var + " + E for the unknown " + var,
                           {}});
    trace.steps.push_back({make_sub(p_shift, p), diff.to_expr(), relation_kind::equality,
                           step_rule::cancel_common,
                           "suppress the terms common to both expressions",
                           {}});

    const auto [pos, neg] = diff.split_by_sign();
    trace.steps.push_back({pos.to_expr(), neg.to_expr(), relation_kind::adequality,
                           step_rule::group_by_sign,
                           "adequate, with the negative terms moved to the other side",
                           {}});

    const int v = std::min(pos.valuation("E"), neg.valuation("E"));
    if (v < 1) raise(errc::not_polynomial, "difference carries an E-free term");
    const multipoly pos_div = pos.divide_by_power("E", v);
    const multipoly neg_div = neg.divide_by_power("E", v);
    trace.steps.push_back({pos_div.to_expr(), neg_div.to_expr(), relation_kind::adequality,
                           step_rule::divide_by_e,
                           v == 1 ? "divide both sides by E"
                                  : "divide both sides by E^" + std::to_string(v),
                           {}});

    const multipoly pos_st = pos_div.substitute_zero("E");
    const multipoly neg_st = neg_div.substitute_zero("E");
    trace.steps.push_back({pos_st.to_expr(), neg_st.to_expr(), relation_kind::equality,
                           step_rule::discard_e,
                           "take standard parts; the remaining E-terms vanish",
                           {}});

    multipoly critical = pos_st - neg_st;
    for (const auto& [name, value] : params) critical = critical.substitute(name, value);
    const polynomial cp = critical.to_polynomial(var);
    if (cp.is_zero())
        raise(errc::degenerate_constant, "critical equation vanishes after binding parameters");

    extremum_result result{var, cp, {}, std::move(trace)};
    if (!cp.is_constant()) result.rational_roots = rational_roots(cp);
    return result;
}

// ---------------------------------------------------------------------------
// Subtangent
// ---------------------------------------------------------------------------

struct tangent_result {
    rational subtangent; // never zero
    derivation trace;
};

/**
 * Fermat's subtangent of an algebraic curve F(x, y) = 0 at a rational point:
 * the curve property is imposed on the tangent line through the similar-
 * triangles substitution x -> x0 + E, y -> y0*(t + E)/t, and the incremental
 * pipeline leaves a linear equation whose unique root is t.
 */
inline tangent_result subtangent(const expr& curve, const rational& x0, const rational& y0,
                                 int trunc = series<rational>::default_order,
                                 const std::string& xvar = "x", const std::string& yvar = "y") {
    for (const auto& v : free_variables(curve))
        if (v != xvar && v != yvar)
            raise(errc::unbound_variable, "curve may involve only " + xvar + " and " + yvar +
                                              ", found '" + v + "'");
    if (y0.is_zero())
        raise(errc::zero_ordinate, "the similar-triangles construction needs y0 != 0");
    if (!eval_rational(curve, {{xvar, x0}, {yvar, y0}}).is_zero())
        raise(errc::point_not_on_curve, "F(x0, y0) != 0");

    const series<rational_function> s = rf_series_eval(curve, x0, y0, trunc, xvar, yvar);

    // Common denominator of the coefficients (a power of t by construction).
    polynomial common = polynomial::constant(rational(1), "t");
    for (const auto& [k, c] : s.terms()) {
        const polynomial& d = c.denominator();
        const polynomial g = gcd(common, d);
        common = common * d.divmod(g).first;
    }

    multipoly cleared;
    const multipoly t_poly = multipoly::variable("t");
    for (const auto& [k, c] : s.terms()) {
        const polynomial num = c.numerator() * common.divmod(c.denominator()).first;
        multipoly term;
        for (int j = 0; j <= num.degree(); ++j)
            term = term + t_poly.pow(j) * num.coefficient(j);
        cleared = cleared + term * multipoly::variable("E").pow(k);
    }
    if (cleared.is_zero())
        raise(errc::vertical_tangent, "curve property is stationary to trusted order");

    derivation trace;
    const expr substituted = substitute(
        substitute(curve, xvar, make_add(make_const(x0), make_var("E"))), yvar,
        make_mul(make_const(y0),
                 make_div(make_add(make_var("t"), make_var("E")), make_var("t"))));
    trace.steps.push_back({substituted, detail::rf_series_to_expr(s), relation_kind::equality,
                           step_rule::substitute,
                           "substitute x0 + E and y0*(t + E)/t along the tangent",
                           {}});

    if (common.degree() > 0) {
        const expr d_expr = detail::multipoly_from_polynomial_expr(common);
        trace.steps.push_back({make_mul(d_expr, substituted), cleared.to_expr(),
                               relation_kind::equality, step_rule::algebra,
                               "clear denominators: multiply by " + common.to_string(),
                               {}});
    }

    const auto [pos, neg] = cleared.split_by_sign();
    trace.steps.push_back({pos.to_expr(), neg.to_expr(), relation_kind::adequality,
                           step_rule::group_by_sign,
                           "adequate, with the negative terms moved to the other side",
                           {}});

    const int v = std::min(pos.valuation("E"), neg.valuation("E"));
    if (v < 1) raise(errc::point_not_on_curve, "constant term survives the substitution");
    const multipoly pos_div = pos.divide_by_power("E", v);
    const multipoly neg_div = neg.divide_by_power("E", v);
    trace.steps.push_back({pos_div.to_expr(), neg_div.to_expr(), relation_kind::adequality,
                           step_rule::divide_by_e,
                           v == 1 ? "divide both sides by E"
                                  : "divide both sides by E^" + std::to_string(v),
                           {}});

    const multipoly pos_st = pos_div.substitute_zero("E");
    const multipoly neg_st = neg_div.substitute_zero("E");
    trace.steps.push_back({pos_st.to_expr(), neg_st.to_expr(), relation_kind::equality,
                           step_rule::discard_e,
                           "take standard parts; the remaining E-terms vanish",
                           {}});

    // The spurious factor t^k introduced by clearing denominators is
    // harmless: t = 0 is excluded by the construction.
    polynomial eq = (pos_st - neg_st).to_polynomial("t");
    std::vector<rational> coeffs = eq.coefficients();
    std::size_t shift = 0;
    while (shift < coeffs.size() && coeffs[shift].is_zero()) ++shift;
    coeffs.erase(coeffs.begin(), coeffs.begin() + long(shift));
    const polynomial reduced("t", coeffs);

    if (reduced.degree() != 1)
        raise(errc::vertical_tangent,
              "the t-coefficient vanishes; the tangent does not meet the diameter");
    const rational t_star = -reduced.coefficient(0) / reduced.coefficient(1);
    if (t_star.is_zero())
        raise(errc::vertical_tangent, "subtangent degenerates to zero");

    return tangent_result{t_star, std::move(trace)};
}

// ---------------------------------------------------------------------------
// Parametric tangent
// ---------------------------------------------------------------------------

template <coefficient_field C>
struct slope_result {
    C slope;
    derivation trace;
};

/**
 * Slope of the tangent to a parametric curve (x(theta), y(theta)) at a base
 * point, via the chord/tangent adequality: the two coordinate increments
 * over theta -> theta + E are adequated to a line of unknown slope, the
 * common power of E divided out, and the standard part taken. Use exact
 * coefficients for rational base points, approx coefficients (e.g. pi/2)
 * otherwise.
 */
template <coefficient_field C>
    requires detail::taylor_scalar<C>
slope_result<C> parametric_tangent(const expr& x_expr, const expr& y_expr, const C& theta0,
                                   int trunc = series<C>::default_order) {
    std::set<std::string> vars = free_variables(x_expr);
    for (const auto& v : free_variables(y_expr)) vars.insert(v);
    if (vars.count("E"))
        raise(errc::invalid_input, "the name E is reserved for the infinitesimal");
    if (vars.size() > 1)
        raise(errc::unbound_variable, "coordinate expressions may share one parameter only");
    const std::string theta = vars.empty() ? std::string("theta") : *vars.begin();
    const std::string slope_sym = theta == "m" ? "slope" : "m";

    binding<C> at_shifted(trunc), at_base(trunc);
    at_shifted.bind(theta, series<C>::constant(theta0, trunc) + series<C>::epsilon(trunc));
    at_base.bind(theta, series<C>::constant(theta0, trunc));

    const series<C> dx = eval_series(x_expr, at_shifted) - eval_series(x_expr, at_base);
    const series<C> dy = eval_series(y_expr, at_shifted) - eval_series(y_expr, at_base);

    if (!dx.has_terms() && !dy.has_terms())
        raise(errc::stationary_point, "both increments vanish to trusted order");
    if (!dx.has_terms() || (dy.has_terms() && dx.valuation() > dy.valuation()))
        raise(errc::vertical_tangent, "x-increment is of higher order than the y-increment");

    const int v = dx.valuation();
    const C slope = st(div(dy, dx));

    derivation trace;
    const expr m = make_var(slope_sym);
    trace.steps.push_back({detail::series_to_expr(dy),
                           make_mul(m, detail::series_to_expr(dx)), relation_kind::adequality,
                           step_rule::substitute,
                           "chord through the increment E adequated to the tangent of slope " +
                               slope_sym,
                           {}});

    auto shift = [](const series<C>& s, int k) {
        std::map<int, C> t;
        for (const auto& [e, c] : s.terms()) t.emplace(e - k, c);
        return series<C>::from_terms(std::move(t), s.trunc() - k, s.exact());
    };
    const series<C> dy_div = shift(dy, v), dx_div = shift(dx, v);
    trace.steps.push_back({detail::series_to_expr(dy_div),
                           make_mul(m, detail::series_to_expr(dx_div)),
                           relation_kind::adequality, step_rule::divide_by_e,
                           v == 1 ? "divide both sides by E"
                                  : "divide both sides by E^" + std::to_string(v),
                           {}});

    const rational cy = detail::scalar_to_rational(dy_div.coefficient(0));
    const rational cx = detail::scalar_to_rational(dx_div.coefficient(0));
    trace.steps.push_back({make_const(cy), make_mul(make_const(cx), m), relation_kind::equality,
                           step_rule::discard_e,
                           "take standard parts; the chord has become the tangent",
                           {}});

    return slope_result<C>{slope, std::move(trace)};
}

// ---------------------------------------------------------------------------
// Refraction
// ---------------------------------------------------------------------------

struct refraction_result {
    double x_star;         // crossing point, 0 < x_star < d
    double theta1;         // incidence angle, radians
    double theta2;         // refraction angle, radians
    double snell_residual; // |sin(theta1)/v1 - sin(theta2)/v2|
};

/**
 * Least-time crossing point for two media separated by the axis: source at
 * height a over x = 0, receiver at depth b under x = d, speeds v1 and v2.
 * The stationarity function g(x) = st((T(x+E) - T(x))/E) is produced by the
 * incremental pipeline (both square roots are expanded and their
 * higher-order E-terms discarded), then bracketed by bisection. The returned
 * angles satisfy Snell's law within tol.
 */
inline refraction_result refract(double a, double b, double d, double v1, double v2,
                                 double tol = 1e-9) {
    if (!(a > 0) || !(b > 0) || !(d > 0) || !(v1 > 0) || !(v2 > 0))
        raise(errc::invalid_geometry, "all of a, b, d, v1, v2 must be positive");
    if (!(tol > 0)) raise(errc::invalid_geometry, "tolerance must be positive");

    using S = series<approx_real>;
    const int order = 8;
    auto travel_time = [&](const S& x) {
        const S a2 = S::constant(approx_real(a * a), order);
        const S b2 = S::constant(approx_real(b * b), order);
        const S dd = S::constant(approx_real(d), order);
        const S leg1 = taylor_apply(analytic_fn::sqrt, a2 + x * x);
        const S rem = dd - x;
        const S leg2 = taylor_apply(analytic_fn::sqrt, b2 + rem * rem);
        return leg1 * S::constant(approx_real(1.0 / v1), order) +
               leg2 * S::constant(approx_real(1.0 / v2), order);
    };
    auto stationarity = [&](double x) {
        const S shifted = travel_time(S::constant(approx_real(x), order) + S::epsilon(order));
        const S base = travel_time(S::constant(approx_real(x), order));
        return st(div(shifted - base, S::epsilon(order))).value();
    };

    double lo = 0.0, hi = d;
    const double glo = stationarity(lo), ghi = stationarity(hi);
    if (!(glo < 0.0) || !(ghi > 0.0))
        raise(errc::invalid_geometry, "stationarity function does not bracket a crossing");

    double mid = 0.5 * (lo + hi);
    const double target = std::min(tol, 1e-13 * d);
    bool converged = false;
    for (int iter = 0; iter < 200; ++iter) {
        mid = 0.5 * (lo + hi);
        const double gm = stationarity(mid);
        if (gm == 0.0) {
            converged = true;
            break;
        }
        (gm < 0.0 ? lo : hi) = mid;
        if (hi - lo <= target) {
            converged = true;
            mid = 0.5 * (lo + hi);
            break;
        }
    }
    if (!converged) raise(errc::tolerance_not_reached, "bisection did not converge in 200 steps");

    const double theta1 = std::atan(mid / a);
    const double theta2 = std::atan((d - mid) / b);
    const double residual = std::fabs(std::sin(theta1) / v1 - std::sin(theta2) / v2);
    if (residual > tol)
        raise(errc::tolerance_not_reached, "Snell residual above tolerance");
    return refraction_result{mid, theta1, theta2, residual};
}

} // namespace adq
