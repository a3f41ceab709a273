#pragma once

/**
 * @file eval.hpp
 * @brief Evaluation of expressions into series, polynomials and rationals.
 *
 * Also home to the symbolic derivative. The solvers never call it; it exists
 * so tests can compare the incremental procedures against an independent
 * differentiation route.
 */

#include <map>
#include <string>

#include "adequal/expr.hpp"
#include "adequal/polynomial.hpp"
#include "adequal/rational_function.hpp"
#include "adequal/series.hpp"

namespace adq {

namespace detail {

template <typename C>
struct scalar_traits;

template <>
struct scalar_traits<rational> {
    static rational from_rational(const rational& q) { return q; }
};
template <>
struct scalar_traits<approx_real> {
    static approx_real from_rational(const rational& q) { return approx_real(q.to_double()); }
};
template <>
struct scalar_traits<rational_function> {
    static rational_function from_rational(const rational& q) { return rational_function(q); }
};

} // namespace detail

/**
 * Variable environment for series evaluation. The infinitesimal "E" is
 * always bound to epsilon at the environment's truncation order and cannot
 * be rebound; all other series must share that order.
 */
template <coefficient_field C>
class binding {
public:
    explicit binding(int trunc = series<C>::default_order) : trunc_(trunc) {}

    int trunc() const { return trunc_; }

    binding& bind(const std::string& name, series<C> value) {
        if (name == "E") raise(errc::invalid_input, "the name E is reserved for the infinitesimal");
        if (value.trunc() != trunc_)
            raise(errc::invalid_input, "bound series must share the binding's truncation order");
        vars_.insert_or_assign(name, std::move(value));
        return *this;
    }

    binding& bind_constant(const std::string& name, const C& value) {
        return bind(name, series<C>::constant(value, trunc_));
    }

    series<C> lookup(const std::string& name) const {
        if (name == "E") return series<C>::epsilon(trunc_);
        auto it = vars_.find(name);
        if (it == vars_.end()) raise(errc::unbound_variable, "unbound variable '" + name + "'");
        return it->second;
    }

    bool contains(const std::string& name) const {
        return name == "E" || vars_.count(name) != 0;
    }

private:
    int trunc_;
    std::map<std::string, series<C>> vars_;
};

/// Bottom-up evaluation of an expression into the series field.
template <coefficient_field C>
series<C> eval_series(const expr& e, const binding<C>& env) {
    if (const auto* c = as<const_node>(e))
        return series<C>::constant(detail::scalar_traits<C>::from_rational(c->value), env.trunc());
    if (const auto* v = as<var_node>(e)) return env.lookup(v->name);
    if (const auto* n = as<add_node>(e)) return eval_series(n->lhs, env) + eval_series(n->rhs, env);
    if (const auto* n = as<sub_node>(e)) return eval_series(n->lhs, env) - eval_series(n->rhs, env);
    if (const auto* n = as<mul_node>(e)) return eval_series(n->lhs, env) * eval_series(n->rhs, env);
    if (const auto* n = as<div_node>(e))
        return div(eval_series(n->lhs, env), eval_series(n->rhs, env));
    if (const auto* n = as<pow_node>(e)) return pow(eval_series(n->base, env), n->exponent);
    if (const auto* n = as<neg_node>(e)) return -eval_series(n->arg, env);
    if (const auto* n = as<call_node>(e)) {
        if constexpr (detail::taylor_scalar<C>) {
            return taylor_apply(n->fn, eval_series(n->arg, env));
        } else {
            raise(errc::not_polynomial,
                  "analytic functions are unsupported over this coefficient field");
        }
    }
    raise(errc::invalid_input, "evaluation of empty expression");
}

/// Exact evaluation of a variable-free view of e under rational values.
inline rational eval_rational(const expr& e, const std::map<std::string, rational>& env) {
    if (const auto* c = as<const_node>(e)) return c->value;
    if (const auto* v = as<var_node>(e)) {
        auto it = env.find(v->name);
        if (it == env.end()) raise(errc::unbound_variable, "unbound variable '" + v->name + "'");
        return it->second;
    }
    if (const auto* n = as<add_node>(e))
        return eval_rational(n->lhs, env) + eval_rational(n->rhs, env);
    if (const auto* n = as<sub_node>(e))
        return eval_rational(n->lhs, env) - eval_rational(n->rhs, env);
    if (const auto* n = as<mul_node>(e))
        return eval_rational(n->lhs, env) * eval_rational(n->rhs, env);
    if (const auto* n = as<div_node>(e))
        return eval_rational(n->lhs, env) / eval_rational(n->rhs, env);
    if (const auto* n = as<pow_node>(e)) return eval_rational(n->base, env).pow(n->exponent);
    if (const auto* n = as<neg_node>(e)) return -eval_rational(n->arg, env);
    raise(errc::not_polynomial, "analytic function in exact rational evaluation");
}

/**
 * Dense polynomial image of an expression in one variable. Division is
 * admitted only by nonzero constants, negative powers only of nonzero
 * constants; any other variable or an analytic function is rejected.
 */
inline polynomial to_polynomial(const expr& e, const std::string& var) {
    if (const auto* c = as<const_node>(e)) return polynomial::constant(c->value, var);
    if (const auto* v = as<var_node>(e)) {
        if (v->name != var)
            raise(errc::not_polynomial, "unexpected variable '" + v->name + "'");
        return polynomial::variable(var);
    }
    if (const auto* n = as<add_node>(e))
        return to_polynomial(n->lhs, var) + to_polynomial(n->rhs, var);
    if (const auto* n = as<sub_node>(e))
        return to_polynomial(n->lhs, var) - to_polynomial(n->rhs, var);
    if (const auto* n = as<mul_node>(e))
        return to_polynomial(n->lhs, var) * to_polynomial(n->rhs, var);
    if (const auto* n = as<div_node>(e)) {
        const polynomial den = to_polynomial(n->rhs, var);
        if (!den.is_constant())
            raise(errc::not_polynomial, "division by a non-constant expression");
        const rational d = den.coefficient(0);
        if (d.is_zero()) raise(errc::division_by_zero, "division by zero");
        return to_polynomial(n->lhs, var) * d.inverse();
    }
    if (const auto* n = as<pow_node>(e)) {
        const polynomial base = to_polynomial(n->base, var);
        if (n->exponent < 0) {
            if (!base.is_constant())
                raise(errc::not_polynomial, "negative power of a non-constant expression");
            const rational b = base.coefficient(0);
            if (b.is_zero()) raise(errc::division_by_zero, "zero to a negative power");
            return polynomial::constant(b.pow(n->exponent), var);
        }
        polynomial acc = polynomial::constant(rational(1), var);
        for (int i = 0; i < n->exponent; ++i) acc = acc * base;
        return acc;
    }
    if (const auto* n = as<neg_node>(e)) return -to_polynomial(n->arg, var);
    raise(errc::not_polynomial, "analytic function in a polynomial context");
}

/**
 * Symbolic differentiation with constant folding and nothing more. Kept as
 * an independent oracle; the incremental solvers do not use it.
 */
inline expr symbolic_derivative(const expr& e, const std::string& var) {
    if (as<const_node>(e)) return make_const(rational(0));
    if (const auto* v = as<var_node>(e))
        return make_const(rational(v->name == var ? 1 : 0));
    if (const auto* n = as<add_node>(e))
        return make_add(symbolic_derivative(n->lhs, var), symbolic_derivative(n->rhs, var));
    if (const auto* n = as<sub_node>(e))
        return make_sub(symbolic_derivative(n->lhs, var), symbolic_derivative(n->rhs, var));
    if (const auto* n = as<mul_node>(e))
        return make_add(make_mul(symbolic_derivative(n->lhs, var), n->rhs),
                        make_mul(n->lhs, symbolic_derivative(n->rhs, var)));
    if (const auto* n = as<div_node>(e))
        return make_div(make_sub(make_mul(symbolic_derivative(n->lhs, var), n->rhs),
                                 make_mul(n->lhs, symbolic_derivative(n->rhs, var))),
                        make_pow(n->rhs, 2));
    if (const auto* n = as<pow_node>(e))
        return make_mul(make_mul(make_const(rational(n->exponent)), make_pow(n->base, n->exponent - 1)),
                        symbolic_derivative(n->base, var));
    if (const auto* n = as<neg_node>(e)) return make_neg(symbolic_derivative(n->arg, var));
    if (const auto* n = as<call_node>(e)) {
        const expr da = symbolic_derivative(n->arg, var);
        switch (n->fn) {
        case analytic_fn::sin: return make_mul(make_call(analytic_fn::cos, n->arg), da);
        case analytic_fn::cos: return make_neg(make_mul(make_call(analytic_fn::sin, n->arg), da));
        case analytic_fn::sqrt:
            return make_div(da, make_mul(make_const(rational(2)),
                                         make_call(analytic_fn::sqrt, n->arg)));
        }
    }
    raise(errc::invalid_input, "derivative of empty expression");
}

/**
 * Evaluates a curve property F(x, y) along Fermat's similar-triangles
 * parametrization of the tangent: x -> x0 + E, y -> y0*(t + E)/t, with the
 * subtangent t carried symbolically as a rational-function coefficient. The
 * order-zero coefficient of the result is F(x0, y0).
 */
inline series<rational_function> rf_series_eval(const expr& curve, const rational& x0,
                                                const rational& y0, int trunc,
                                                const std::string& xvar = "x",
                                                const std::string& yvar = "y") {
    const rational_function t = rational_function::variable("t");
    binding<rational_function> env(trunc);

    std::map<int, rational_function> xs;
    xs.emplace(0, rational_function(x0));
    xs.emplace(1, rational_function(1));
    env.bind(xvar, series<rational_function>::from_terms(std::move(xs), trunc, true));

    std::map<int, rational_function> ys;
    ys.emplace(0, rational_function(y0));
    ys.emplace(1, rational_function(y0) / t);
    env.bind(yvar, series<rational_function>::from_terms(std::move(ys), trunc, true));

    return eval_series(curve, env);
}

} // namespace adq
