#pragma once

/**
 * @file expr.hpp
 * @brief The expression language: AST, parser and renderer.
 *
 * Grammar (whitespace insignificant, no implicit multiplication):
 *
 *   expr     := term (('+'|'-') term)*
 *   term     := factor (('*'|'/') factor)*
 *   factor   := atom ('^' int)?
 *   atom     := rational | ident | func '(' expr ')' | '(' expr ')' | '-' atom
 *   rational := int ('/' posint)?
 *   ident    := [A-Za-z][A-Za-z0-9_]*
 *   func     := 'sin' | 'cos' | 'sqrt'
 *
 * The name "E" is reserved for the infinitesimal. Rendered expressions use
 * the same grammar, so every render re-parses. Nodes are immutable and
 * shared; an expr value can be copied and passed between threads freely.
 */

#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <variant>

#include "adequal/coefficient.hpp"
#include "adequal/errors.hpp"
#include "adequal/rational.hpp"

namespace adq {

struct expr_node;
using expr = std::shared_ptr<const expr_node>;

struct const_node {
    rational value;
};
struct var_node {
    std::string name;
};
struct add_node {
    expr lhs, rhs;
};
struct sub_node {
    expr lhs, rhs;
};
struct mul_node {
    expr lhs, rhs;
};
struct div_node {
    expr lhs, rhs;
};
struct pow_node {
    expr base;
    int exponent;
};
struct neg_node {
    expr arg;
};
struct call_node {
    analytic_fn fn;
    expr arg;
};

struct expr_node {
    std::variant<const_node, var_node, add_node, sub_node, mul_node, div_node, pow_node, neg_node,
                 call_node>
        node;
};

template <typename T>
const T* as(const expr& e) {
    return e ? std::get_if<T>(&e->node) : nullptr;
}

inline expr make_const(rational q) {
    return std::make_shared<expr_node>(expr_node{const_node{std::move(q)}});
}
inline expr make_var(std::string name) {
    return std::make_shared<expr_node>(expr_node{var_node{std::move(name)}});
}

inline expr make_neg(expr a) {
    if (const auto* c = as<const_node>(a)) return make_const(-c->value);
    if (const auto* n = as<neg_node>(a)) return n->arg;
    return std::make_shared<expr_node>(expr_node{neg_node{std::move(a)}});
}

inline expr make_add(expr l, expr r) {
    const auto *cl = as<const_node>(l), *cr = as<const_node>(r);
    if (cl && cr) return make_const(cl->value + cr->value);
    if (cl && cl->value.is_zero()) return r;
    if (cr && cr->value.is_zero()) return l;
    return std::make_shared<expr_node>(expr_node{add_node{std::move(l), std::move(r)}});
}

inline expr make_sub(expr l, expr r) {
    const auto *cl = as<const_node>(l), *cr = as<const_node>(r);
    if (cl && cr) return make_const(cl->value - cr->value);
    if (cr && cr->value.is_zero()) return l;
    if (cl && cl->value.is_zero()) return make_neg(r);
    return std::make_shared<expr_node>(expr_node{sub_node{std::move(l), std::move(r)}});
}

inline expr make_mul(expr l, expr r) {
    const auto *cl = as<const_node>(l), *cr = as<const_node>(r);
    if (cl && cr) return make_const(cl->value * cr->value);
    if (cl && cl->value.is_zero()) return make_const(rational(0));
    if (cr && cr->value.is_zero()) return make_const(rational(0));
    if (cl && cl->value.is_one()) return r;
    if (cr && cr->value.is_one()) return l;
    return std::make_shared<expr_node>(expr_node{mul_node{std::move(l), std::move(r)}});
}

inline expr make_div(expr l, expr r) {
    const auto *cl = as<const_node>(l), *cr = as<const_node>(r);
    if (cr && cr->value.is_one()) return l;
    if (cl && cr && !cr->value.is_zero()) return make_const(cl->value / cr->value);
    return std::make_shared<expr_node>(expr_node{div_node{std::move(l), std::move(r)}});
}

inline expr make_pow(expr base, int exponent) {
    if (exponent == 1) return base;
    if (exponent == 0) return make_const(rational(1));
    if (const auto* c = as<const_node>(base)) {
        if (!c->value.is_zero() || exponent > 0) return make_const(c->value.pow(exponent));
    }
    return std::make_shared<expr_node>(expr_node{pow_node{std::move(base), exponent}});
}

inline expr make_call(analytic_fn fn, expr arg) {
    return std::make_shared<expr_node>(expr_node{call_node{fn, std::move(arg)}});
}

inline bool structurally_equal(const expr& a, const expr& b) {
    if (a == b) return true;
    if (!a || !b) return false;
    if (a->node.index() != b->node.index()) return false;
    if (const auto* c = as<const_node>(a)) return c->value == as<const_node>(b)->value;
    if (const auto* v = as<var_node>(a)) return v->name == as<var_node>(b)->name;
    if (const auto* n = as<add_node>(a)) {
        const auto* m = as<add_node>(b);
        return structurally_equal(n->lhs, m->lhs) && structurally_equal(n->rhs, m->rhs);
    }
    if (const auto* n = as<sub_node>(a)) {
        const auto* m = as<sub_node>(b);
        return structurally_equal(n->lhs, m->lhs) && structurally_equal(n->rhs, m->rhs);
    }
    if (const auto* n = as<mul_node>(a)) {
        const auto* m = as<mul_node>(b);
        return structurally_equal(n->lhs, m->lhs) && structurally_equal(n->rhs, m->rhs);
    }
    if (const auto* n = as<div_node>(a)) {
        const auto* m = as<div_node>(b);
        return structurally_equal(n->lhs, m->lhs) && structurally_equal(n->rhs, m->rhs);
    }
    if (const auto* n = as<pow_node>(a)) {
        const auto* m = as<pow_node>(b);
        return n->exponent == m->exponent && structurally_equal(n->base, m->base);
    }
    if (const auto* n = as<neg_node>(a)) return structurally_equal(n->arg, as<neg_node>(b)->arg);
    if (const auto* n = as<call_node>(a)) {
        const auto* m = as<call_node>(b);
        return n->fn == m->fn && structurally_equal(n->arg, m->arg);
    }
    return false;
}

inline void collect_free_variables(const expr& e, std::set<std::string>& out) {
    if (const auto* v = as<var_node>(e)) {
        out.insert(v->name);
        return;
    }
    if (const auto* n = as<add_node>(e)) {
        collect_free_variables(n->lhs, out);
        collect_free_variables(n->rhs, out);
    } else if (const auto* n = as<sub_node>(e)) {
        collect_free_variables(n->lhs, out);
        collect_free_variables(n->rhs, out);
    } else if (const auto* n = as<mul_node>(e)) {
        collect_free_variables(n->lhs, out);
        collect_free_variables(n->rhs, out);
    } else if (const auto* n = as<div_node>(e)) {
        collect_free_variables(n->lhs, out);
        collect_free_variables(n->rhs, out);
    } else if (const auto* n = as<pow_node>(e)) {
        collect_free_variables(n->base, out);
    } else if (const auto* n = as<neg_node>(e)) {
        collect_free_variables(n->arg, out);
    } else if (const auto* n = as<call_node>(e)) {
        collect_free_variables(n->arg, out);
    }
}

inline std::set<std::string> free_variables(const expr& e) {
    std::set<std::string> out;
    collect_free_variables(e, out);
    return out;
}

/// Replaces every occurrence of a variable, rebuilding (and folding) nodes.
inline expr substitute(const expr& e, const std::string& var, const expr& replacement) {
    if (const auto* v = as<var_node>(e)) return v->name == var ? replacement : e;
    if (as<const_node>(e)) return e;
    if (const auto* n = as<add_node>(e))
        return make_add(substitute(n->lhs, var, replacement), substitute(n->rhs, var, replacement));
    if (const auto* n = as<sub_node>(e))
        return make_sub(substitute(n->lhs, var, replacement), substitute(n->rhs, var, replacement));
    if (const auto* n = as<mul_node>(e))
        return make_mul(substitute(n->lhs, var, replacement), substitute(n->rhs, var, replacement));
    if (const auto* n = as<div_node>(e))
        return make_div(substitute(n->lhs, var, replacement), substitute(n->rhs, var, replacement));
    if (const auto* n = as<pow_node>(e))
        return make_pow(substitute(n->base, var, replacement), n->exponent);
    if (const auto* n = as<neg_node>(e)) return make_neg(substitute(n->arg, var, replacement));
    if (const auto* n = as<call_node>(e))
        return make_call(n->fn, substitute(n->arg, var, replacement));
    return e;
}

// ---------------------------------------------------------------------------
// Parser
// ---------------------------------------------------------------------------

namespace detail {

class expr_parser {
public:
    explicit expr_parser(std::string_view src) : src_(src) {}

    expr run() {
        expr e = parse_expr();
        skip_ws();
        if (pos_ != src_.size())
            raise_at(errc::syntax_error, "unexpected trailing input", pos_);
        return e;
    }

private:
    void skip_ws() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    }
    char peek() const { return pos_ < src_.size() ? src_[pos_] : '\0'; }
    bool eat(char c) {
        skip_ws();
        if (peek() == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    expr parse_expr() {
        expr lhs = parse_term();
        for (;;) {
            skip_ws();
            if (eat('+'))
                lhs = make_add(lhs, parse_term());
            else if (eat('-'))
                lhs = make_sub(lhs, parse_term());
            else
                return lhs;
        }
    }

    expr parse_term() {
        expr lhs = parse_factor();
        for (;;) {
            skip_ws();
            if (eat('*'))
                lhs = make_mul(lhs, parse_factor());
            else if (eat('/'))
                lhs = make_div(lhs, parse_factor());
            else
                return lhs;
        }
    }

    expr parse_factor() {
        expr base = parse_atom();
        skip_ws();
        if (eat('^')) return make_pow(base, parse_exponent());
        return base;
    }

    int parse_exponent() {
        skip_ws();
        bool neg = false;
        if (peek() == '-') {
            neg = true;
            ++pos_;
        }
        skip_ws();
        const std::size_t start = pos_;
        if (!std::isdigit(static_cast<unsigned char>(peek())))
            raise_at(errc::syntax_error, "integer exponent expected", pos_);
        long v = 0;
        while (std::isdigit(static_cast<unsigned char>(peek()))) {
            v = v * 10 + (src_[pos_] - '0');
            if (v > 1'000'000) raise_at(errc::syntax_error, "exponent too large", start);
            ++pos_;
        }
        return static_cast<int>(neg ? -v : v);
    }

    expr parse_atom() {
        skip_ws();
        if (pos_ >= src_.size()) raise_at(errc::syntax_error, "unexpected end of input", pos_);
        const char c = peek();
        if (c == '(') {
            ++pos_;
            expr e = parse_expr();
            if (!eat(')')) raise_at(errc::syntax_error, "')' expected", pos_);
            return e;
        }
        if (c == '-') {
            ++pos_;
            return make_neg(parse_atom());
        }
        if (std::isdigit(static_cast<unsigned char>(c))) return parse_rational();
        if (std::isalpha(static_cast<unsigned char>(c))) return parse_ident();
        raise_at(errc::syntax_error, std::string("unexpected character '") + c + "'", pos_);
    }

    mpz_class parse_integer() {
        std::string digits;
        while (std::isdigit(static_cast<unsigned char>(peek()))) digits += src_[pos_++];
        return mpz_class(digits);
    }

    expr parse_rational() {
        const mpz_class num = parse_integer();
        const std::size_t save = pos_;
        skip_ws();
        if (peek() == '/') {
            ++pos_;
            skip_ws();
            if (std::isdigit(static_cast<unsigned char>(peek()))) {
                const std::size_t den_at = pos_;
                const mpz_class den = parse_integer();
                if (den == 0) raise_at(errc::syntax_error, "zero denominator in rational", den_at);
                return make_const(rational(mpq_class(num, den)));
            }
            pos_ = save; // the '/' belongs to the term level
        } else {
            pos_ = save;
        }
        return make_const(rational(num));
    }

    expr parse_ident() {
        const std::size_t start = pos_;
        std::string name;
        name += src_[pos_++];
        while (pos_ < src_.size()) {
            const char c = src_[pos_];
            if (std::isalnum(static_cast<unsigned char>(c)) || c == '_')
                name += src_[pos_++];
            else
                break;
        }
        skip_ws();
        if (peek() == '(') {
            ++pos_;
            analytic_fn fn;
            if (name == "sin")
                fn = analytic_fn::sin;
            else if (name == "cos")
                fn = analytic_fn::cos;
            else if (name == "sqrt")
                fn = analytic_fn::sqrt;
            else
                raise_at(errc::unknown_function, "unknown function '" + name + "'", start);
            expr arg = parse_expr();
            if (!eat(')')) raise_at(errc::syntax_error, "')' expected", pos_);
            return make_call(fn, arg);
        }
        return make_var(std::move(name));
    }

    std::string_view src_;
    std::size_t pos_ = 0;
};

} // namespace detail

inline expr parse(std::string_view text) { return detail::expr_parser(text).run(); }

// ---------------------------------------------------------------------------
// Renderer
// ---------------------------------------------------------------------------

namespace detail {

// Precedence levels used when rendering: 1 additive, 2 multiplicative,
// 3 power, 4 self-contained atom. Level 0 marks operands that must always be
// parenthesized in operand position (negations, negative constants).
struct rendered {
    std::string text;
    int level;
};

inline rendered render_node(const expr& e);

inline std::string render_operand(const expr& e, int min_level) {
    rendered r = render_node(e);
    if (r.level < min_level) return "(" + r.text + ")";
    return r.text;
}

inline rendered render_node(const expr& e) {
    if (const auto* c = as<const_node>(e)) {
        const int lvl = c->value.sign() < 0 ? 0 : (c->value.is_integer() ? 4 : 2);
        return {c->value.to_string(), lvl};
    }
    if (const auto* v = as<var_node>(e)) return {v->name, 4};
    if (const auto* n = as<add_node>(e))
        return {render_operand(n->lhs, 1) + " + " + render_operand(n->rhs, 2), 1};
    if (const auto* n = as<sub_node>(e))
        return {render_operand(n->lhs, 1) + " - " + render_operand(n->rhs, 2), 1};
    if (const auto* n = as<mul_node>(e)) {
        // A leading negative constant reads naturally without parentheses
        // ("-2*A*E"); it re-parses to the same folded tree.
        if (const auto* c = as<const_node>(n->lhs); c && c->value.sign() < 0)
            return {c->value.to_string() + "*" + render_operand(n->rhs, 3), 0};
        return {render_operand(n->lhs, 2) + "*" + render_operand(n->rhs, 3), 2};
    }
    if (const auto* n = as<div_node>(e)) {
        std::string lhs = render_operand(n->lhs, 2);
        std::string rhs = render_operand(n->rhs, 4);
        // A digit/digit seam would re-lex as a rational literal.
        if (!lhs.empty() && std::isdigit(static_cast<unsigned char>(lhs.back())) && !rhs.empty() &&
            std::isdigit(static_cast<unsigned char>(rhs.front())))
            rhs = "(" + rhs + ")";
        return {lhs + "/" + rhs, 2};
    }
    if (const auto* n = as<pow_node>(e))
        return {render_operand(n->base, 4) + "^" + std::to_string(n->exponent), 3};
    if (const auto* n = as<neg_node>(e)) return {"-" + render_operand(n->arg, 4), 0};
    if (const auto* n = as<call_node>(e)) {
        const char* name = n->fn == analytic_fn::sin ? "sin"
                           : n->fn == analytic_fn::cos ? "cos"
                                                       : "sqrt";
        return {std::string(name) + "(" + render_node(n->arg).text + ")", 4};
    }
    raise(errc::invalid_input, "render of empty expression");
}

} // namespace detail

/// Canonical rendering in the expression grammar; always re-parses.
inline std::string render(const expr& e) { return detail::render_node(e).text; }

} // namespace adq
