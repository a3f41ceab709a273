#pragma once

/**
 * @file derivation.hpp
 * @brief Relation steps and derivations, with the two rendering styles.
 *
 * A derivation is an ordered list of relation steps lhs ~ rhs, each tagged
 * with the kind of relation (equality, adequality, or infinite proximity)
 * and the rewrite rule that produced it. Successful solver traces follow the
 * characteristic shape: algebraic equalities, then a contiguous block of
 * adequalities, then exactly one closing equality.
 */

#include <string>
#include <vector>

#include "adequal/errors.hpp"
#include "adequal/expr.hpp"

namespace adq {

enum class relation_kind { equality, adequality, approx };

enum class step_rule { substitute, cancel_common, group_by_sign, divide_by_e, discard_e, algebra, solve };

inline const char* relation_token(relation_kind k) {
    switch (k) {
    case relation_kind::equality: return "=";
    case relation_kind::adequality: return "adq";
    case relation_kind::approx: return "approx";
    }
    return "?";
}

inline relation_kind relation_from_token(const std::string& s) {
    if (s == "=") return relation_kind::equality;
    if (s == "adq") return relation_kind::adequality;
    if (s == "approx") return relation_kind::approx;
    raise(errc::invalid_input, "unknown relation kind '" + s + "'");
}

inline const char* rule_token(step_rule r) {
    switch (r) {
    case step_rule::substitute: return "substitute";
    case step_rule::cancel_common: return "cancel_common";
    case step_rule::group_by_sign: return "group_by_sign";
    case step_rule::divide_by_e: return "divide_by_e";
    case step_rule::discard_e: return "discard_e";
    case step_rule::algebra: return "algebra";
    case step_rule::solve: return "solve";
    }
    return "?";
}

inline step_rule rule_from_token(const std::string& s) {
    if (s == "substitute") return step_rule::substitute;
    if (s == "cancel_common") return step_rule::cancel_common;
    if (s == "group_by_sign") return step_rule::group_by_sign;
    if (s == "divide_by_e") return step_rule::divide_by_e;
    if (s == "discard_e") return step_rule::discard_e;
    if (s == "algebra") return step_rule::algebra;
    if (s == "solve") return step_rule::solve;
    raise(errc::invalid_input, "unknown rule '" + s + "'");
}

struct step {
    expr lhs;
    expr rhs;
    relation_kind kind = relation_kind::equality;
    step_rule rule = step_rule::algebra;
    std::string note;
    std::vector<std::string> side_conditions;
};

struct derivation {
    std::vector<step> steps;
};

enum class render_style { modern, herigone };

namespace detail {

inline std::string lowercased(std::string s) {
    for (char& c : s)
        if (c >= 'A' && c <= 'Z') c = char(c - 'A' + 'a');
    return s;
}

// The renderer emits spaces only around additive operators, so collapsing
// them is a faithful compact form.
inline std::string compacted(const std::string& s) {
    std::string out;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == ' ' && i + 2 < s.size() && (s[i + 1] == '+' || s[i + 1] == '-') &&
            s[i + 2] == ' ') {
            out += s[i + 1];
            i += 2;
        } else {
            out += s[i];
        }
    }
    return out;
}

} // namespace detail

/**
 * One line per step. Modern style writes "lhs = rhs" / "lhs adq rhs".
 * The Herigone style uses his single relation sign 2|2 for every kind and
 * keeps his displayed order, right-hand side first, in lower case and
 * without spacing inside the sides.
 */
inline std::string render_step(const step& s, render_style style = render_style::modern) {
    if (style == render_style::herigone)
        return detail::lowercased(detail::compacted(render(s.rhs))) + " 2|2 " +
               detail::lowercased(detail::compacted(render(s.lhs)));
    return render(s.lhs) + " " + relation_token(s.kind) + " " + render(s.rhs);
}

/// Shape check used by the derivation pattern flag: zero or more equalities,
/// one contiguous nonempty run of adequalities, then exactly one equality.
inline bool characteristic_pattern(const derivation& d) {
    const auto& st = d.steps;
    std::size_t i = 0;
    while (i < st.size() && st[i].kind == relation_kind::equality) ++i;
    const std::size_t block = i;
    while (i < st.size() && st[i].kind == relation_kind::adequality) ++i;
    if (i == block) return false;           // no adequality block
    if (i + 1 != st.size()) return false;   // more than one step after the block
    return st[i].kind == relation_kind::equality;
}

} // namespace adq
