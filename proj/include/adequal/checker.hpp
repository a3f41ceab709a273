#pragma once

/**
 * @file checker.hpp
 * @brief Validation of derivation steps against the relation semantics.
 *
 * A derivation is read as a chain: the first step introduces the relation
 * under consideration, every later step must follow from its predecessor by
 * its recorded rule. The two licensed kind-changing moves are
 *
 *   (a) dividing both sides of an adequality by a power of E (adequality is
 *       multiplicatively invariant), and
 *   (b) passing from an adequality to an equality by taking standard parts
 *       of both (finite) sides.
 *
 * The same moves performed under plain equality are admitted only at the
 * price of a side condition: dividing by E assumes E != 0, setting E to
 * zero assumes E == 0. Each such step looks innocent locally; a derivation
 * that accumulates both assumptions is rejected globally as an inconsistent
 * use of E. Dividing an infinite-proximity relation by E is rejected
 * outright, with a refuting instantiation attached (E and 2E are infinitely
 * close, 1 and 2 are not).
 *
 * All identity checking expands expressions over exact rationals; steps
 * containing analytic functions are reported as undecidable rather than
 * guessed at.
 */

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "adequal/derivation.hpp"
#include "adequal/eval.hpp"
#include "adequal/multipoly.hpp"
#include "adequal/series.hpp"

namespace adq {

struct step_verdict {
    enum class status { valid, invalid, undecidable };

    status state = status::valid;
    std::string reason; // why, for invalid/undecidable; how, for valid
    /// Rational values for the free variables (E stays symbolic) under which
    /// the before-relation holds and the after-relation fails.
    std::optional<std::map<std::string, rational>> counterexample;

    static step_verdict valid(std::string how) { return {status::valid, std::move(how), {}}; }
    static step_verdict invalid(std::string why) { return {status::invalid, std::move(why), {}}; }
    static step_verdict undecidable(std::string why) {
        return {status::undecidable, std::move(why), {}};
    }

    bool is_valid() const { return state == status::valid; }
};

struct derivation_report {
    std::vector<step_verdict> verdicts; // one per step; the first is the setup
    bool pattern_ok = false;            // characteristic shape of the trace
    bool e_consistent = true;           // no simultaneous E != 0 and E == 0
    std::vector<std::string> side_conditions; // recorded plus implied, deduped

    bool all_valid() const {
        for (const auto& v : verdicts)
            if (!v.is_valid()) return false;
        return true;
    }
    bool ok() const { return all_valid() && pattern_ok && e_consistent; }
};

inline const char* side_condition_nonzero = "E != 0";
inline const char* side_condition_zero = "E == 0";

namespace detail {

struct relation_sides {
    multirat lhs, rhs;
};

inline relation_sides sides_of(const step& s) {
    if (!s.lhs || !s.rhs) raise(errc::malformed_step, "step with missing side");
    return {expr_to_multirat(s.lhs), expr_to_multirat(s.rhs)};
}

inline multirat relation_difference(const relation_sides& r) { return r.lhs - r.rhs; }

/// Is after = M * before for one E-free, not identically zero multiplier M
/// applied to both sides? This is the multiplicative move adequality allows.
inline bool sides_scaled(const relation_sides& before, const relation_sides& after) {
    const bool lz_b = before.lhs.is_zero(), lz_a = after.lhs.is_zero();
    const bool rz_b = before.rhs.is_zero(), rz_a = after.rhs.is_zero();
    if (lz_b != lz_a || rz_b != rz_a) return false;
    if (lz_b && rz_b) return true;
    // Cross-ratio equality: after.lhs/before.lhs == after.rhs/before.rhs.
    if (!lz_b && !rz_b && !mr_equal(after.lhs * before.rhs, after.rhs * before.lhs)) return false;
    if (!lz_b && !mr_free_of_e(after.lhs / before.lhs)) return false;
    if (!rz_b && !mr_free_of_e(after.rhs / before.rhs)) return false;
    return true;
}

/// Is after the same relation rearranged, i.e. the two lhs - rhs
/// differences identical (optionally up to sign)?
inline bool difference_preserved(const relation_sides& before, const relation_sides& after) {
    const multirat db = relation_difference(before), da = relation_difference(after);
    return mr_equal(da, db) || mr_equal(da, -db);
}

/// Infers the E-power v >= 1 with after * E^v == before on both sides.
inline std::optional<int> division_power(const relation_sides& before,
                                         const relation_sides& after) {
    auto side_power = [](const multirat& b, const multirat& a) -> std::optional<int> {
        if (b.is_zero() && a.is_zero()) return std::nullopt; // any power fits
        if (b.is_zero() != a.is_zero()) return -1;
        return mr_valuation_e(b) - mr_valuation_e(a);
    };
    const auto vl = side_power(before.lhs, after.lhs);
    const auto vr = side_power(before.rhs, after.rhs);
    if ((vl && *vl < 0) || (vr && *vr < 0)) return std::nullopt;
    int v;
    if (vl && vr) {
        if (*vl != *vr) return std::nullopt;
        v = *vl;
    } else if (vl || vr) {
        v = vl ? *vl : *vr;
    } else {
        return std::nullopt; // both relations identically zero-zero
    }
    if (v < 1) return std::nullopt;
    const multirat ev = multirat::from_poly(multipoly::variable("E").pow(v));
    if (!mr_equal(after.lhs * ev, before.lhs)) return std::nullopt;
    if (!mr_equal(after.rhs * ev, before.rhs)) return std::nullopt;
    return v;
}

/// Is after the standard part of before, side by side?
inline bool standard_part_taken(const relation_sides& before, const relation_sides& after) {
    const multirat sl = mr_standard_part(before.lhs);
    const multirat sr = mr_standard_part(before.rhs);
    return mr_equal(after.lhs, sl) && mr_equal(after.rhs, sr);
}

inline bool finite_in_e(const multirat& a) { return a.is_zero() || mr_valuation_e(a) >= 0; }

/// Instantiates a relation at rational values (E symbolic) and evaluates
/// its truth; nullopt when the relation cannot be decided at this point.
inline std::optional<bool> relation_holds(const step& s,
                                          const std::map<std::string, rational>& values,
                                          int order = 12) {
    try {
        binding<rational> env(order);
        for (const auto& [n, q] : values) env.bind_constant(n, q);
        const series<rational> l = eval_series(s.lhs, env), r = eval_series(s.rhs, env);
        switch (s.kind) {
        case relation_kind::equality: return compare(l, r) == ordering::equal;
        case relation_kind::adequality: return adequal(l, r);
        case relation_kind::approx: return approx(l, r);
        }
    } catch (const error&) {
        return std::nullopt;
    }
    return std::nullopt;
}

/// Small grid search for values where before holds and after fails.
inline std::optional<std::map<std::string, rational>> find_counterexample(const step& before,
                                                                          const step& after) {
    std::set<std::string> names;
    collect_free_variables(before.lhs, names);
    collect_free_variables(before.rhs, names);
    collect_free_variables(after.lhs, names);
    collect_free_variables(after.rhs, names);
    names.erase("E");

    const std::vector<rational> grid = {rational(1), rational(2),  rational(3), rational(1, 2),
                                        rational(-1), rational(-2), rational(5, 3)};
    std::vector<std::string> vars(names.begin(), names.end());
    std::vector<std::size_t> idx(vars.size(), 0);
    const std::size_t total = vars.empty() ? 1 : [&] {
        std::size_t n = 1;
        for (std::size_t i = 0; i < vars.size(); ++i) n *= grid.size();
        return n;
    }();
    for (std::size_t step_i = 0; step_i < std::min<std::size_t>(total, 400); ++step_i) {
        std::map<std::string, rational> values;
        std::size_t code = step_i;
        for (const auto& v : vars) {
            values.emplace(v, grid[code % grid.size()]);
            code /= grid.size();
        }
        const auto b = relation_holds(before, values);
        const auto a = relation_holds(after, values);
        if (b && a && *b && !*a) return values;
    }
    return std::nullopt;
}

} // namespace detail

/**
 * Judges the transition before -> after under after's recorded rule.
 * Returns undecidable for steps outside the exact polynomial fragment.
 */
inline step_verdict validate_step(const step& before, const step& after) {
    detail::relation_sides b, a;
    try {
        b = detail::sides_of(before);
        a = detail::sides_of(after);
    } catch (const error& e) {
        if (e.code() == errc::not_polynomial)
            return step_verdict::undecidable("step outside the polynomial fragment");
        throw;
    }

    switch (after.rule) {
    case step_rule::substitute:
    case step_rule::cancel_common:
    case step_rule::algebra:
    case step_rule::solve: {
        if (before.kind != after.kind)
            return step_verdict::invalid("algebraic rewriting cannot change the relation kind");
        if (after.kind == relation_kind::adequality) {
            // Adequality is invariant under scaling both sides, not under
            // moving terms across (the difference form is not preserved).
            if (detail::sides_scaled(b, a))
                return step_verdict::valid("both sides scaled by an E-free factor");
            return step_verdict::invalid(
                "only multiplicative rewriting preserves adequality");
        }
        if (detail::difference_preserved(b, a))
            return step_verdict::valid("difference-preserving algebra");
        if (detail::sides_scaled(b, a))
            return step_verdict::valid("both sides scaled by an E-free factor");
        return step_verdict::invalid("not an identity-preserving rewriting");
    }

    case step_rule::group_by_sign: {
        if (before.kind != relation_kind::equality || after.kind != relation_kind::adequality)
            return step_verdict::invalid(
                "group_by_sign forms an adequality out of an algebraic equality");
        const multirat da = detail::relation_difference(a);
        const multirat db = detail::relation_difference(b);
        if (mr_equal(da, db) || mr_equal(da, -db))
            return step_verdict::valid("sign grouping preserves the difference");
        // The previous step may present the expanded difference on its
        // right-hand side (an identity step); grouping then splits that.
        if (db.is_zero() && (mr_equal(da, b.rhs) || mr_equal(da, -b.rhs)))
            return step_verdict::valid("sign grouping splits the presented difference");
        return step_verdict::invalid("grouped sides do not reproduce the difference");
    }

    case step_rule::divide_by_e: {
        const auto v = detail::division_power(b, a);
        if (!v)
            return step_verdict::invalid("sides are not an exact common E-power quotient");
        switch (before.kind) {
        case relation_kind::adequality:
            if (after.kind != relation_kind::adequality)
                return step_verdict::invalid("dividing an adequality yields an adequality");
            return step_verdict::valid("adequality is multiplicatively invariant");
        case relation_kind::equality: {
            if (after.kind != relation_kind::equality)
                return step_verdict::invalid("dividing an equality yields an equality");
            step_verdict sv = step_verdict::valid("division by E under equality; assumes E != 0");
            return sv;
        }
        case relation_kind::approx: {
            step_verdict sv =
                step_verdict::invalid("infinite proximity is not invariant under division by E");
            sv.counterexample = detail::find_counterexample(before, after);
            if (!sv.counterexample) sv.counterexample = std::map<std::string, rational>{};
            return sv;
        }
        }
        return step_verdict::invalid("unreachable");
    }

    case step_rule::discard_e: {
        if (after.kind != relation_kind::equality)
            return step_verdict::invalid("discarding E concludes with an equality");
        if (!detail::finite_in_e(b.lhs) || !detail::finite_in_e(b.rhs))
            return step_verdict::invalid("standard part requires finite sides");
        if (!detail::standard_part_taken(b, a))
            return step_verdict::invalid("sides are not the standard parts of the previous step");
        if (before.kind == relation_kind::equality)
            return step_verdict::valid("E set to zero under equality; assumes E == 0");
        return step_verdict::valid("standard parts of both finite sides");
    }
    }
    return step_verdict::invalid("unknown rule");
}

namespace detail {

/// Side conditions a step silently relies on, given its predecessor's kind.
inline std::vector<std::string> implied_side_conditions(const step& before, const step& after) {
    std::vector<std::string> out;
    if (after.rule == step_rule::divide_by_e && before.kind == relation_kind::equality)
        out.push_back(side_condition_nonzero);
    if (after.rule == step_rule::discard_e && before.kind == relation_kind::equality &&
        after.kind == relation_kind::equality)
        out.push_back(side_condition_zero);
    return out;
}

} // namespace detail

/**
 * Full report: per-step verdicts, the characteristic-pattern flag, and the
 * global consistency check over recorded and implied side conditions.
 */
inline derivation_report validate_derivation(const derivation& d) {
    if (d.steps.empty()) raise(errc::malformed_step, "empty derivation");

    derivation_report report;
    report.verdicts.push_back(step_verdict::valid("setup"));
    if (!d.steps.front().lhs || !d.steps.front().rhs)
        raise(errc::malformed_step, "step with missing side");

    auto note_condition = [&report](const std::string& c) {
        for (const auto& have : report.side_conditions)
            if (have == c) return;
        report.side_conditions.push_back(c);
    };
    for (const auto& c : d.steps.front().side_conditions) note_condition(c);

    for (std::size_t i = 1; i < d.steps.size(); ++i) {
        const step& before = d.steps[i - 1];
        const step& after = d.steps[i];
        report.verdicts.push_back(validate_step(before, after));
        for (const auto& c : after.side_conditions) note_condition(c);
        for (const auto& c : detail::implied_side_conditions(before, after)) note_condition(c);
    }

    bool saw_nonzero = false, saw_zero = false;
    for (const auto& c : report.side_conditions) {
        saw_nonzero = saw_nonzero || c == side_condition_nonzero;
        saw_zero = saw_zero || c == side_condition_zero;
    }
    report.e_consistent = !(saw_nonzero && saw_zero);
    report.pattern_ok = characteristic_pattern(d);
    return report;
}

/// One-line explanation used by reports and the command-line front end.
inline std::string failure_reason(const derivation_report& r) {
    if (!r.e_consistent) return "inconsistent use of E";
    if (!r.all_valid()) {
        for (std::size_t i = 0; i < r.verdicts.size(); ++i)
            if (!r.verdicts[i].is_valid())
                return "step " + std::to_string(i + 1) + ": " + r.verdicts[i].reason;
    }
    if (!r.pattern_ok) return "derivation lacks the adequality-then-equality shape";
    return "";
}

} // namespace adq
