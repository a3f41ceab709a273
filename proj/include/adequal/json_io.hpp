#pragma once

/**
 * @file json_io.hpp
 * @brief Problem files, derivation files and reports as JSON.
 *
 * The two file schemas are normative for the command-line front end:
 *
 * Problem file (one solver invocation):
 *   { "kind": "maximize",      "expr": "B*A - A^2", "params": {"B": "10"},
 *                              "trunc": 8 }
 *   { "kind": "tangent",       "curve": "y^2 - 4*x", "point": ["1", "2"],
 *                              "trunc": 8 }
 *   { "kind": "param-tangent", "x": "theta - sin(theta)", "y": "1 - cos(theta)",
 *                              "theta0": 1.5707963267948966,
 *                              "mode": "approx", "trunc": 8 }
 *   { "kind": "refract",       "a": 1, "b": 1, "d": 2, "v1": 1, "v2": 0.5,
 *                              "tol": 1e-9 }
 *
 * Rational-valued fields take strings in the expression grammar's rational
 * rule ("10", "-16/3") or plain JSON integers. Fields not listed for a kind
 * are forbidden; unknown keys are rejected.
 *
 * Derivation file:
 *   { "steps": [ { "lhs": "B*E", "rhs": "2*A*E + E^2", "kind": "adq",
 *                  "rule": "group_by_sign", "note": "...",
 *                  "side_conditions": [] }, ... ] }
 *
 * kind is one of "=", "adq", "approx".
 */

#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "adequal/checker.hpp"
#include "adequal/derivation.hpp"
#include "adequal/solvers.hpp"

namespace adq {

using json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// Problem files
// ---------------------------------------------------------------------------

enum class problem_kind { maximize, tangent, param_tangent, refract };

struct problem {
    problem_kind kind;
    int trunc = series<rational>::default_order;

    // maximize
    expr expression;
    std::map<std::string, rational> params;

    // tangent
    expr curve;
    rational x0, y0;

    // param-tangent
    expr x_expr, y_expr;
    bool approx_mode = false;
    rational theta0_exact;
    double theta0_approx = 0.0;

    // refract
    double a = 0, b = 0, d = 0, v1 = 0, v2 = 0;
    double tol = 1e-9;
};

namespace detail {

inline rational rational_from_json(const json& v, const std::string& field) {
    if (v.is_string()) return rational::from_string(v.get<std::string>());
    if (v.is_number_integer()) return rational(v.get<long>());
    raise(errc::invalid_input, "field '" + field + "' must be a rational string or integer");
}

inline double number_from_json(const json& v, const std::string& field) {
    if (v.is_number()) return v.get<double>();
    raise(errc::invalid_input, "field '" + field + "' must be a number");
}

inline expr expr_from_json(const json& v, const std::string& field) {
    if (!v.is_string()) raise(errc::invalid_input, "field '" + field + "' must be a string");
    return parse(v.get<std::string>());
}

inline void check_keys(const json& j, const std::vector<std::string>& required,
                       const std::vector<std::string>& optional) {
    for (const auto& k : required)
        if (!j.contains(k)) raise(errc::invalid_input, "missing required field '" + k + "'");
    for (auto it = j.begin(); it != j.end(); ++it) {
        const std::string& k = it.key();
        bool known = false;
        for (const auto& r : required) known = known || k == r;
        for (const auto& o : optional) known = known || k == o;
        if (!known) raise(errc::invalid_input, "unknown field '" + k + "'");
    }
}

} // namespace detail

inline problem parse_problem(const json& j) {
    if (!j.is_object()) raise(errc::invalid_input, "problem file must be a JSON object");
    if (!j.contains("kind") || !j["kind"].is_string())
        raise(errc::invalid_input, "missing or non-string 'kind'");
    const std::string kind = j["kind"].get<std::string>();

    problem p;
    if (kind == "maximize") {
        p.kind = problem_kind::maximize;
        detail::check_keys(j, {"kind", "expr"}, {"params", "trunc"});
        p.expression = detail::expr_from_json(j["expr"], "expr");
        if (j.contains("params")) {
            if (!j["params"].is_object())
                raise(errc::invalid_input, "field 'params' must be an object");
            for (auto it = j["params"].begin(); it != j["params"].end(); ++it)
                p.params.emplace(it.key(), detail::rational_from_json(it.value(), it.key()));
        }
    } else if (kind == "tangent") {
        p.kind = problem_kind::tangent;
        detail::check_keys(j, {"kind", "curve", "point"}, {"trunc"});
        p.curve = detail::expr_from_json(j["curve"], "curve");
        const json& pt = j["point"];
        if (!pt.is_array() || pt.size() != 2)
            raise(errc::invalid_input, "field 'point' must be a two-element array");
        p.x0 = detail::rational_from_json(pt[0], "point[0]");
        p.y0 = detail::rational_from_json(pt[1], "point[1]");
    } else if (kind == "param-tangent") {
        p.kind = problem_kind::param_tangent;
        detail::check_keys(j, {"kind", "x", "y", "theta0"}, {"mode", "trunc"});
        p.x_expr = detail::expr_from_json(j["x"], "x");
        p.y_expr = detail::expr_from_json(j["y"], "y");
        const json& t0 = j["theta0"];
        bool mode_known = j.contains("mode");
        std::string mode;
        if (mode_known) {
            if (!j["mode"].is_string() || (j["mode"] != "exact" && j["mode"] != "approx"))
                raise(errc::invalid_input, "field 'mode' must be \"exact\" or \"approx\"");
            mode = j["mode"].get<std::string>();
        }
        if (t0.is_string() || t0.is_number_integer()) {
            p.theta0_exact = detail::rational_from_json(t0, "theta0");
            p.approx_mode = mode_known && mode == "approx";
            p.theta0_approx = p.theta0_exact.to_double();
        } else if (t0.is_number()) {
            p.theta0_approx = t0.get<double>();
            p.approx_mode = !mode_known || mode == "approx";
            p.theta0_exact = rational(p.theta0_approx);
        } else {
            raise(errc::invalid_input, "field 'theta0' must be a number or rational string");
        }
    } else if (kind == "refract") {
        p.kind = problem_kind::refract;
        detail::check_keys(j, {"kind", "a", "b", "d", "v1", "v2"}, {"tol"});
        p.a = detail::number_from_json(j["a"], "a");
        p.b = detail::number_from_json(j["b"], "b");
        p.d = detail::number_from_json(j["d"], "d");
        p.v1 = detail::number_from_json(j["v1"], "v1");
        p.v2 = detail::number_from_json(j["v2"], "v2");
        if (j.contains("tol")) p.tol = detail::number_from_json(j["tol"], "tol");
    } else {
        raise(errc::invalid_input, "unknown problem kind '" + kind + "'");
    }

    if (j.contains("trunc")) {
        if (!j["trunc"].is_number_integer())
            raise(errc::invalid_input, "field 'trunc' must be an integer");
        p.trunc = j["trunc"].get<int>();
        if (p.trunc < 1) raise(errc::invalid_precision, "trunc must be >= 1");
    }
    return p;
}

// ---------------------------------------------------------------------------
// Derivations
// ---------------------------------------------------------------------------

inline json derivation_to_json(const derivation& d) {
    json steps = json::array();
    for (const auto& s : d.steps) {
        json js;
        js["lhs"] = render(s.lhs);
        js["rhs"] = render(s.rhs);
        js["kind"] = relation_token(s.kind);
        js["rule"] = rule_token(s.rule);
        js["note"] = s.note;
        js["side_conditions"] = s.side_conditions;
        steps.push_back(std::move(js));
    }
    json out;
    out["steps"] = std::move(steps);
    return out;
}

inline derivation derivation_from_json(const json& j) {
    const json* root = &j;
    if (j.is_object() && j.contains("derivation")) root = &j["derivation"];
    if (!root->is_object() || !root->contains("steps") || !(*root)["steps"].is_array())
        raise(errc::invalid_input, "derivation file must carry a 'steps' array");
    const json& steps = (*root)["steps"];
    if (steps.empty()) raise(errc::invalid_input, "empty steps array");

    derivation d;
    for (const auto& js : steps) {
        if (!js.is_object()) raise(errc::invalid_input, "each step must be an object");
        detail::check_keys(js, {"lhs", "rhs", "kind", "rule"}, {"note", "side_conditions"});
        step s;
        s.lhs = detail::expr_from_json(js["lhs"], "lhs");
        s.rhs = detail::expr_from_json(js["rhs"], "rhs");
        if (!js["kind"].is_string()) raise(errc::invalid_input, "step 'kind' must be a string");
        s.kind = relation_from_token(js["kind"].get<std::string>());
        if (!js["rule"].is_string()) raise(errc::invalid_input, "step 'rule' must be a string");
        s.rule = rule_from_token(js["rule"].get<std::string>());
        if (js.contains("note")) {
            if (!js["note"].is_string()) raise(errc::invalid_input, "step 'note' must be a string");
            s.note = js["note"].get<std::string>();
        }
        if (js.contains("side_conditions")) {
            if (!js["side_conditions"].is_array())
                raise(errc::invalid_input, "step 'side_conditions' must be an array");
            for (const auto& c : js["side_conditions"]) {
                if (!c.is_string())
                    raise(errc::invalid_input, "side conditions must be strings");
                s.side_conditions.push_back(c.get<std::string>());
            }
        }
        d.steps.push_back(std::move(s));
    }
    return d;
}

// ---------------------------------------------------------------------------
// Results and reports
// ---------------------------------------------------------------------------

inline json result_to_json(const extremum_result& r) {
    json out;
    out["kind"] = "maximize";
    out["unknown"] = r.unknown;
    out["critical_equation"] = r.critical_equation.to_string();
    json roots = json::array();
    for (const auto& q : r.rational_roots) roots.push_back(q.to_string());
    out["rational_roots"] = std::move(roots);
    return out;
}

inline json result_to_json(const tangent_result& r) {
    json out;
    out["kind"] = "tangent";
    out["subtangent"] = r.subtangent.to_string();
    return out;
}

template <typename C>
json result_to_json(const slope_result<C>& r) {
    json out;
    out["kind"] = "param-tangent";
    if constexpr (std::same_as<C, rational>) {
        out["mode"] = "exact";
        out["slope"] = r.slope.to_string();
    } else {
        out["mode"] = "approx";
        out["slope"] = r.slope.value();
    }
    return out;
}

inline json result_to_json(const refraction_result& r) {
    json out;
    out["kind"] = "refract";
    out["x_star"] = r.x_star;
    out["theta1"] = r.theta1;
    out["theta2"] = r.theta2;
    out["snell_residual"] = r.snell_residual;
    return out;
}

inline json report_to_json(const derivation_report& r) {
    json steps = json::array();
    for (std::size_t i = 0; i < r.verdicts.size(); ++i) {
        const auto& v = r.verdicts[i];
        json js;
        js["index"] = i + 1;
        js["verdict"] = v.state == step_verdict::status::valid        ? "valid"
                        : v.state == step_verdict::status::invalid    ? "invalid"
                                                                      : "undecidable";
        js["reason"] = v.reason;
        if (v.counterexample) {
            json cx = json::object();
            for (const auto& [name, val] : *v.counterexample) cx[name] = val.to_string();
            js["counterexample"] = std::move(cx);
        }
        steps.push_back(std::move(js));
    }
    json out;
    out["steps"] = std::move(steps);
    out["pattern_ok"] = r.pattern_ok;
    out["e_consistent"] = r.e_consistent;
    out["side_conditions"] = r.side_conditions;
    out["ok"] = r.ok();
    if (!r.ok()) out["reason"] = failure_reason(r);
    return out;
}

} // namespace adq
