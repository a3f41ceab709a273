#pragma once

/**
 * @file cli_app.hpp
 * @brief The batch command-line front end, callable from tests.
 *
 * Three subcommands:
 *   solve <problem.json> [--order N] [--style modern|herigone] [--json] [--tol x]
 *   check <derivation.json> [--json]
 *   eval <expr> [--bind name=expr ...] [--order N]
 *
 * Exit codes: 0 success; 1 input error; 2 mathematical error (degenerate
 * problem, vertical tangent, ...); 3 a checked derivation was rejected.
 * eval reports every failure as an input error. All configuration comes
 * from flags and file contents; no environment variables are consulted.
 */

#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "adequal/json_io.hpp"

namespace adq {

namespace detail {

inline bool is_input_error(errc c) {
    switch (c) {
    case errc::syntax_error:
    case errc::unknown_function:
    case errc::invalid_input:
    case errc::unbound_variable:
    case errc::malformed_step:
    case errc::invalid_precision:
        return true;
    default:
        return false;
    }
}

inline json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) raise(errc::invalid_input, "cannot open '" + path + "'");
    try {
        return json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        raise(errc::invalid_input, e.what()); // carries the byte offset
    }
}

inline void print_steps(const derivation& d, render_style style, std::ostream& out) {
    for (const auto& s : d.steps) out << render_step(s, style) << "\n";
}

struct solve_output {
    json result;
    const derivation* trace = nullptr; // null for refract
    std::vector<std::string> lines;    // human result lines
};

inline int cmd_solve(const std::string& path, int order_flag, bool order_given,
                     const std::string& style_name, bool as_json, double tol_flag, bool tol_given,
                     std::ostream& out) {
    const json jf = load_json_file(path);
    problem p = parse_problem(jf);
    if (order_given) {
        if (order_flag < 1) raise(errc::invalid_precision, "--order must be >= 1");
        p.trunc = order_flag;
    }
    if (tol_given) p.tol = tol_flag;
    const render_style style =
        style_name == "herigone" ? render_style::herigone : render_style::modern;

    solve_output so;
    extremum_result er;
    tangent_result tr;
    slope_result<rational> sr_exact;
    slope_result<approx_real> sr_approx;
    refraction_result rr;

    switch (p.kind) {
    case problem_kind::maximize: {
        er = maximize(p.expression, p.params, p.trunc);
        so.result = result_to_json(er);
        so.trace = &er.trace;
        if (er.rational_roots.empty()) {
            so.lines.push_back("critical equation: " + er.critical_equation.to_string() +
                               " = 0 (no rational roots)");
        } else {
            for (const auto& root : er.rational_roots)
                so.lines.push_back(er.unknown + " = " + root.to_string());
        }
        break;
    }
    case problem_kind::tangent: {
        tr = subtangent(p.curve, p.x0, p.y0, p.trunc);
        so.result = result_to_json(tr);
        so.trace = &tr.trace;
        so.lines.push_back("t = " + tr.subtangent.to_string());
        break;
    }
    case problem_kind::param_tangent: {
        if (p.approx_mode) {
            sr_approx = parametric_tangent(p.x_expr, p.y_expr, approx_real(p.theta0_approx),
                                           p.trunc);
            so.result = result_to_json(sr_approx);
            so.trace = &sr_approx.trace;
            so.lines.push_back("slope = " + sr_approx.slope.to_string());
        } else {
            sr_exact = parametric_tangent(p.x_expr, p.y_expr, p.theta0_exact, p.trunc);
            so.result = result_to_json(sr_exact);
            so.trace = &sr_exact.trace;
            so.lines.push_back("slope = " + sr_exact.slope.to_string());
        }
        break;
    }
    case problem_kind::refract: {
        rr = refract(p.a, p.b, p.d, p.v1, p.v2, p.tol);
        so.result = result_to_json(rr);
        std::ostringstream os;
        os.precision(15);
        os << "x* = " << rr.x_star;
        so.lines.push_back(os.str());
        os.str("");
        os << "theta1 = " << rr.theta1;
        so.lines.push_back(os.str());
        os.str("");
        os << "theta2 = " << rr.theta2;
        so.lines.push_back(os.str());
        os.str("");
        os << "snell residual = " << rr.snell_residual;
        so.lines.push_back(os.str());
        break;
    }
    }

    if (as_json) {
        json payload;
        payload["result"] = so.result;
        if (so.trace) payload["derivation"] = derivation_to_json(*so.trace);
        out << payload.dump(2) << "\n";
    } else {
        if (so.trace) print_steps(*so.trace, style, out);
        for (const auto& line : so.lines) out << line << "\n";
    }
    return 0;
}

inline int cmd_check(const std::string& path, bool as_json, std::ostream& out) {
    const json jf = load_json_file(path);
    const derivation d = derivation_from_json(jf);
    const derivation_report report = validate_derivation(d);
    if (as_json) {
        out << report_to_json(report).dump(2) << "\n";
    } else {
        for (std::size_t i = 0; i < report.verdicts.size(); ++i) {
            const auto& v = report.verdicts[i];
            const char* tag = v.state == step_verdict::status::valid        ? "valid"
                              : v.state == step_verdict::status::invalid    ? "invalid"
                                                                            : "undecidable";
            out << "step " << (i + 1) << ": " << tag << " (" << v.reason << ")\n";
        }
        out << "pattern: " << (report.pattern_ok ? "adequality-then-equality" : "not satisfied")
            << "\n";
        if (report.ok())
            out << "OK\n";
        else
            out << "REJECTED: " << failure_reason(report) << "\n";
    }
    return report.ok() ? 0 : 3;
}

inline int cmd_eval(const std::string& text, const std::vector<std::string>& binds, int order,
                    std::ostream& out) {
    binding<rational> env(order);
    for (const auto& spec : binds) {
        const auto eq = spec.find('=');
        if (eq == std::string::npos || eq == 0)
            raise(errc::invalid_input, "--bind expects name=expr, got '" + spec + "'");
        const std::string name = spec.substr(0, eq);
        env.bind(name, eval_series(parse(spec.substr(eq + 1)), env));
    }
    const series<rational> value = eval_series(parse(text), env);
    out << to_string(value) << "\n";
    return 0;
}

} // namespace detail

/// Runs the front end on an argv-style vector (program name excluded).
inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"exact adequality engine: infinitesimal series arithmetic, incremental "
                 "solvers, derivation checking"};
    app.require_subcommand(1);

    std::string solve_file, style = "modern";
    int order = series<rational>::default_order;
    bool as_json = false;
    double tol = 1e-9;
    auto* solve = app.add_subcommand("solve", "run a solver on a JSON problem file");
    solve->add_option("file", solve_file, "problem file")->required();
    auto* order_opt = solve->add_option("--order", order, "series truncation order");
    solve->add_option("--style", style, "trace style: modern or herigone")
        ->check(CLI::IsMember({"modern", "herigone"}));
    solve->add_flag("--json", as_json, "emit result and derivation as JSON");
    auto* tol_opt = solve->add_option("--tol", tol, "numeric tolerance (refract)");

    std::string check_file;
    bool check_json = false;
    auto* check = app.add_subcommand("check", "validate a JSON derivation file");
    check->add_option("file", check_file, "derivation file")->required();
    check->add_flag("--json", check_json, "emit the report as JSON");

    std::string eval_text;
    std::vector<std::string> eval_binds;
    int eval_order = series<rational>::default_order;
    auto* eval = app.add_subcommand("eval", "evaluate an expression to a series");
    eval->add_option("expr", eval_text, "expression in the library grammar")->required();
    eval->add_option("--bind", eval_binds, "variable binding name=expr (repeatable)");
    eval->add_option("--order", eval_order, "series truncation order");

    std::vector<const char*> argv;
    argv.push_back("adequal");
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 1;
    }

    try {
        if (solve->parsed())
            return detail::cmd_solve(solve_file, order, order_opt->count() > 0, style, as_json,
                                     tol, tol_opt->count() > 0, out);
        if (check->parsed()) return detail::cmd_check(check_file, check_json, out);
        if (eval->parsed()) {
            if (eval_order < 1) raise(errc::invalid_precision, "--order must be >= 1");
            return detail::cmd_eval(eval_text, eval_binds, eval_order, out);
        }
    } catch (const error& e) {
        err << e.what() << "\n";
        if (eval->parsed()) return 1;
        return detail::is_input_error(e.code()) ? 1 : 2;
    }
    return 1;
}

} // namespace adq
