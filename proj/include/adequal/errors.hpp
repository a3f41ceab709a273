#pragma once

/**
 * @file errors.hpp
 * @brief Error taxonomy shared by the whole library.
 *
 * Every failure the library can signal carries one of the codes below, so
 * callers (and the command-line front end) can map failures to behaviour
 * without parsing message text.
 */

#include <cstddef>
#include <stdexcept>
#include <string>

namespace adq {

enum class errc {
    invalid_precision,
    division_by_zero,
    precision_exhausted,
    infinite_value,
    exact_mode_unsupported,
    negative_sqrt_argument,
    syntax_error,
    unknown_function,
    unbound_variable,
    not_polynomial,
    degenerate_constant,
    point_not_on_curve,
    vertical_tangent,
    zero_ordinate,
    stationary_point,
    invalid_geometry,
    tolerance_not_reached,
    malformed_step,
    invalid_input,
};

inline const char* errc_name(errc c) {
    switch (c) {
    case errc::invalid_precision: return "InvalidPrecision";
    case errc::division_by_zero: return "DivisionByZero";
    case errc::precision_exhausted: return "PrecisionExhausted";
    case errc::infinite_value: return "InfiniteValue";
    case errc::exact_mode_unsupported: return "ExactModeUnsupported";
    case errc::negative_sqrt_argument: return "NegativeSqrtArgument";
    case errc::syntax_error: return "SyntaxError";
    case errc::unknown_function: return "UnknownFunction";
    case errc::unbound_variable: return "UnboundVariable";
    case errc::not_polynomial: return "NotPolynomial";
    case errc::degenerate_constant: return "DegenerateConstant";
    case errc::point_not_on_curve: return "PointNotOnCurve";
    case errc::vertical_tangent: return "VerticalTangent";
    case errc::zero_ordinate: return "ZeroOrdinate";
    case errc::stationary_point: return "StationaryPoint";
    case errc::invalid_geometry: return "InvalidGeometry";
    case errc::tolerance_not_reached: return "ToleranceNotReached";
    case errc::malformed_step: return "MalformedStep";
    case errc::invalid_input: return "InvalidInput";
    }
    return "UnknownError";
}

/**
 * Exception type carrying an error code and, for parse errors, the byte
 * offset of the offending input.
 */
class error : public std::runtime_error {
public:
    error(errc code, const std::string& message)
        : std::runtime_error(std::string(errc_name(code)) + ": " + message), code_(code) {}

    error(errc code, const std::string& message, std::size_t offset)
        : std::runtime_error(std::string(errc_name(code)) + ": " + message + " (offset " +
                             std::to_string(offset) + ")"),
          code_(code), offset_(offset), has_offset_(true) {}

    errc code() const noexcept { return code_; }
    bool has_offset() const noexcept { return has_offset_; }
    std::size_t offset() const noexcept { return offset_; }

private:
    errc code_;
    std::size_t offset_ = 0;
    bool has_offset_ = false;
};

[[noreturn]] inline void raise(errc code, const std::string& message) {
    throw error(code, message);
}

[[noreturn]] inline void raise_at(errc code, const std::string& message, std::size_t offset) {
    throw error(code, message, offset);
}

} // namespace adq
