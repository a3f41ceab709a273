#pragma once

/**
 * @file coefficient.hpp
 * @brief Coefficient fields a series can be built over.
 *
 * The series type is generic over its coefficient field. Two scalar modes
 * are provided here: exact rationals (see rational.hpp) and tolerance-aware
 * doubles for transcendental base points. A third coefficient field, the
 * univariate rational functions used by the subtangent solver, lives in
 * rational_function.hpp. A series never mixes coefficient types; the mix is
 * ruled out by the type system rather than by a runtime check.
 */

#include <cmath>
#include <concepts>
#include <sstream>
#include <string>
#include <variant>

#include "adequal/errors.hpp"
#include "adequal/rational.hpp"

namespace adq {

/**
 * Double-precision scalar with a carried equality tolerance.
 *
 * Two approx_real values are equal when |x - y| <= eps; a value is zero when
 * |x| <= eps. The tolerance travels with the value (max-combined under
 * arithmetic), not in global state.
 */
class approx_real {
public:
    static constexpr double default_eps = 1e-12;

    approx_real() : value_(0.0) {}
    approx_real(int n) : value_(n) {}
    approx_real(double v, double eps = default_eps) : value_(v), eps_(eps) {
        if (eps_ <= 0) raise(errc::invalid_precision, "approx tolerance must be positive");
    }

    double value() const { return value_; }
    double eps() const { return eps_; }

    bool is_zero() const { return std::fabs(value_) <= eps_; }
    bool is_one() const { return std::fabs(value_ - 1.0) <= eps_; }
    int sign() const { return value_ > eps_ ? 1 : (value_ < -eps_ ? -1 : 0); }

    approx_real operator-() const { return approx_real(-value_, eps_); }
    friend approx_real operator+(const approx_real& a, const approx_real& b) {
        return approx_real(a.value_ + b.value_, std::max(a.eps_, b.eps_));
    }
    friend approx_real operator-(const approx_real& a, const approx_real& b) {
        return approx_real(a.value_ - b.value_, std::max(a.eps_, b.eps_));
    }
    friend approx_real operator*(const approx_real& a, const approx_real& b) {
        return approx_real(a.value_ * b.value_, std::max(a.eps_, b.eps_));
    }
    friend approx_real operator/(const approx_real& a, const approx_real& b) {
        if (b.is_zero()) raise(errc::division_by_zero, "approx division by zero");
        return approx_real(a.value_ / b.value_, std::max(a.eps_, b.eps_));
    }

    friend bool operator==(const approx_real& a, const approx_real& b) {
        return std::fabs(a.value_ - b.value_) <= std::max(a.eps_, b.eps_);
    }
    friend bool operator!=(const approx_real& a, const approx_real& b) { return !(a == b); }

    std::string to_string() const {
        std::ostringstream os;
        os.precision(17);
        os << value_;
        return os.str();
    }

private:
    double value_;
    double eps_ = default_eps;
};

/// Ring-with-division requirements for series coefficients.
template <typename C>
concept coefficient_field = std::regular<C> && std::constructible_from<C, int> &&
    requires(const C a, const C b) {
        { a + b } -> std::convertible_to<C>;
        { a - b } -> std::convertible_to<C>;
        { a * b } -> std::convertible_to<C>;
        { a / b } -> std::convertible_to<C>;
        { -a } -> std::convertible_to<C>;
        { a.is_zero() } -> std::convertible_to<bool>;
        { a.to_string() } -> std::convertible_to<std::string>;
    };

/// Coefficient fields with a decidable sign, needed for the total order.
template <typename C>
concept ordered_coefficient_field = coefficient_field<C> && requires(const C a) {
    { a.sign() } -> std::convertible_to<int>;
};

/// The analytic functions the expression language and the series support.
enum class analytic_fn { sin, cos, sqrt };

/// Dynamic coefficient for API boundaries where the mode is chosen at runtime.
using coefficient = std::variant<rational, approx_real>;

inline std::string coefficient_to_string(const coefficient& c) {
    return std::visit([](const auto& v) { return v.to_string(); }, c);
}

} // namespace adq
