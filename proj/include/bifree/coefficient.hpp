#pragma once

#include <cmath>
#include <complex>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace bifree {

using Rational = mpq_class;
using Complex = std::complex<double>;

enum class Mode { rational, complex };

// Comparison tolerance for complex mode. Rational mode always compares exactly.
struct Tolerance {
    double rel = 1e-9;
    double abs = 1e-12;
};

// Coefficient-ring traits. Every series, table and oracle is templated on one of the
// two specializations below.
template <class T>
struct Field;

template <>
struct Field<Rational> {
    static constexpr Mode mode = Mode::rational;
    static constexpr const char* name = "rational";

    static bool is_zero(const Rational& x) { return sgn(x) == 0; }
    // Used for cancellation detection: exact in this mode.
    static bool negligible(const Rational& x, double /*scale*/) { return sgn(x) == 0; }
    static bool near(const Rational& a, const Rational& b, const Tolerance&) { return a == b; }
    static double magnitude(const Rational& x) { return std::fabs(x.get_d()); }
    static Rational from_rational(const Rational& q) { return q; }
};

template <>
struct Field<Complex> {
    static constexpr Mode mode = Mode::complex;
    static constexpr const char* name = "complex";

    static bool is_zero(const Complex& x) { return std::abs(x) <= 1e-12; }
    static bool negligible(const Complex& x, double scale)
    {
        return std::abs(x) <= 1e-10 * std::fmax(1.0, scale);
    }
    static bool near(const Complex& a, const Complex& b, const Tolerance& tol)
    {
        const double d = std::abs(a - b);
        return d <= std::fmax(tol.abs, tol.rel * std::fmax(std::abs(a), std::abs(b)));
    }
    static double magnitude(const Complex& x) { return std::abs(x); }
    static Complex from_rational(const Rational& q) { return {q.get_d(), 0.0}; }
};

// Exact parse of "p/q", "p", or decimal strings such as "-0.125" or "2.5e-3".
// Throws ParseError.
Rational parse_rational(std::string_view text);

// "p/q", or "p" for integers.
std::string format_rational(const Rational& q);

// Compact text for plain reports: rationals as p/q, complex as a+bi with 12 significant digits.
std::string format_plain(const Rational& x);
std::string format_plain(const Complex& x);

} // namespace bifree
