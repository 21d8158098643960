#include "bifree/coefficient.hpp"

#include <cctype>
#include <cstdio>

#include "bifree/errors.hpp"

namespace bifree {

namespace {

bool all_digits(std::string_view s)
{
    if (s.empty())
        return false;
    for (char c : s)
        if (!std::isdigit(static_cast<unsigned char>(c)))
            return false;
    return true;
}

mpz_class pow10(long k)
{
    mpz_class r;
    mpz_ui_pow_ui(r.get_mpz_t(), 10, static_cast<unsigned long>(k));
    return r;
}

Rational parse_decimal(std::string_view text)
{
    std::string_view s = text;
    bool negative = false;
    if (!s.empty() && (s.front() == '+' || s.front() == '-')) {
        negative = s.front() == '-';
        s.remove_prefix(1);
    }

    long exponent = 0;
    if (const auto e = s.find_first_of("eE"); e != std::string_view::npos) {
        std::string_view exp_part = s.substr(e + 1);
        s = s.substr(0, e);
        bool exp_negative = false;
        if (!exp_part.empty() && (exp_part.front() == '+' || exp_part.front() == '-')) {
            exp_negative = exp_part.front() == '-';
            exp_part.remove_prefix(1);
        }
        if (!all_digits(exp_part) || exp_part.size() > 6)
            throw ParseError("malformed exponent in '" + std::string(text) + "'");
        exponent = std::stol(std::string(exp_part));
        if (exp_negative)
            exponent = -exponent;
    }

    std::string digits;
    long frac_len = 0;
    if (const auto dot = s.find('.'); dot != std::string_view::npos) {
        const std::string_view int_part = s.substr(0, dot);
        const std::string_view frac_part = s.substr(dot + 1);
        if ((!int_part.empty() && !all_digits(int_part)) || (!frac_part.empty() && !all_digits(frac_part))
            || (int_part.empty() && frac_part.empty()))
            throw ParseError("malformed number '" + std::string(text) + "'");
        digits = std::string(int_part) + std::string(frac_part);
        frac_len = static_cast<long>(frac_part.size());
    } else {
        if (!all_digits(s))
            throw ParseError("malformed number '" + std::string(text) + "'");
        digits = std::string(s);
    }

    mpz_class mantissa(digits, 10);
    if (negative)
        mantissa = -mantissa;
    const long scale = exponent - frac_len;
    Rational q;
    if (scale >= 0)
        q = Rational(mantissa * pow10(scale));
    else
        q = Rational(mantissa, pow10(-scale));
    q.canonicalize();
    return q;
}

} // namespace

Rational parse_rational(std::string_view text)
{
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front())))
        text.remove_prefix(1);
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back())))
        text.remove_suffix(1);
    if (text.empty())
        throw ParseError("empty number");

    if (const auto slash = text.find('/'); slash != std::string_view::npos) {
        std::string_view num = text.substr(0, slash);
        const std::string_view den = text.substr(slash + 1);
        bool negative = false;
        if (!num.empty() && (num.front() == '+' || num.front() == '-')) {
            negative = num.front() == '-';
            num.remove_prefix(1);
        }
        if (!all_digits(num) || !all_digits(den))
            throw ParseError("malformed rational '" + std::string(text) + "'");
        mpz_class n(std::string(num), 10);
        mpz_class d(std::string(den), 10);
        if (d == 0)
            throw ParseError("zero denominator in '" + std::string(text) + "'");
        if (negative)
            n = -n;
        Rational q(n, d);
        q.canonicalize();
        return q;
    }
    return parse_decimal(text);
}

std::string format_rational(const Rational& q)
{
    if (q.get_den() == 1)
        return q.get_num().get_str();
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

std::string format_plain(const Rational& x) { return format_rational(x); }

std::string format_plain(const Complex& x)
{
    char buf[96];
    const double re = x.real() == 0.0 ? 0.0 : x.real();
    const double im = x.imag() == 0.0 ? 0.0 : x.imag();
    if (im == 0.0)
        std::snprintf(buf, sizeof buf, "%.12g", re);
    else
        std::snprintf(buf, sizeof buf, "%.12g%+.12gi", re, im);
    return buf;
}

} // namespace bifree
