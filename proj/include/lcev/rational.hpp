// Exact rational scalars.
//
// The coefficient field for all symbolic work is Q. Values are GMP rationals
// (always canonical: gcd(num, den) = 1, den > 0). The text form used in
// every JSON document and on the command line is "p/q", with "/q" omitted
// when q = 1.

#pragma once

#include "lcev/errors.hpp"

#include <boost/multiprecision/gmp.hpp>

#include <cctype>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace lcev {

using Integer = boost::multiprecision::mpz_int;
using Rational = boost::multiprecision::mpq_rational;

inline Integer numerator_of(const Rational& x) { return boost::multiprecision::numerator(x); }
inline Integer denominator_of(const Rational& x) { return boost::multiprecision::denominator(x); }

inline bool is_integer(const Rational& x) { return denominator_of(x) == 1; }

inline bool is_nonnegative_integer(const Rational& x) { return is_integer(x) && x >= 0; }

/// Converts an integral rational to a machine int; throws DomainError when
/// the value is fractional or does not fit.
inline int to_int(const Rational& x) {
    if (!is_integer(x)) throw DomainError("rational " + x.str() + " is not an integer");
    const Integer n = numerator_of(x);
    if (n > INT32_MAX || n < INT32_MIN) throw DomainError("integer " + n.str() + " out of range");
    return n.convert_to<int>();
}

inline std::string to_string(const Rational& x) {
    const Integer d = denominator_of(x);
    if (d == 1) return numerator_of(x).str();
    return numerator_of(x).str() + "/" + d.str();
}

inline Rational rational_pow(const Rational& base, int exponent) {
    if (exponent < 0) {
        if (base == 0) throw ZeroDenominator("0 raised to a negative power");
        return Rational(1) / rational_pow(base, -exponent);
    }
    Rational result(1);
    Rational b = base;
    unsigned e = static_cast<unsigned>(exponent);
    while (e) {
        if (e & 1u) result *= b;
        b *= b;
        e >>= 1u;
    }
    return result;
}

/// n/d for machine integers. The two-argument Rational constructor does not
/// accept a negative denominator.
inline Rational ratio(long n, long d) {
    if (d == 0) throw ZeroDenominator("ratio " + std::to_string(n) + "/0");
    return Rational(n) / Rational(d);
}

/// Exact square root when x is the square of a rational.
inline std::optional<Rational> rational_sqrt(const Rational& x) {
    if (x < 0) return std::nullopt;
    Integer rn, rd;
    const Integer n = numerator_of(x);
    const Integer d = denominator_of(x);
    Integer sn = boost::multiprecision::sqrt(n, rn);
    Integer sd = boost::multiprecision::sqrt(d, rd);
    if (rn != 0 || rd != 0) return std::nullopt;
    return Rational(sn, sd);
}

namespace detail {

inline bool all_digits(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s)
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    return true;
}

} // namespace detail

/// Parses "p/q", an integer, or a finite decimal ("0.05", "-1.25e-3") into an
/// exact rational. Anything else is rejected rather than rounded.
inline Rational parse_rational(std::string_view text) {
    std::string_view s = text;
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    const auto fail = [&]() -> ParseError {
        return ParseError("not an exact rational literal: '" + std::string(text) + "'");
    };
    if (s.empty()) throw fail();

    bool negative = false;
    if (s.front() == '+' || s.front() == '-') {
        negative = s.front() == '-';
        s.remove_prefix(1);
    }

    if (const auto slash = s.find('/'); slash != std::string_view::npos) {
        const auto num = s.substr(0, slash);
        const auto den = s.substr(slash + 1);
        if (!detail::all_digits(num) || !detail::all_digits(den)) throw fail();
        const Integer d{std::string(den)};
        if (d == 0) throw ZeroDenominator("in literal '" + std::string(text) + "'");
        Rational r{Integer{std::string(num)}, d};
        return negative ? Rational(-r) : r;
    }

    std::string_view mantissa = s;
    long exponent = 0;
    if (const auto e = s.find_first_of("eE"); e != std::string_view::npos) {
        mantissa = s.substr(0, e);
        std::string_view ex = s.substr(e + 1);
        bool eneg = false;
        if (!ex.empty() && (ex.front() == '+' || ex.front() == '-')) {
            eneg = ex.front() == '-';
            ex.remove_prefix(1);
        }
        if (!detail::all_digits(ex) || ex.size() > 6) throw fail();
        exponent = std::stol(std::string(ex));
        if (eneg) exponent = -exponent;
    }
    std::string digits;
    long frac_digits = 0;
    if (const auto dot = mantissa.find('.'); dot != std::string_view::npos) {
        const auto ip = mantissa.substr(0, dot);
        const auto fp = mantissa.substr(dot + 1);
        if ((ip.empty() && fp.empty()) || (!ip.empty() && !detail::all_digits(ip)) ||
            (!fp.empty() && !detail::all_digits(fp)))
            throw fail();
        digits = std::string(ip) + std::string(fp);
        frac_digits = static_cast<long>(fp.size());
    } else {
        if (!detail::all_digits(mantissa)) throw fail();
        digits = std::string(mantissa);
    }
    Rational r{Integer(digits)};
    const long scale = exponent - frac_digits;
    Integer ten_pow = boost::multiprecision::pow(Integer(10), static_cast<unsigned>(scale < 0 ? -scale : scale));
    if (scale < 0)
        r /= Rational(ten_pow);
    else
        r *= Rational(ten_pow);
    return negative ? Rational(-r) : r;
}

} // namespace lcev
