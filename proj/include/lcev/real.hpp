// High-precision reals for the numerical side of verification.
//
// MPFR with a runtime-selected number of decimal digits. The default
// precision is process-wide in this Boost version, so numeric entry points
// take a digit count and pin it for their duration with PrecisionScope.

#pragma once

#include "lcev/rational.hpp"

#include <boost/multiprecision/mpfr.hpp>

#include <ios>
#include <string>

namespace lcev {

using Real = boost::multiprecision::mpfr_float;

/// Guard digits added on top of a caller's requested precision for internal
/// arithmetic; residual evaluation cancels several leading digits.
inline constexpr unsigned kGuardDigits = 20;

class PrecisionScope {
public:
    explicit PrecisionScope(unsigned digits10) : saved_(Real::default_precision()) {
        Real::default_precision(digits10);
    }
    ~PrecisionScope() { Real::default_precision(saved_); }
    PrecisionScope(const PrecisionScope&) = delete;
    PrecisionScope& operator=(const PrecisionScope&) = delete;

private:
    unsigned saved_;
};

inline Real to_real(const Rational& x) {
    Real n(numerator_of(x));
    Real d(denominator_of(x));
    return n / d;
}

inline Real ipow(const Real& base, int exponent) {
    if (exponent == 0) return Real(1);
    if (exponent < 0) return Real(1) / ipow(base, -exponent);
    Real result(1);
    Real b = base;
    unsigned e = static_cast<unsigned>(exponent);
    while (e) {
        if (e & 1u) result *= b;
        b *= b;
        e >>= 1u;
    }
    return result;
}

/// Decimal rendering with `digits` significant digits. MPFR rounds to
/// nearest with ties to even; the decimal point is locale independent.
inline std::string format_real(const Real& x, unsigned digits) {
    if (x == 0) return "0";
    return x.str(static_cast<std::streamsize>(digits), std::ios_base::fmtflags(0));
}

inline std::string format_sci(const Real& x, unsigned digits = 6) {
    return x.str(static_cast<std::streamsize>(digits), std::ios_base::scientific);
}

} // namespace lcev
