// Confluent hypergeometric (Kummer) functions F(e, c; u), the truncated
// polynomial case and a partial-sum evaluator with a rigorous tail bound.

#pragma once

#include "lcev/errors.hpp"
#include "lcev/rational.hpp"
#include "lcev/real.hpp"

#include <boost/multiprecision/mpfr.hpp>

#include <limits>
#include <string>
#include <vector>

namespace lcev::cev {

/// F(-m, c; u) = sum_{j=0}^{m} (-m)_j / ((c)_j j!) u^j.
class KummerPoly {
public:
    KummerPoly(int m, Rational c) : m_(m), c_(std::move(c)) {
        if (m_ < 0) throw DomainError("truncation order must be nonnegative");
        for (int j = 0; j < m_; ++j)
            if (c_ + j == 0)
                throw PochhammerZero("(" + to_string(c_) + ")_" + std::to_string(j + 1) + " vanishes for m = " +
                                     std::to_string(m_));
        coeffs_.reserve(static_cast<std::size_t>(m_) + 1);
        Rational t(1);
        coeffs_.push_back(t);
        for (int j = 0; j < m_; ++j) {
            t *= Rational(j - m_) / ((c_ + j) * (j + 1));
            coeffs_.push_back(t);
        }
    }

    int order() const { return m_; }
    const Rational& lower() const { return c_; }
    const std::vector<Rational>& coeffs() const { return coeffs_; }

    Rational eval(const Rational& u) const {
        Rational acc(0);
        for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * u + *it;
        return acc;
    }

    Real eval(const Real& u) const {
        Real acc(0);
        for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * u + to_real(*it);
        return acc;
    }

private:
    int m_;
    Rational c_;
    std::vector<Rational> coeffs_;
};

inline KummerPoly kummer_truncated(int m, const Rational& c) { return KummerPoly(m, c); }

struct KummerSum {
    Real value;
    /// Upper bound on |F - partial sum|; +inf when the tail cannot be bounded.
    Real truncation_bound;
    int terms_used = 0;
};

/// Partial sum of sum_k (e)_k / (c)_k u^k / k! over k < terms.
inline KummerSum kummer_series(const Rational& e, const Rational& c, const Real& u, int terms) {
    if (terms < 1) throw DomainError("kummer_series needs at least one term");
    const bool terminates = is_integer(e) && e <= 0;
    const int last_nonzero = terminates ? to_int(-e) : std::numeric_limits<int>::max();
    const int needed = std::min(terms - 1, last_nonzero); // highest k with a (possibly) nonzero term
    for (int j = 0; j < needed; ++j)
        if (c + j == 0) throw PochhammerZero("(" + to_string(c) + ")_" + std::to_string(j + 1) + " vanishes");

    KummerSum out;
    Real term(1);
    Real sum(1);
    int k = 0;
    for (k = 1; k <= needed; ++k) {
        term *= to_real(Rational(e + (k - 1)) / Rational(c + (k - 1))) * u / k;
        sum += term;
    }
    out.value = sum;
    out.terms_used = needed + 1;
    if (terminates && terms - 1 >= last_nonzero) {
        out.truncation_bound = 0;
        return out;
    }
    // Next term t_K and ratio bound rho >= |t_{j+1}/t_j| for j >= K:
    // |(e+j)/(c+j)| <= 1 + |e-c|/(K+c) when K + c > 0.
    const int K = terms;
    const Rational kc = c + K;
    if (kc <= 0 || c + (K - 1) == 0) {
        out.truncation_bound = std::numeric_limits<Real>::infinity();
        return out;
    }
    Real next = term * to_real(Rational(e + (K - 1)) / Rational(c + (K - 1))) * u / K;
    const Rational diff = e - c;
    const Real rho = (Real(1) + to_real((diff < 0 ? Rational(-diff) : diff) / kc)) * abs(u) / (K + 1);
    if (rho >= 1)
        out.truncation_bound = std::numeric_limits<Real>::infinity();
    else
        out.truncation_bound = abs(next) / (Real(1) - rho);
    return out;
}

} // namespace lcev::cev
