// Sparse Laurent polynomials in S over Q.
//
// This is the canonical form of a residual: a finite map from integer
// exponents to nonzero coefficients. Zero coefficients are never stored, so
// the zero polynomial is exactly the empty map.

#pragma once

#include "lcev/errors.hpp"
#include "lcev/poly.hpp"
#include "lcev/rational.hpp"
#include "lcev/real.hpp"

#include <map>
#include <string>
#include <utility>

namespace lcev {

class LaurentPoly {
public:
    using Terms = std::map<int, Rational>;

    LaurentPoly() = default;
    explicit LaurentPoly(const Terms& terms) {
        for (const auto& [e, c] : terms) add_term(e, c);
    }

    static LaurentPoly monomial(const Rational& coeff, int exponent) {
        LaurentPoly p;
        p.add_term(exponent, coeff);
        return p;
    }

    static LaurentPoly constant(const Rational& c) { return monomial(c, 0); }

    static LaurentPoly from_poly(const Poly& p, int shift = 0) {
        LaurentPoly out;
        for (int i = 0; i <= p.degree(); ++i) out.add_term(i + shift, p[i]);
        return out;
    }

    bool is_zero() const { return terms_.empty(); }
    std::size_t size() const { return terms_.size(); }
    const Terms& terms() const { return terms_; }

    Rational coeff(int exponent) const {
        auto it = terms_.find(exponent);
        return it == terms_.end() ? Rational(0) : it->second;
    }

    int max_exponent() const { return terms_.rbegin()->first; }
    int min_exponent() const { return terms_.begin()->first; }
    const Rational& leading() const { return terms_.rbegin()->second; }

    void add_term(int exponent, const Rational& c) {
        if (c == 0) return;
        auto [it, inserted] = terms_.try_emplace(exponent, c);
        if (!inserted) {
            it->second += c;
            if (it->second == 0) terms_.erase(it);
        }
    }

    /// Multiplies by S^k.
    LaurentPoly shifted(int k) const {
        LaurentPoly out;
        for (const auto& [e, c] : terms_) out.terms_.emplace(e + k, c);
        return out;
    }

    LaurentPoly derivative() const {
        LaurentPoly out;
        for (const auto& [e, c] : terms_)
            if (e != 0) out.terms_.emplace(e - 1, c * e);
        return out;
    }

    /// Scales so that the highest-exponent coefficient is 1.
    LaurentPoly monic() const {
        if (is_zero()) return {};
        return *this * (Rational(1) / leading());
    }

    /// The polynomial part when every exponent is nonnegative.
    Poly to_poly() const {
        if (is_zero()) return {};
        if (min_exponent() < 0) throw DomainError("Laurent polynomial has negative exponents");
        std::vector<Rational> c(static_cast<std::size_t>(max_exponent()) + 1);
        for (const auto& [e, v] : terms_) c[static_cast<std::size_t>(e)] = v;
        return Poly(std::move(c));
    }

    Real eval(const Real& s) const {
        if (s == 0 && !is_zero() && min_exponent() < 0)
            throw DomainError("evaluation at S = 0 with negative exponents present");
        Real acc(0);
        for (const auto& [e, c] : terms_) acc += to_real(c) * ipow(s, e);
        return acc;
    }

    LaurentPoly operator-() const {
        LaurentPoly out = *this;
        for (auto& [e, c] : out.terms_) c = -c;
        return out;
    }

    friend LaurentPoly operator+(LaurentPoly a, const LaurentPoly& b) {
        for (const auto& [e, c] : b.terms_) a.add_term(e, c);
        return a;
    }
    friend LaurentPoly operator-(LaurentPoly a, const LaurentPoly& b) {
        for (const auto& [e, c] : b.terms_) a.add_term(e, -c);
        return a;
    }
    friend LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b) {
        LaurentPoly out;
        for (const auto& [ea, ca] : a.terms_)
            for (const auto& [eb, cb] : b.terms_) out.add_term(ea + eb, ca * cb);
        return out;
    }
    friend LaurentPoly operator*(const LaurentPoly& a, const Rational& s) {
        if (s == 0) return {};
        LaurentPoly out = a;
        for (auto& [e, c] : out.terms_) c *= s;
        return out;
    }
    friend LaurentPoly operator*(const Rational& s, const LaurentPoly& a) { return a * s; }

    LaurentPoly& operator+=(const LaurentPoly& o) { return *this = *this + o; }
    LaurentPoly& operator-=(const LaurentPoly& o) { return *this = *this - o; }

    friend bool operator==(const LaurentPoly& a, const LaurentPoly& b) { return a.terms_ == b.terms_; }

    std::string str(char var = 'S') const {
        if (is_zero()) return "0";
        std::string out;
        for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
            const auto& [e, c] = *it;
            if (!out.empty()) out += c < 0 ? " - " : " + ";
            else if (c < 0) out += "-";
            const Rational a = c < 0 ? Rational(-c) : c;
            if (e == 0) {
                out += to_string(a);
                continue;
            }
            if (a != 1) out += to_string(a) + "*";
            out += var;
            if (e != 1) out += "^" + (e < 0 ? "(" + std::to_string(e) + ")" : std::to_string(e));
        }
        return out;
    }

private:
    Terms terms_;
};

/// Evaluates p at s using `precision` significant digits.
inline Real laurent_eval(const LaurentPoly& p, const Real& s, unsigned precision = 30) {
    if (precision < 15) throw DomainError("laurent_eval needs at least 15 digits");
    PrecisionScope scope(precision + kGuardDigits);
    return p.eval(Real(s));
}

} // namespace lcev
