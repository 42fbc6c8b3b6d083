// Reduced rational functions num/den over Q.
//
// Canonical form: gcd(num, den) = 1 and den is monic, so structural equality
// is functional equality.

#pragma once

#include "lcev/errors.hpp"
#include "lcev/laurent.hpp"
#include "lcev/poly.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace lcev {

class RatFunc {
public:
    RatFunc() : den_(Poly::constant(Rational(1))) {}
    RatFunc(Poly num) : num_(std::move(num)), den_(Poly::constant(Rational(1))) {} // NOLINT(google-explicit-constructor)
    RatFunc(const Rational& c) : RatFunc(Poly::constant(c)) {}                     // NOLINT

    static RatFunc reduce(Poly num, Poly den) {
        if (den.is_zero()) throw ZeroDenominator("rational function with zero denominator");
        if (num.is_zero()) return RatFunc{};
        Poly g = gcd(num, den);
        if (g.degree() > 0) {
            num = Poly::divmod(num, g).first;
            den = Poly::divmod(den, g).first;
        }
        const Rational lead = den.leading();
        RatFunc out;
        out.num_ = num * (Rational(1) / lead);
        out.den_ = den * (Rational(1) / lead);
        return out;
    }

    /// Builds the rational function equal to a Laurent polynomial.
    static RatFunc from_laurent(const LaurentPoly& p) {
        if (p.is_zero()) return {};
        const int shift = p.min_exponent() < 0 ? -p.min_exponent() : 0;
        return reduce(p.shifted(shift).to_poly(), Poly::monomial(Rational(1), shift));
    }

    /// c * S^e for any integer e.
    static RatFunc monomial(const Rational& c, int e) { return from_laurent(LaurentPoly::monomial(c, e)); }

    const Poly& num() const { return num_; }
    const Poly& den() const { return den_; }
    bool is_zero() const { return num_.is_zero(); }

    RatFunc derivative() const {
        // (n/d)' = (n'd - nd')/d^2
        return reduce(num_.derivative() * den_ - num_ * den_.derivative(), den_ * den_);
    }

    RatFunc operator-() const {
        RatFunc r = *this;
        r.num_ = -r.num_;
        return r;
    }

    friend RatFunc operator+(const RatFunc& a, const RatFunc& b) {
        return reduce(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
    }
    friend RatFunc operator-(const RatFunc& a, const RatFunc& b) { return a + (-b); }
    friend RatFunc operator*(const RatFunc& a, const RatFunc& b) {
        return reduce(a.num_ * b.num_, a.den_ * b.den_);
    }
    friend RatFunc operator/(const RatFunc& a, const RatFunc& b) {
        if (b.is_zero()) throw ZeroDenominator("division by the zero rational function");
        return reduce(a.num_ * b.den_, a.den_ * b.num_);
    }

    friend bool operator==(const RatFunc& a, const RatFunc& b) { return a.num_ == b.num_ && a.den_ == b.den_; }

    /// True when the denominator is S^m for some m >= 0.
    bool has_monomial_denominator() const { return den_.is_monomial(); }

    /// The Laurent polynomial equal to this function, when den = S^m.
    std::optional<LaurentPoly> as_laurent() const {
        if (!has_monomial_denominator()) return std::nullopt;
        return LaurentPoly::from_poly(num_, -den_.degree());
    }

    /// Laurent coefficients of S^low ... S^high in the expansion at S = 0.
    std::vector<Rational> series_at_zero(int low, int high) const {
        if (low > high) throw DomainError("series_at_zero: low > high");
        std::vector<Rational> out(static_cast<std::size_t>(high - low + 1));
        if (is_zero()) return out;
        const int u = num_.valuation();
        const int v = den_.valuation();
        const Poly n = num_.unshifted(u);
        const Poly d = den_.unshifted(v);
        const int offset = u - v; // f = S^offset * n/d, with n(0), d(0) nonzero
        const int needed = high - offset;
        if (needed < 0) return out;
        // Power series of n/d by the recurrence c_k = (n_k - sum d_j c_{k-j}) / d_0.
        std::vector<Rational> c(static_cast<std::size_t>(needed) + 1);
        const Rational d0 = d[0];
        for (int k = 0; k <= needed; ++k) {
            Rational acc = n[k];
            for (int j = 1; j <= std::min(k, d.degree()); ++j) acc -= d[j] * c[static_cast<std::size_t>(k - j)];
            c[static_cast<std::size_t>(k)] = acc / d0;
        }
        for (int e = low; e <= high; ++e) {
            const int k = e - offset;
            if (k >= 0) out[static_cast<std::size_t>(e - low)] = c[static_cast<std::size_t>(k)];
        }
        return out;
    }

    std::string str() const {
        if (den_.degree() == 0) return num_.str();
        return "(" + num_.str() + ")/(" + den_.str() + ")";
    }

private:
    Poly num_;
    Poly den_;
};

inline RatFunc reduce(Poly num, Poly den) { return RatFunc::reduce(std::move(num), std::move(den)); }
inline RatFunc rf_derivative(const RatFunc& f) { return f.derivative(); }
inline std::vector<Rational> series_at_zero(const RatFunc& f, int low, int high) { return f.series_at_zero(low, high); }

} // namespace lcev
