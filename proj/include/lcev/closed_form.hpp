// Closed-form spatial functions
//
//     C(S) = exp(w * S^(-k)) * S^p * B(S)
//
// with w, p rational, k a nonzero integer and B a Laurent polynomial. The
// family is closed under d/dS with (w, k, p) unchanged:
//
//     C'(S) = exp(w S^-k) S^p (B' + p B / S - w k S^(-k-1) B).
//
// Canonical form: a p that is an integer is folded into B (p = 0 afterwards),
// and k = 1 whenever w = 0. The non-integral power only arises for the
// beta = 0 power solutions.

#pragma once

#include "lcev/laurent.hpp"
#include "lcev/rational.hpp"
#include "lcev/real.hpp"

#include <boost/multiprecision/mpfr.hpp>

#include <string>
#include <utility>

namespace lcev {

struct Jet {
    Real value;
    Real d1;
    Real d2;
};

class ClosedFormFunction {
public:
    ClosedFormFunction() : ClosedFormFunction(Rational(0), 1, LaurentPoly{}) {}

    ClosedFormFunction(Rational exp_coeff, int exp_exponent, LaurentPoly body, Rational power = Rational(0))
        : w_(std::move(exp_coeff)), k_(exp_exponent), p_(std::move(power)), body_(std::move(body)) {
        if (w_ == 0)
            k_ = 1;
        else if (k_ == 0)
            throw DomainError("exponential prefactor needs a nonzero exponent");
        if (is_integer(p_)) {
            body_ = body_.shifted(to_int(p_));
            p_ = 0;
        }
    }

    static ClosedFormFunction from_laurent(LaurentPoly body) { return {Rational(0), 1, std::move(body)}; }

    const Rational& exp_coeff() const { return w_; }
    int exp_exponent() const { return k_; }
    const Rational& power() const { return p_; }
    const LaurentPoly& body() const { return body_; }
    bool is_zero() const { return body_.is_zero(); }

    /// Same exponential prefactor and power (so bodies can be added).
    bool same_factor(const ClosedFormFunction& o) const { return w_ == o.w_ && k_ == o.k_ && p_ == o.p_; }

    /// Body of C' relative to the common factor exp(w S^-k) S^p.
    LaurentPoly derivative_body(const LaurentPoly& b) const {
        LaurentPoly out = b.derivative();
        if (p_ != 0) out += b.shifted(-1) * p_;
        if (w_ != 0) out -= b.shifted(-k_ - 1) * (w_ * k_);
        return out;
    }

    ClosedFormFunction derivative() const { return with_body(derivative_body(body_)); }

    ClosedFormFunction with_body(LaurentPoly b) const {
        ClosedFormFunction out = *this;
        out.body_ = std::move(b);
        return out;
    }

    ClosedFormFunction scaled(const Rational& s) const { return with_body(body_ * s); }

    /// exp(w S^-k) S^p, evaluated at s > 0.
    Real factor(const Real& s) const {
        Real f(1);
        if (w_ != 0) f = boost::multiprecision::exp(to_real(w_) * ipow(s, -k_));
        if (p_ != 0) f *= boost::multiprecision::pow(s, to_real(p_));
        return f;
    }

    Real eval(const Real& s) const {
        if (s <= 0 && (w_ != 0 || p_ != 0 || (!body_.is_zero() && body_.min_exponent() < 0)))
            throw DomainError("closed form evaluated at S <= 0");
        return factor(s) * body_.eval(s);
    }

    /// Value and the first two derivatives, all from closed forms.
    Jet jet(const Real& s) const {
        if (s <= 0) throw DomainError("closed form evaluated at S <= 0");
        const LaurentPoly b1 = derivative_body(body_);
        const LaurentPoly b2 = derivative_body(b1);
        const Real f = factor(s);
        return {f * body_.eval(s), f * b1.eval(s), f * b2.eval(s)};
    }

    friend bool operator==(const ClosedFormFunction& a, const ClosedFormFunction& b) {
        return a.same_factor(b) && a.body_ == b.body_;
    }

    std::string str() const {
        std::string out;
        if (w_ != 0) out += "exp(" + to_string(w_) + "*S^(" + std::to_string(-k_) + ")) * ";
        if (p_ != 0) out += "S^(" + to_string(p_) + ") * ";
        return out + "(" + body_.str() + ")";
    }

private:
    Rational w_;
    int k_;
    Rational p_;
    LaurentPoly body_;
};

} // namespace lcev
