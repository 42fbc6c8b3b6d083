// Market parameters of the CEV diffusion dS = (r - q) S dt + alpha S^(beta+1) dW.

#pragma once

#include "lcev/errors.hpp"
#include "lcev/rational.hpp"

#include <string>
#include <utility>

namespace lcev::cev {

class CevParams {
public:
    /// `two_beta` is the exact integer 2*beta, so beta is a half-integer by construction.
    CevParams(Rational r, Rational q, Rational alpha, int two_beta)
        : r_(std::move(r)), q_(std::move(q)), alpha_(std::move(alpha)), two_beta_(two_beta) {
        if (alpha_ <= 0) throw InvalidParams("alpha must be positive, got " + to_string(alpha_));
    }

    const Rational& r() const { return r_; }
    const Rational& q() const { return q_; }
    const Rational& alpha() const { return alpha_; }
    int two_beta() const { return two_beta_; }

    /// m = r - q.
    Rational drift() const { return r_ - q_; }
    Rational alpha_sq() const { return alpha_ * alpha_; }

    friend bool operator==(const CevParams&, const CevParams&) = default;

    std::string str() const {
        return "2beta=" + std::to_string(two_beta_) + " r=" + to_string(r_) + " q=" + to_string(q_) +
               " alpha=" + to_string(alpha_);
    }

private:
    Rational r_;
    Rational q_;
    Rational alpha_;
    int two_beta_;
};

} // namespace lcev::cev
