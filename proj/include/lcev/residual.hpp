// Exact residuals of the CEV ODE over Q.
//
// For C = exp(w S^-k) S^p B(S) the operator
//
//     (alpha^2/2) S^(2beta+2) C'' + (r-q) S C' - (r-q+lambda) C
//
// equals exp(w S^-k) S^p R(S) with R a Laurent polynomial; R is returned
// exactly. No rounding happens anywhere on this path.

#pragma once

#include "lcev/cev_params.hpp"
#include "lcev/closed_form.hpp"
#include "lcev/laurent.hpp"

#include <string>

namespace lcev::verify {

struct ResidualCertificate {
    LaurentPoly residual;
    bool is_zero = true;
    std::string context;
};

inline ResidualCertificate make_certificate(LaurentPoly residual, std::string context = {}) {
    ResidualCertificate cert;
    cert.is_zero = residual.is_zero();
    cert.residual = std::move(residual);
    cert.context = std::move(context);
    return cert;
}

/// Body of the ODE residual relative to the factor exp(w S^-k) S^p of `c`.
inline LaurentPoly ode_residual_body(const ClosedFormFunction& c, const cev::CevParams& p, const Rational& lambda) {
    const LaurentPoly& b0 = c.body();
    const LaurentPoly b1 = c.derivative_body(b0);
    const LaurentPoly b2 = c.derivative_body(b1);
    const Rational m = p.drift();
    LaurentPoly r = b2.shifted(p.two_beta() + 2) * (p.alpha_sq() / 2);
    r += b1.shifted(1) * m;
    r -= b0 * (m + lambda);
    return r;
}

inline ResidualCertificate exact_ode_residual(const ClosedFormFunction& c, const cev::CevParams& p,
                                              const Rational& lambda) {
    return make_certificate(ode_residual_body(c, p, lambda), "C = " + c.str() + ", lambda = " + to_string(lambda));
}

} // namespace lcev::verify
