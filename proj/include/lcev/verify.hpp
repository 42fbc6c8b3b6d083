// Verification of CEV solutions: exact PDE residuals, grid residuals from
// closed-form derivatives, a high-precision Runge-Kutta-Fehlberg 7(8) oracle
// and single-coefficient mutations.

#pragma once

#include "lcev/cev.hpp"
#include "lcev/residual.hpp"

#include <boost/multiprecision/mpfr.hpp>

#include <array>
#include <string>
#include <vector>

namespace lcev::verify {

/// An unverified (lambda, C) pair. Mutated solutions live here because a
/// SpacetimeSolution cannot hold a non-solution.
struct Candidate {
    cev::CevParams params;
    Rational lambda;
    ClosedFormFunction spatial;
    std::string label;

    static Candidate from(const cev::SpacetimeSolution& s) {
        return {s.params(), s.lambda(), s.spatial(), s.provenance().str()};
    }
};

/// Residual of V_t + (alpha^2/2) S^(2beta+2) V_SS + (r-q) S V_S - (r-q) V for
/// V = C(S) exp(-lambda t), with exp(-lambda t) exp(w S^-k) S^p divided out.
inline LaurentPoly pde_residual_body(const Candidate& c) {
    const ClosedFormFunction& f = c.spatial;
    const LaurentPoly& v = f.body();
    const LaurentPoly v_s = f.derivative_body(v);
    const LaurentPoly v_ss = f.derivative_body(v_s);
    const LaurentPoly v_t = v * Rational(-c.lambda);
    const Rational m = c.params.drift();
    LaurentPoly r = v_t;
    r += v_ss.shifted(c.params.two_beta() + 2) * (c.params.alpha_sq() / 2);
    r += v_s.shifted(1) * m;
    r -= v * m;
    return r;
}

inline ResidualCertificate exact_pde_residual(const Candidate& c) {
    return make_certificate(pde_residual_body(c), c.label + ": V = " + c.spatial.str() + " * exp(-(" +
                                                      to_string(c.lambda) + ") t)");
}

inline ResidualCertificate exact_pde_residual(const cev::SpacetimeSolution& v) {
    return exact_pde_residual(Candidate::from(v));
}

inline ResidualCertificate exact_pde_residual(const cev::SpacetimeSolution& v, const cev::CevParams& p) {
    if (!(v.params() == p)) throw ParamMismatch("solution built for " + v.params().str() + ", checked against " + p.str());
    return exact_pde_residual(v);
}

/// One certificate per group of a superposition. Different lambdas or
/// exponential/power factors are linearly independent, so the sum vanishes
/// iff every group residual does.
struct SuperpositionCertificate {
    std::vector<ResidualCertificate> groups;
    bool is_zero = true;
};

inline SuperpositionCertificate exact_pde_residual(const cev::Superposition& v) {
    SuperpositionCertificate out;
    for (const auto& g : v.groups()) {
        out.groups.push_back(exact_pde_residual(Candidate{v.params(), g.lambda, g.spatial, "group"}));
        out.is_zero = out.is_zero && out.groups.back().is_zero;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Numeric residuals

inline Real numeric_threshold(unsigned precision) {
    PrecisionScope scope(precision + kGuardDigits);
    return boost::multiprecision::pow(Real(10), -static_cast<int>(precision) + 5);
}

namespace detail {

inline void check_grid(const std::vector<Rational>& s_grid, unsigned precision) {
    if (precision < 30) throw DomainError("numeric residuals need at least 30 digits");
    for (const auto& s : s_grid)
        if (s <= 0) throw DomainError("grid node S = " + to_string(s) + " is not positive");
}

/// |PDE residual| / max(1, |V|) at one node, all derivatives analytic.
inline Real scaled_residual(const cev::CevParams& p, const Rational& lambda, const ClosedFormFunction& f, const Real& s,
                            const Real& t) {
    const Jet j = f.jet(s);
    const Real time = boost::multiprecision::exp(-to_real(lambda) * t);
    const Real m = to_real(p.drift());
    const Real v = j.value * time;
    const Real vs = j.d1 * time;
    const Real vss = j.d2 * time;
    const Real vt = -to_real(lambda) * v;
    const Real r = vt + to_real(p.alpha_sq() / 2) * ipow(s, p.two_beta() + 2) * vss + m * s * vs - m * v;
    return boost::multiprecision::abs(r) / boost::multiprecision::max(Real(1), Real(boost::multiprecision::abs(v)));
}

} // namespace detail

/// Max over the grid of |residual| / max(1, |V|), computed at precision +
/// guard digits and returned at that precision.
inline Real numeric_pde_residual(const Candidate& c, const std::vector<Rational>& s_grid,
                                 const std::vector<Rational>& t_grid, unsigned precision = 30) {
    detail::check_grid(s_grid, precision);
    PrecisionScope scope(precision + kGuardDigits);
    Real worst(0);
    for (const auto& s : s_grid)
        for (const auto& t : t_grid)
            worst = boost::multiprecision::max(worst, detail::scaled_residual(c.params, c.lambda, c.spatial, to_real(s),
                                                                              to_real(t)));
    return worst;
}

inline Real numeric_pde_residual(const cev::SpacetimeSolution& v, const std::vector<Rational>& s_grid,
                                 const std::vector<Rational>& t_grid, unsigned precision = 30) {
    return numeric_pde_residual(Candidate::from(v), s_grid, t_grid, precision);
}

/// Superposition: residual of the weighted sum, scaled by the summed value.
inline Real numeric_pde_residual(const cev::Superposition& v, const std::vector<Rational>& s_grid,
                                 const std::vector<Rational>& t_grid, unsigned precision = 30) {
    detail::check_grid(s_grid, precision);
    PrecisionScope scope(precision + kGuardDigits);
    const cev::CevParams& p = v.params();
    const Real m = to_real(p.drift());
    const Real half_a2 = to_real(p.alpha_sq() / 2);
    Real worst(0);
    for (const auto& sr : s_grid) {
        const Real s = to_real(sr);
        for (const auto& tr : t_grid) {
            const Real t = to_real(tr);
            Real value(0), r(0);
            for (const auto& term : v.terms()) {
                const auto& sol = term.solution;
                const Jet j = sol.spatial().jet(s);
                const Real w = to_real(term.coeff) * boost::multiprecision::exp(-to_real(sol.lambda()) * t);
                value += w * j.value;
                r += w * (-to_real(sol.lambda()) * j.value + half_a2 * ipow(s, p.two_beta() + 2) * j.d2 + m * s * j.d1 -
                          m * j.value);
            }
            worst = boost::multiprecision::max(
                worst, Real(boost::multiprecision::abs(r) / boost::multiprecision::max(Real(1), Real(boost::multiprecision::abs(value)))));
        }
    }
    return worst;
}

/// n evenly spaced exact nodes on [lo, hi]; n = 1 gives {lo}.
inline std::vector<Rational> linspace(const Rational& lo, const Rational& hi, int n) {
    std::vector<Rational> out;
    if (n <= 0) return out;
    if (n == 1) return {lo};
    for (int i = 0; i < n; ++i) out.push_back(lo + (hi - lo) * ratio(i, n - 1));
    return out;
}

// ---------------------------------------------------------------------------
// Integration oracle

struct OracleReport {
    Real s_start;
    Real s_end;
    Real closed_form_value;
    Real integrated_value;
    Real integrated_derivative;
    Real relative_error;
    long step_count = 0;
    long rejected_steps = 0;
    Real tolerance_used;
    /// Error of the coarser of the last two runs, from their difference.
    Real estimated_error;
    int refinements = 0;
    unsigned precision = 30;

    bool passed(const Real& tol) const { return relative_error <= tol; }
};

inline constexpr const char* kRelativeErrorFloor = "1e-30";

namespace detail {

struct Rkf78 {
    static constexpr int kStages = 13;
    std::array<Real, kStages> c;
    std::array<std::array<Real, kStages>, kStages> a;
    std::array<Real, kStages> b;
    Real err_weight;

    Rkf78() {
        const auto q = [](long n, long d) { return to_real(ratio(n, d)); };
        for (auto& row : a) row.fill(Real(0));
        b.fill(Real(0));
        c = {q(0, 1), q(2, 27), q(1, 9), q(1, 6), q(5, 12), q(1, 2), q(5, 6), q(1, 6), q(2, 3), q(1, 3), q(1, 1), q(0, 1), q(1, 1)};
        const std::vector<std::vector<std::pair<long, long>>> rows = {
            {{2, 27}},
            {{1, 36}, {1, 12}},
            {{1, 24}, {0, 1}, {1, 8}},
            {{5, 12}, {0, 1}, {-25, 16}, {25, 16}},
            {{1, 20}, {0, 1}, {0, 1}, {1, 4}, {1, 5}},
            {{-25, 108}, {0, 1}, {0, 1}, {125, 108}, {-65, 27}, {125, 54}},
            {{31, 300}, {0, 1}, {0, 1}, {0, 1}, {61, 225}, {-2, 9}, {13, 900}},
            {{2, 1}, {0, 1}, {0, 1}, {-53, 6}, {704, 45}, {-107, 9}, {67, 90}, {3, 1}},
            {{-91, 108}, {0, 1}, {0, 1}, {23, 108}, {-976, 135}, {311, 54}, {-19, 60}, {17, 6}, {-1, 12}},
            {{2383, 4100}, {0, 1}, {0, 1}, {-341, 164}, {4496, 1025}, {-301, 82}, {2133, 4100}, {45, 82}, {45, 164}, {18, 41}},
            {{3, 205}, {0, 1}, {0, 1}, {0, 1}, {0, 1}, {-6, 41}, {-3, 205}, {-3, 41}, {3, 41}, {6, 41}, {0, 1}},
            {{-1777, 4100}, {0, 1}, {0, 1}, {-341, 164}, {4496, 1025}, {-289, 82}, {2193, 4100}, {51, 82}, {33, 164}, {12, 41}, {0, 1}, {1, 1}},
        };
        for (std::size_t i = 0; i < rows.size(); ++i)
            for (std::size_t j = 0; j < rows[i].size(); ++j) a[i + 1][j] = q(rows[i][j].first, rows[i][j].second);
        b[5] = q(34, 105);
        b[6] = b[7] = q(9, 35);
        b[8] = b[9] = q(9, 280);
        b[11] = b[12] = q(41, 840);
        err_weight = q(41, 840);
    }
};

using State = std::array<Real, 2>;

} // namespace detail

struct OdeIntegration {
    Real value;
    Real derivative;
    long steps = 0;
    long rejected = 0;
};

/// Integrates (alpha^2/2) S^(2beta+2) C'' + (r-q) S C' - (r-q+lambda) C = 0
/// from (s0, c0, c0') to s1 with an adaptive RKF 7(8) pair, keeping the
/// eighth-order solution. The local error target per step is `step_tol`
/// relative to the state size.
inline OdeIntegration integrate_cev_ode(const cev::CevParams& p, const Rational& lambda, const Real& s0, const Real& s1,
                                        const Real& c0, const Real& c0prime, const Real& step_tol, unsigned precision) {
    if (s0 <= 0 || s1 <= 0) throw DomainError("integration endpoints must be positive");
    const detail::Rkf78 tab;
    const Real m = to_real(p.drift());
    const Real ml = to_real(p.drift() + lambda);
    const Real half_a2 = to_real(p.alpha_sq() / 2);
    const int power = p.two_beta() + 2;
    const auto rhs = [&](const Real& s, const detail::State& y) -> detail::State {
        return {y[1], (ml * y[0] - m * s * y[1]) / (half_a2 * ipow(s, power))};
    };

    OdeIntegration out;
    detail::State y{c0, c0prime};
    Real s = s0;
    const Real span = s1 - s0;
    const int dir = span > 0 ? 1 : -1;
    Real h = span / 64;
    const Real h_min = boost::multiprecision::abs(span) * boost::multiprecision::pow(Real(10), -static_cast<int>(precision));
    const Real tiny = boost::multiprecision::pow(Real(10), -static_cast<int>(2 * precision));
    constexpr long kMaxSteps = 1000000;

    std::array<detail::State, detail::Rkf78::kStages> k;
    while ((s1 - s) * dir > 0) {
        if ((s + h - s1) * dir > 0) h = s1 - s;
        for (int i = 0; i < detail::Rkf78::kStages; ++i) {
            detail::State yi = y;
            for (int j = 0; j < i; ++j) {
                if (tab.a[i][j] == 0) continue;
                yi[0] += h * tab.a[i][j] * k[j][0];
                yi[1] += h * tab.a[i][j] * k[j][1];
            }
            k[i] = rhs(s + tab.c[i] * h, yi);
        }
        detail::State yn = y;
        for (int i = 0; i < detail::Rkf78::kStages; ++i) {
            if (tab.b[i] == 0) continue;
            yn[0] += h * tab.b[i] * k[i][0];
            yn[1] += h * tab.b[i] * k[i][1];
        }
        Real ratio(0);
        for (int d = 0; d < 2; ++d) {
            const Real e = boost::multiprecision::abs(h * tab.err_weight * (k[0][d] + k[10][d] - k[11][d] - k[12][d]));
            const Real scale =
                step_tol * boost::multiprecision::max(boost::multiprecision::abs(y[d]), boost::multiprecision::abs(yn[d])) + tiny;
            ratio = boost::multiprecision::max(ratio, Real(e / scale));
        }
        if (ratio <= 1) {
            s += h;
            y = yn;
            ++out.steps;
        } else {
            ++out.rejected;
        }
        const Real factor = ratio == 0 ? Real(4)
                                       : boost::multiprecision::min(
                                             Real(4), boost::multiprecision::max(Real(0.125), Real(0.9 * boost::multiprecision::pow(ratio, Real(-1) / 8))));
        h *= factor;
        if (boost::multiprecision::abs(h) < h_min && (s1 - s) * dir > 0)
            throw StepSizeUnderflow("step size fell below " + format_sci(h_min, 3) + " at S = " + format_real(s, 20));
        if (out.steps + out.rejected > kMaxSteps) throw StepSizeUnderflow("step budget exhausted at S = " + format_real(s, 20));
    }
    out.value = y[0];
    out.derivative = y[1];
    return out;
}

/// Integrates from given initial data until two runs with per-step targets a
/// factor 1000 apart agree to `tol`, and reports the finer run. The
/// closed form, when given, is only used for the final comparison.
inline OracleReport ode_integrate_oracle(const cev::CevParams& p, const Rational& lambda, const Rational& s0,
                                         const Rational& s1, const Real& c0, const Real& c0prime, const Real& tol,
                                         unsigned precision = 30, const ClosedFormFunction* expected = nullptr) {
    if (s0 == s1) throw DomainError("oracle needs s0 != s1");
    PrecisionScope scope(precision + kGuardDigits);
    OracleReport rep;
    rep.precision = precision;
    rep.s_start = to_real(s0);
    rep.s_end = to_real(s1);
    rep.tolerance_used = tol;
    const Real floor(kRelativeErrorFloor);
    const Real limit = boost::multiprecision::pow(Real(10), -static_cast<int>(precision + kGuardDigits) + 5);
    const auto rel = [&](const Real& a, const Real& b) {
        return Real(boost::multiprecision::abs(a - b) / boost::multiprecision::max(Real(boost::multiprecision::abs(b)), floor));
    };
    Real step_tol = tol / 1000;
    OdeIntegration coarse = integrate_cev_ode(p, lambda, rep.s_start, rep.s_end, Real(c0), Real(c0prime), step_tol, precision);
    OdeIntegration fine = coarse;
    rep.step_count = coarse.steps;
    rep.rejected_steps = coarse.rejected;
    while (true) {
        const Real next = step_tol / 1000;
        if (next < limit) break;
        step_tol = next;
        fine = integrate_cev_ode(p, lambda, rep.s_start, rep.s_end, Real(c0), Real(c0prime), step_tol, precision);
        rep.step_count += fine.steps;
        rep.rejected_steps += fine.rejected;
        ++rep.refinements;
        rep.estimated_error = rel(coarse.value, fine.value);
        if (rep.estimated_error <= tol) break;
        coarse = fine;
    }
    rep.integrated_value = fine.value;
    rep.integrated_derivative = fine.derivative;
    rep.closed_form_value = expected ? expected->eval(rep.s_end) : Real(0);
    rep.relative_error = rel(rep.integrated_value, rep.closed_form_value);
    return rep;
}

/// Seeds the oracle from the closed form at s0 and compares at s1.
inline OracleReport oracle_check(const Candidate& c, const Rational& s0, const Rational& s1, const Real& tol,
                                 unsigned precision = 30) {
    PrecisionScope scope(precision + kGuardDigits);
    const Jet j = c.spatial.jet(to_real(s0));
    return ode_integrate_oracle(c.params, c.lambda, s0, s1, j.value, j.d1, tol, precision, &c.spatial);
}

inline OracleReport oracle_check(const cev::SpacetimeSolution& v, const Rational& s0 = Rational(1),
                                 const Rational& s1 = Rational(2), const Real& tol = Real("1e-22"), unsigned precision = 30) {
    return oracle_check(Candidate::from(v), s0, s1, tol, precision);
}

// ---------------------------------------------------------------------------
// Mutations

struct Mutation {
    Candidate candidate;
    std::string description;
};

/// Number of independent stored coefficients a mutation may target: the body
/// coefficients when there are at least two (a lone term only rescales),
/// lambda, and the exponential coefficient when present.
inline std::size_t mutation_slots(const Candidate& c) {
    const std::size_t body = c.spatial.body().size() >= 2 ? c.spatial.body().size() : 0;
    return body + 1 + (c.spatial.exp_coeff() != 0 ? 1 : 0);
}

/// Adds 1 to the coefficient in slot `index` (taken modulo mutation_slots).
inline Mutation mutate(const Candidate& c, std::size_t index) {
    const std::size_t slots = mutation_slots(c);
    index %= slots;
    const std::size_t body = slots - 1 - (c.spatial.exp_coeff() != 0 ? 1 : 0);
    Mutation out{c, {}};
    if (index < body) {
        auto it = c.spatial.body().terms().begin();
        std::advance(it, static_cast<long>(index));
        LaurentPoly b = c.spatial.body();
        b.add_term(it->first, Rational(1));
        out.candidate.spatial = c.spatial.with_body(std::move(b));
        out.description = "body coefficient of S^" + std::to_string(it->first) + ": " + to_string(it->second) + " -> " +
                          to_string(it->second + 1);
    } else if (index == body) {
        out.candidate.lambda = c.lambda + 1;
        out.description = "lambda: " + to_string(c.lambda) + " -> " + to_string(c.lambda + 1);
    } else {
        out.candidate.spatial = ClosedFormFunction(c.spatial.exp_coeff() + 1, c.spatial.exp_exponent(), c.spatial.body(),
                                                   c.spatial.power());
        out.description = "exponential coefficient: " + to_string(c.spatial.exp_coeff()) + " -> " +
                          to_string(c.spatial.exp_coeff() + 1);
    }
    out.candidate.label = c.label + " [mutated " + out.description + "]";
    return out;
}

} // namespace lcev::verify
