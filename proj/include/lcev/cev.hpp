// The CEV model layer: the normal-form potential, family eigenvalues,
// truncated Kummer bases, the four spacetime solution classes, the beta = 0
// power solutions and linear superposition.
//
// Sign convention throughout: V(S, t) = C(S) exp(-lambda t). Every
// SpacetimeSolution is checked against the exact ODE residual when it is
// constructed; an object that exists is a certified solution.

#pragma once

#include "lcev/cev_params.hpp"
#include "lcev/closed_form.hpp"
#include "lcev/errors.hpp"
#include "lcev/kovacic.hpp"
#include "lcev/kummer.hpp"
#include "lcev/ratfunc.hpp"
#include "lcev/residual.hpp"

#include <boost/multiprecision/mpfr.hpp>

#include <array>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace lcev::cev {

/// Coefficients of C'' + a C' + b C = 0 after dividing the CEV ODE by
/// (alpha^2/2) S^(2beta+2).
struct OdeCoefficients {
    RatFunc a;
    RatFunc b;
};

inline OdeCoefficients ode_coefficients(const CevParams& p, const Rational& lambda) {
    const int tb = p.two_beta();
    return {RatFunc::monomial(2 * p.drift() / p.alpha_sq(), -(tb + 1)),
            RatFunc::monomial(-2 * (p.drift() + lambda) / p.alpha_sq(), -(tb + 2))};
}

/// nu = [(q-r)^2 + alpha^2((2beta-1)(q-r) + 2 lambda) S^2beta] / (alpha^4 S^(2+4beta)).
inline RatFunc cev_nu(const CevParams& p, const Rational& lambda) {
    const int tb = p.two_beta();
    if (tb < 2) throw OutOfPipelineScope("the normal-form pipeline covers 2beta >= 2, got " + std::to_string(tb));
    const Rational qr = p.q() - p.r();
    const Rational a2 = p.alpha_sq();
    Poly num = Poly::constant(qr * qr) + Poly::monomial(a2 * ((tb - 1) * qr + 2 * lambda), tb);
    Poly den = Poly::monomial(a2 * a2, 2 + 2 * tb);
    return reduce(std::move(num), std::move(den));
}

enum class Family { F1 = 1, F2 = 2, F3 = 3, F4 = 4 };

inline std::string family_name(Family f) { return "F" + std::to_string(static_cast<int>(f)); }

/// The separation constant that makes family f admit a degree-n polynomial.
inline Rational lambda_for(Family family, int n, const CevParams& p) {
    const Rational qr = p.q() - p.r();
    switch (family) {
    case Family::F1: return n * qr;
    case Family::F2: return (n + 1) * qr;
    case Family::F3: return -(p.two_beta() + n - 1) * qr;
    case Family::F4: return -(p.two_beta() + n) * qr;
    }
    throw DomainError("unknown family");
}

namespace detail {

/// m with shift = 2beta * m, when m is a nonnegative integer.
inline std::optional<int> truncation_order(int shift, int two_beta) {
    if (two_beta == 0) return std::nullopt;
    const Rational m = ratio(shift, two_beta);
    if (!is_nonnegative_integer(m)) return std::nullopt;
    return to_int(m);
}

/// sum_j K_j (kappa S^-2beta)^j, times S^lead.
inline LaurentPoly kummer_in_s(const KummerPoly& k, const Rational& kappa, int two_beta, int lead) {
    LaurentPoly out;
    Rational kp(1);
    for (std::size_t j = 0; j < k.coeffs().size(); ++j) {
        out.add_term(lead - two_beta * static_cast<int>(j), k.coeffs()[j] * kp);
        kp *= kappa;
    }
    return out;
}

/// (r - q) / (alpha^2 beta), the scale of the Kummer argument.
inline Rational kummer_scale(const CevParams& p) { return 2 * p.drift() / (p.alpha_sq() * p.two_beta()); }

inline Rational lower_param(int two_beta, int sign) { return Rational(1) + ratio(sign, two_beta); }

} // namespace detail

/// f_i(S), i = 1..8, as an exact Laurent polynomial in S.
///
/// Truncation is decided by the first Kummer parameter alone: F(-x, c; u) is
/// a polynomial exactly when x is a nonnegative integer, so f_1, f_3, f_5, f_7
/// need n/(2beta) in N, f_2, f_6 need (n-1)/(2beta) in N and f_4, f_8 need
/// (n+1)/(2beta) in N.
inline ClosedFormFunction basis_function(int i, int n, const CevParams& p) {
    if (i < 1 || i > 8) throw DomainError("basis index must be in 1..8");
    const int tb = p.two_beta();
    if (tb == 0) throw Unavailable("basis functions need 2beta != 0");
    const int r = (i - 1) % 4 + 1;
    const int u_sign = i <= 4 ? +1 : -1;
    int lead = n;
    int lower_sign = -1;
    switch (r) {
    case 1: lead = n; lower_sign = -1; break;
    case 2: lead = n - 1; lower_sign = +1; break;
    case 3: lead = n; lower_sign = +1; break;
    case 4: lead = n + 1; lower_sign = -1; break;
    }
    const auto m = detail::truncation_order(lead, tb);
    if (!m)
        throw NotTruncating("f" + std::to_string(i) + " with n = " + std::to_string(n) + " and 2beta = " +
                            std::to_string(tb) + " does not truncate");
    const KummerPoly k = kummer_truncated(*m, detail::lower_param(tb, lower_sign));
    return ClosedFormFunction::from_laurent(detail::kummer_in_s(k, u_sign * detail::kummer_scale(p), tb, lead));
}

struct Availability {
    std::set<int> classes;
    bool beta_zero = false;
    std::string n_rule;
};

inline Availability availability(int two_beta) {
    Availability a;
    if (two_beta == 0) {
        a.beta_zero = true;
        a.n_rule = "power solutions S^((xi1 +- zeta1)/(2 sigma^2)) for any lambda with a nonnegative discriminant";
    } else if (two_beta == 1) {
        a.classes = {2, 4};
        a.n_rule = "n = 0 or any positive integer";
    } else if (two_beta == -1) {
        a.classes = {1, 3};
        a.n_rule = "n = 0 or any negative integer";
    } else {
        a.classes = {1, 2, 3, 4};
        a.n_rule = "n = 2beta * j, j = 0, 1, 2, ...";
    }
    return a;
}

/// The first `count` admissible catalogue indices n for this 2beta.
inline std::vector<int> admissible_n(int two_beta, std::size_t count) {
    std::vector<int> out;
    if (two_beta == 0) return out;
    for (std::size_t j = 0; j < count; ++j) out.push_back(two_beta * static_cast<int>(j));
    return out;
}

enum class ClassId { One = 1, Two = 2, Three = 3, Four = 4, BetaZero = 0 };

struct Provenance {
    ClassId cls = ClassId::One;
    /// Catalogue index n; for beta = 0, +1 / -1 pick the (xi1 +- zeta1) root.
    int n = 0;

    std::string str() const {
        if (cls == ClassId::BetaZero) return std::string("beta0") + (n >= 0 ? "+" : "-");
        return "S" + std::to_string(static_cast<int>(cls)) + "," + std::to_string(n);
    }
    friend bool operator==(const Provenance&, const Provenance&) = default;
};

/// V(S, t) = spatial(S) exp(-lambda t), verified at construction.
class SpacetimeSolution {
public:
    static SpacetimeSolution create(CevParams params, Rational lambda, ClosedFormFunction spatial, Provenance prov) {
        if (spatial.is_zero()) throw VerificationFailed("zero spatial part for " + prov.str());
        const LaurentPoly res = verify::ode_residual_body(spatial, params, lambda);
        if (!res.is_zero())
            throw VerificationFailed(prov.str() + " (" + params.str() + "): nonzero residual " + res.str());
        return SpacetimeSolution(std::move(params), std::move(lambda), std::move(spatial), prov);
    }

    const CevParams& params() const { return params_; }
    const Rational& lambda() const { return lambda_; }
    const ClosedFormFunction& spatial() const { return spatial_; }
    const Provenance& provenance() const { return prov_; }

    Real eval(const Real& s, const Real& t) const {
        return spatial_.eval(s) * boost::multiprecision::exp(-to_real(lambda_) * t);
    }

private:
    SpacetimeSolution(CevParams params, Rational lambda, ClosedFormFunction spatial, Provenance prov)
        : params_(std::move(params)), lambda_(std::move(lambda)), spatial_(std::move(spatial)), prov_(prov) {}

    CevParams params_;
    Rational lambda_;
    ClosedFormFunction spatial_;
    Provenance prov_;
};

/// Catalogue entry S_{i,n}.
///
/// n must make F(-n/(2beta), ...) terminate, i.e. n/(2beta) in N: n is a
/// nonnegative multiple of 2beta when beta > 0 and a nonpositive one when
/// beta < 0. Classes excluded at 2beta = +-1 fail with PochhammerZero when
/// the lower parameter 0 would be reached, Unavailable otherwise.
inline SpacetimeSolution solution_class(int i, int n, const CevParams& p) {
    if (i < 1 || i > 4) throw DomainError("class index must be in 1..4");
    const int tb = p.two_beta();
    if (tb == 0) throw Unavailable("2beta = 0 admits only the power-solution pair");
    const auto m = detail::truncation_order(n, tb);
    if (!m)
        throw NotTruncating("class " + std::to_string(i) + ": n = " + std::to_string(n) + " is not in 2beta*N for 2beta = " +
                            std::to_string(tb));
    if (n != 0 && p.drift() == 0) throw DegenerateDrift("n != 0 requires r != q");

    const bool odd_class = i == 1 || i == 3;
    const KummerPoly k = kummer_truncated(*m, detail::lower_param(tb, odd_class ? -1 : +1));
    if (!availability(tb).classes.contains(i))
        throw Unavailable("class " + std::to_string(i) + " is not admitted at 2beta = " + std::to_string(tb));

    const Rational kappa = detail::kummer_scale(p);
    const bool with_exp = i >= 3;
    const LaurentPoly body = detail::kummer_in_s(k, with_exp ? Rational(-kappa) : kappa, tb, odd_class ? 1 : 0);
    const ClosedFormFunction spatial(with_exp ? kappa : Rational(0), tb, body);
    const Family fam = static_cast<Family>(i);
    return SpacetimeSolution::create(p, lambda_for(fam, n, p), spatial, {static_cast<ClassId>(i), n});
}

/// Exponents of the beta = 0 power solutions (sigma is alpha here):
/// xi1 = sigma^2 - 2(r-q), zeta1 = sqrt(xi1^2 + 8 sigma^2 (r-q+lambda)),
/// exponents (xi1 +- zeta1) / (2 sigma^2).
struct BetaZeroExponents {
    Rational xi1;
    Rational discriminant;
    std::optional<Rational> zeta1_exact;
    std::optional<std::array<Rational, 2>> exact; // {plus, minus}
    Real zeta1;
    std::array<Real, 2> exponents;

    bool is_exact() const { return exact.has_value(); }
};

inline BetaZeroExponents beta_zero(const CevParams& p, const Rational& lambda, unsigned precision = 30) {
    if (p.two_beta() != 0) throw DomainError("beta_zero needs 2beta = 0");
    const Rational s2 = p.alpha_sq();
    BetaZeroExponents out;
    out.xi1 = s2 - 2 * p.drift();
    out.discriminant = out.xi1 * out.xi1 + 8 * s2 * (p.drift() + lambda);
    if (out.discriminant < 0)
        throw NegativeDiscriminant("xi1^2 + 8 sigma^2 (r - q + lambda) = " + to_string(out.discriminant) + " < 0");
    out.zeta1_exact = rational_sqrt(out.discriminant);
    if (out.zeta1_exact)
        out.exact = std::array<Rational, 2>{(out.xi1 + *out.zeta1_exact) / (2 * s2),
                                            (out.xi1 - *out.zeta1_exact) / (2 * s2)};
    PrecisionScope scope(precision + kGuardDigits);
    out.zeta1 = out.zeta1_exact ? to_real(*out.zeta1_exact) : Real(boost::multiprecision::sqrt(to_real(out.discriminant)));
    const Real xi = to_real(out.xi1);
    const Real den = 2 * to_real(s2);
    out.exponents = {(xi + out.zeta1) / den, (xi - out.zeta1) / den};
    return out;
}

/// S^exponent exp(-lambda t) for the chosen root (+1 or -1); the exponent
/// must be rational for an exact certificate.
inline SpacetimeSolution beta_zero_solution(const CevParams& p, const Rational& lambda, int root) {
    const BetaZeroExponents ex = beta_zero(p, lambda);
    if (!ex.is_exact())
        throw IrrationalExponent("discriminant " + to_string(ex.discriminant) + " is not a rational square");
    const Rational& e = root >= 0 ? (*ex.exact)[0] : (*ex.exact)[1];
    ClosedFormFunction spatial(Rational(0), 1, LaurentPoly::constant(Rational(1)), e);
    return SpacetimeSolution::create(p, lambda, spatial, {ClassId::BetaZero, root >= 0 ? 1 : -1});
}

/// sum c_i V_i over solutions sharing one parameter set. Terms with the same
/// lambda and the same exponential/power factor are merged into one group.
class Superposition {
public:
    struct Term {
        Rational coeff;
        SpacetimeSolution solution;
    };
    struct Group {
        Rational lambda;
        ClosedFormFunction spatial;
    };

    explicit Superposition(std::vector<Term> terms) : terms_(std::move(terms)) {
        if (terms_.empty()) throw DomainError("empty superposition");
        for (const auto& t : terms_) {
            if (!(t.solution.params() == terms_.front().solution.params()))
                throw ParamMismatch("superposition terms use different parameters: " + t.solution.params().str() +
                                    " vs " + terms_.front().solution.params().str());
            const ClosedFormFunction part = t.solution.spatial().scaled(t.coeff);
            bool merged = false;
            for (auto& g : groups_) {
                if (g.lambda == t.solution.lambda() && g.spatial.same_factor(part)) {
                    g.spatial = g.spatial.with_body(g.spatial.body() + part.body());
                    merged = true;
                    break;
                }
            }
            if (!merged) groups_.push_back({t.solution.lambda(), part});
        }
        std::erase_if(groups_, [](const Group& g) { return g.spatial.is_zero(); });
    }

    const std::vector<Term>& terms() const { return terms_; }
    const std::vector<Group>& groups() const { return groups_; }
    const CevParams& params() const { return terms_.front().solution.params(); }
    bool is_identically_zero() const { return groups_.empty(); }

    Real eval(const Real& s, const Real& t) const {
        Real acc(0);
        for (const auto& term : terms_) acc += to_real(term.coeff) * term.solution.eval(s, t);
        return acc;
    }

private:
    std::vector<Term> terms_;
    std::vector<Group> groups_;
};

inline Superposition superpose(std::vector<Superposition::Term> terms) { return Superposition(std::move(terms)); }

// ---------------------------------------------------------------------------
// Kovacic pipeline on the CEV potential, 2beta >= 2.

/// theta of family f at catalogue index n, as given by the family formulas.
inline RatFunc family_theta(Family family, int n, const CevParams& p) {
    const Rational qr = p.q() - p.r();
    const int tb = p.two_beta();
    const Rational e0 = family == Family::F1 || family == Family::F3 ? Rational(1 - n) : Rational(-n);
    const int sign = family == Family::F1 || family == Family::F2 ? -1 : +1;
    LaurentPoly t = LaurentPoly::monomial(e0, -1);
    t.add_term(-(1 + tb), sign * qr / p.alpha_sq());
    return RatFunc::from_laurent(t);
}

/// Index of the truncated-Kummer basis function whose polynomial family f finds.
inline int family_basis_index(Family family) {
    switch (family) {
    case Family::F1: return 1;
    case Family::F2: return 3;
    case Family::F3: return 5;
    case Family::F4: return 7;
    }
    return 0;
}

/// Label of a candidate: F1/F2 take the bracket with sign -(q-r)/alpha^2,
/// F3/F4 the other one; e_inf = 0 or 1 picks within each pair.
inline Family family_of(const kovacic::FamilyCandidate& c, const kovacic::SqrtBracket& bracket, const CevParams& p) {
    const bool minus = c.sign_zero * bracket.a0 == -(p.q() - p.r()) / p.alpha_sq();
    if (c.e_infinity == 0) return minus ? Family::F1 : Family::F3;
    return minus ? Family::F2 : Family::F4;
}

struct PipelineFamily {
    Family family;
    kovacic::FamilyCandidate candidate;
    RatFunc theta;
    std::optional<Poly> polynomial;
    std::optional<ClosedFormFunction> solution;
};

struct PipelineRun {
    Rational lambda;
    RatFunc nu;
    kovacic::KovacicResult result;
    std::vector<PipelineFamily> families;

    const PipelineFamily* find(Family f) const {
        for (const auto& fam : families)
            if (fam.family == f) return &fam;
        return nullptr;
    }
};

/// Normal form, Kovacic n = 1, and back-transformation of every found P.
inline PipelineRun run_pipeline(const CevParams& p, const Rational& lambda, int bracket_sign = +1) {
    if (p.drift() == 0) throw ZeroLeadingCoefficient("r = q makes the bracket coefficient (q-r)/alpha^2 vanish");
    PipelineRun run;
    run.lambda = lambda;
    const OdeCoefficients ab = ode_coefficients(p, lambda);
    run.nu = cev_nu(p, lambda);
    run.result = kovacic::solve_n1(run.nu, bracket_sign);
    for (const auto& r : run.result.retained) {
        PipelineFamily f{family_of(r.candidate, run.result.bracket, p), r.candidate, r.theta, r.polynomial, std::nullopt};
        if (r.polynomial)
            f.solution = kovacic::assemble_solution(*r.polynomial, r.candidate, run.result.bracket, p.two_beta(), ab.a);
        run.families.push_back(std::move(f));
    }
    return run;
}

/// lambda at which family f predicts degree n, read off the pipeline's own
/// degree function d(lambda) (affine in lambda away from b0 = 0).
inline Rational pipeline_lambda(const CevParams& p, Family family, int n) {
    if (p.drift() == 0) throw ZeroLeadingCoefficient("r = q");
    const auto degree_at = [&](const Rational& lambda) {
        const RatFunc nu = cev_nu(p, lambda);
        const auto info = kovacic::classify(nu);
        const auto bracket = kovacic::sqrt_bracket(nu);
        for (const auto& c : kovacic::enumerate_families(kovacic::build_e_sets(info, bracket)))
            if (family_of(c, bracket, p) == family) return c.degree_d;
        throw DomainError("family " + family_name(family) + " missing from the E-sets");
    };
    const Rational l0(0);
    const Rational l1 = p.q() - p.r();
    const Rational d0 = degree_at(l0);
    const Rational d1 = degree_at(l1);
    return l0 + (Rational(n) - d0) * (l1 - l0) / (d1 - d0);
}

struct Agreement {
    bool lambda_ok = false;     // pipeline_lambda == lambda_for
    bool retained_ok = false;   // f retained with degree n, P found
    bool theta_ok = false;      // theta == family_theta
    bool polynomial_ok = false; // P proportional to the basis polynomial
    bool solution_ok = false;   // assembled C proportional to the catalogue class
    std::string detail;

    bool ok() const { return lambda_ok && retained_ok && theta_ok && polynomial_ok && solution_ok; }
};

namespace detail {

inline bool proportional(const LaurentPoly& a, const LaurentPoly& b) {
    return !a.is_zero() && !b.is_zero() && a.monic() == b.monic();
}

} // namespace detail

/// Compares the pipeline run at lambda_for(f, n) with the catalogue entry S_{f,n}.
inline Agreement check_agreement(const CevParams& p, Family family, int n) {
    Agreement a;
    const Rational lambda = lambda_for(family, n, p);
    a.lambda_ok = pipeline_lambda(p, family, n) == lambda;
    const PipelineRun run = run_pipeline(p, lambda);
    const PipelineFamily* f = run.find(family);
    if (!f) {
        a.detail = family_name(family) + " not retained at lambda = " + to_string(lambda);
        return a;
    }
    a.retained_ok = f->candidate.degree_d == n && f->polynomial.has_value();
    a.theta_ok = f->theta == family_theta(family, n, p);
    if (!a.retained_ok) {
        a.detail = family_name(family) + ": degree " + to_string(f->candidate.degree_d) +
                   (f->polynomial ? "" : ", no polynomial");
        return a;
    }
    const ClosedFormFunction basis = basis_function(family_basis_index(family), n, p);
    a.polynomial_ok = detail::proportional(LaurentPoly::from_poly(*f->polynomial), basis.body());
    const SpacetimeSolution cat = solution_class(static_cast<int>(family), n, p);
    a.solution_ok = f->solution->same_factor(cat.spatial()) && detail::proportional(f->solution->body(), cat.spatial().body());
    if (!a.ok())
        a.detail = family_name(family) + ": P = " + f->polynomial->str() + ", basis = " + basis.str() +
                   ", C = " + f->solution->str() + ", catalogue = " + cat.spatial().str();
    return a;
}

} // namespace lcev::cev
