// Kovacic's algorithm, case n = 1, in the Duval / Loday-Richaud formulation.
//
// Scope: normal-form equations z'' = nu z over Q(S) where nu has at most one
// finite pole, located at the origin. The full search (E-sets, families,
// theta, polynomial P) runs when infinity is a regular point of order 0 and
// the pole at the origin has even order 2q with q >= 2. The coefficient field
// is Q rather than C: a square-root bracket whose leading coefficient is not
// a rational square is reported as UnsupportedPotential.

#pragma once

#include "lcev/closed_form.hpp"
#include "lcev/errors.hpp"
#include "lcev/linsolve.hpp"
#include "lcev/poly.hpp"
#include "lcev/ratfunc.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace lcev::kovacic {

enum class Point { Zero, Infinity };

/// h on L_max = {1, 2, 4, 6, 12}.
constexpr int h_of(int n) {
    switch (n) {
    case 1: return 1;
    case 2: return 4;
    default: return 12;
    }
}

struct CaseInfo {
    int order_at_zero = 0;     // o(0); 0 when the origin is not a pole
    int order_at_infinity = 0; // o(inf) = max(0, 4 + deg s - deg t)
    int m = 0;                 // highest pole multiplicity
    int m_plus = 0;            // max(m, o(inf))
    int deg_s = Poly::kZeroDegree;
    int deg_t = 0;
    std::map<int, std::set<Point>> gamma_sets; // order -> points of that order
    int gamma2 = 0;
    int gamma = 0;
    std::set<int> degrees_L;

    bool pole_at_zero() const { return order_at_zero > 0; }
    bool infinity_in_gamma0() const { return order_at_infinity == 0; }

    /// Elements of L beyond 1: present in the case analysis, not searched.
    std::set<int> unimplemented_degrees() const {
        std::set<int> out;
        for (int d : degrees_L)
            if (d != 1) out.insert(d);
        return out;
    }
};

/// Step 1 (1a-1d): pole orders, Gamma sets, gamma_2, gamma and L.
inline CaseInfo classify(const RatFunc& nu) {
    if (!nu.has_monomial_denominator())
        throw UnsupportedPotential("denominator " + nu.den().str() + " has a root other than 0");
    CaseInfo info;
    info.deg_t = nu.den().degree();
    info.deg_s = nu.num().degree();
    info.m = info.deg_t;
    info.order_at_zero = info.deg_t;
    info.order_at_infinity = nu.is_zero() ? 0 : std::max(0, 4 + info.deg_s - info.deg_t);
    info.m_plus = std::max(info.m, info.order_at_infinity);

    for (int i = 0; i <= info.m_plus; ++i) {
        std::set<Point> pts;
        if (info.pole_at_zero() && info.order_at_zero == i) pts.insert(Point::Zero);
        if (info.order_at_infinity == i) pts.insert(Point::Infinity);
        if (!pts.empty()) info.gamma_sets.emplace(i, std::move(pts));
    }

    const auto count = [&](int order) -> int {
        auto it = info.gamma_sets.find(order);
        return it == info.gamma_sets.end() ? 0 : static_cast<int>(it->second.size());
    };
    if (info.m_plus >= 2) {
        info.gamma2 = count(2);
        std::set<Point> odd;
        for (int k = 3; k <= info.m_plus; k += 2) {
            auto it = info.gamma_sets.find(k);
            if (it != info.gamma_sets.end()) odd.insert(it->second.begin(), it->second.end());
        }
        info.gamma = info.gamma2 + static_cast<int>(odd.size());
    }

    if (info.gamma == info.gamma2) info.degrees_L.insert(1);
    if (info.gamma >= 2) info.degrees_L.insert(2);
    if (info.m_plus <= 2) info.degrees_L.insert({4, 6, 12});
    return info;
}

/// [sqrt nu]_0 = a0 / S^q + sum_{i=q-1}^{2} mu_i / S^i, together with b0,
/// the S^-(q+1) coefficient of nu - [sqrt nu]_0^2.
struct SqrtBracket {
    Rational a0;
    std::vector<Rational> mu; // mu[j] holds mu_{q-1-j}
    Rational b0;
    int half_order_q = 0;

    Rational mu_at(int i) const {
        if (i < 2 || i > half_order_q - 1) return Rational(0);
        return mu[static_cast<std::size_t>(half_order_q - 1 - i)];
    }

    bool subleading_vanishes() const {
        return std::all_of(mu.begin(), mu.end(), [](const Rational& x) { return x == 0; });
    }

    LaurentPoly as_laurent() const {
        LaurentPoly out = LaurentPoly::monomial(a0, -half_order_q);
        for (int i = 2; i < half_order_q; ++i) out.add_term(-i, mu_at(i));
        return out;
    }

    SqrtBracket negated() const {
        SqrtBracket out = *this;
        out.a0 = -out.a0;
        for (auto& x : out.mu) x = -x;
        return out;
    }
};

/// Step 2b at the origin by undetermined coefficients. `sign` selects which
/// of the two square roots is returned: a0 = sign * sqrt(leading coefficient).
inline SqrtBracket sqrt_bracket(const RatFunc& nu, int sign = +1) {
    const CaseInfo info = classify(nu);
    const int order = info.order_at_zero;
    if (order < 4 || order % 2 != 0)
        throw OddPoleOrder("pole order " + std::to_string(order) + " at 0 is not of the form 2q with q >= 2");
    const int q = order / 2;
    // Laurent coefficients nu_{-2q} ... nu_{-(q+1)}
    const auto series = nu.series_at_zero(-2 * q, -(q + 1));
    const auto nu_at = [&](int e) { return series[static_cast<std::size_t>(e + 2 * q)]; };

    auto root = rational_sqrt(nu_at(-2 * q));
    if (!root) throw UnsupportedPotential("leading coefficient " + to_string(nu_at(-2 * q)) + " is not a square in Q");

    // beta[i] = coefficient of S^-i in the bracket, 2 <= i <= q
    std::vector<Rational> beta(static_cast<std::size_t>(q) + 1);
    beta[static_cast<std::size_t>(q)] = sign >= 0 ? *root : Rational(-*root);
    const Rational& a0 = beta[static_cast<std::size_t>(q)];

    const auto square_coeff = [&](int t, int lo) {
        // sum over i + l = t with lo <= i, l <= q
        Rational acc(0);
        for (int i = std::max(lo, t - q); i <= std::min(q, t - lo); ++i)
            acc += beta[static_cast<std::size_t>(i)] * beta[static_cast<std::size_t>(t - i)];
        return acc;
    };

    for (int j = 1; j <= q - 2; ++j) {
        const int t = 2 * q - j;
        // known part excludes the two cross terms with beta_{q-j}
        const Rational known = square_coeff(t, q - j + 1);
        beta[static_cast<std::size_t>(q - j)] = (nu_at(-t) - known) / (2 * a0);
    }

    SqrtBracket out;
    out.a0 = a0;
    out.half_order_q = q;
    for (int i = q - 1; i >= 2; --i) out.mu.push_back(beta[static_cast<std::size_t>(i)]);
    out.b0 = nu_at(-(q + 1)) - square_coeff(q + 1, 2);
    return out;
}

struct ZeroExponent {
    Rational value;
    int sign = 1;    // S(e)
    int epsilon = 1; // the epsilon it was built with
};

struct ESets {
    std::vector<Rational> e_infinity;
    std::vector<ZeroExponent> e_zero;
};

/// Steps 2a and 2b for n = 1: E_inf = h(1){0, 1}, E_0 = {(q + eps b0/a0)/2}
/// with the Sign function.
inline ESets build_e_sets(const CaseInfo& info, const SqrtBracket& bracket) {
    if (!info.infinity_in_gamma0())
        throw UnsupportedPotential("infinity is not in Gamma_0 (o(inf) = " + std::to_string(info.order_at_infinity) + ")");
    if (info.order_at_zero != 2 * bracket.half_order_q || bracket.half_order_q < 2)
        throw UnsupportedPotential("origin is not a pole of order 2q with q >= 2");
    if (bracket.a0 == 0) throw ZeroLeadingCoefficient("a0 = 0 leaves b0/a0 undefined");

    ESets sets;
    const int h = h_of(1);
    for (int i = 0; i <= 1; ++i) sets.e_infinity.emplace_back(h * i);
    const Rational ratio = bracket.b0 / bracket.a0;
    for (int eps : {+1, -1}) {
        const Rational e = (Rational(bracket.half_order_q) + eps * ratio) / 2;
        const int s = bracket.b0 != 0 ? eps : 1;
        const bool duplicate = std::any_of(sets.e_zero.begin(), sets.e_zero.end(),
                                           [&](const ZeroExponent& z) { return z.value == e; });
        if (!duplicate) sets.e_zero.push_back({e, s, eps});
    }
    return sets;
}

struct FamilyCandidate {
    Rational e_zero;
    Rational e_infinity;
    int sign_zero = 1;
    Rational degree_d;
    bool retained = false;

    int degree() const { return to_int(degree_d); }
};

/// Steps 3a-3b: d(e) = n - (n / h(n)) sum e_c with n = 1; retain d in N.
inline std::vector<FamilyCandidate> enumerate_families(const ESets& sets) {
    constexpr int n = 1;
    std::vector<FamilyCandidate> out;
    for (const auto& z : sets.e_zero) {
        for (const auto& einf : sets.e_infinity) {
            FamilyCandidate c;
            c.e_zero = z.value;
            c.e_infinity = einf;
            c.sign_zero = z.sign;
            c.degree_d = Rational(n) - ratio(n, h_of(n)) * (z.value + einf);
            c.retained = is_nonnegative_integer(c.degree_d);
            out.push_back(c);
        }
    }
    return out;
}

/// Step 3c: theta = e_0 / S + S(e_0) [sqrt nu]_0.
inline RatFunc build_theta(const FamilyCandidate& candidate, const SqrtBracket& bracket) {
    if (!candidate.retained)
        throw NotRetained("family (e0 = " + to_string(candidate.e_zero) + ", einf = " + to_string(candidate.e_infinity) +
                          ") has degree " + to_string(candidate.degree_d));
    LaurentPoly t = LaurentPoly::monomial(candidate.e_zero, -1);
    t += bracket.as_laurent() * Rational(candidate.sign_zero);
    return RatFunc::from_laurent(t);
}

/// L[P] = P'' + 2 theta P' + (theta^2 + theta' - nu) P.
inline RatFunc apply_p_operator(const Poly& p, const RatFunc& theta, const RatFunc& nu) {
    const RatFunc coeff0 = theta * theta + theta.derivative() - nu;
    return RatFunc(p.derivative().derivative()) + RatFunc(Rational(2)) * theta * RatFunc(p.derivative()) +
           coeff0 * RatFunc(p);
}

/// Fourth step: the monic P of degree exactly d with L[P] = 0, or nullopt.
/// Solved as a dense linear system over Q after clearing denominators.
inline std::optional<Poly> find_polynomial(const RatFunc& theta, const RatFunc& nu, int d) {
    if (d < 0) throw DomainError("negative polynomial degree");
    std::vector<RatFunc> images;
    images.reserve(static_cast<std::size_t>(d) + 1);
    Poly common = Poly::constant(Rational(1));
    for (int i = 0; i <= d; ++i) {
        images.push_back(apply_p_operator(Poly::monomial(Rational(1), i), theta, nu));
        common = lcm(common, images.back().den());
    }
    std::vector<Poly> cleared;
    int rows = 0;
    for (const auto& img : images) {
        cleared.push_back(img.num() * Poly::divmod(common, img.den()).first);
        rows = std::max(rows, cleared.back().degree() + 1);
    }
    if (d == 0) {
        if (cleared[0].is_zero()) return Poly::constant(Rational(1));
        return std::nullopt;
    }
    RationalMatrix a(static_cast<std::size_t>(rows), std::vector<Rational>(static_cast<std::size_t>(d)));
    std::vector<Rational> b(static_cast<std::size_t>(rows));
    for (int r = 0; r < rows; ++r) {
        for (int i = 0; i < d; ++i) a[static_cast<std::size_t>(r)][static_cast<std::size_t>(i)] = cleared[static_cast<std::size_t>(i)][r];
        b[static_cast<std::size_t>(r)] = -cleared[static_cast<std::size_t>(d)][r];
    }
    auto x = solve_linear(std::move(a), std::move(b));
    if (!x) return std::nullopt;
    x->push_back(Rational(1));
    return Poly(std::move(*x));
}

/// nu = a^2/4 + a'/2 - b, so that z'' = nu z is y'' + a y' + b y = 0 under
/// z = exp((1/2) int a) y.
inline RatFunc normalize_ode(const RatFunc& a, const RatFunc& b) {
    return a * a * RatFunc(ratio(1, 4)) + a.derivative() * RatFunc(ratio(1, 2)) - b;
}

/// Closed-form antiderivative coefficient of a monomial c S^-(k+1): the
/// integral is (c / -k) S^-k. Returns (c / -k); requires the expected k.
inline Rational integrate_monomial_coeff(const RatFunc& f, int k, const char* what) {
    if (f.is_zero()) return Rational(0);
    const auto lp = f.as_laurent();
    if (!lp || lp->size() != 1 || lp->min_exponent() != -(k + 1))
        throw UnsupportedPotential(std::string(what) + " is not a multiple of S^" + std::to_string(-(k + 1)));
    return lp->leading() / Rational(-k);
}

/// eta = P exp(int theta), mapped back through y = exp(-(1/2) int a) eta.
///
/// `drift` is the first-derivative coefficient a of the original equation
/// (zero when the problem was posed in normal form). Both exponentials must
/// be of the form exp(c S^-2beta); the log term of int theta becomes S^e_0.
inline ClosedFormFunction assemble_solution(const Poly& p, const FamilyCandidate& candidate, const SqrtBracket& bracket,
                                            int two_beta, const RatFunc& drift = RatFunc{}) {
    if (two_beta == 0) throw DomainError("assemble_solution needs 2beta != 0");
    if (!bracket.subleading_vanishes())
        throw UnsupportedPotential("bracket with subleading terms has no single-exponential antiderivative");
    if (bracket.half_order_q - 1 != two_beta)
        throw UnsupportedPotential("bracket order q = " + std::to_string(bracket.half_order_q) + " does not match 2beta = " +
                                   std::to_string(two_beta));
    // int S(e0) a0 S^-q dS = S(e0) a0 S^(1-q) / (1-q)
    const Rational w_eta = Rational(candidate.sign_zero) * bracket.a0 / Rational(1 - bracket.half_order_q);
    // -(1/2) int a dS
    const Rational w_back = -integrate_monomial_coeff(drift, two_beta, "drift coefficient") / 2;
    return ClosedFormFunction(w_eta + w_back, two_beta, LaurentPoly::from_poly(p), candidate.e_zero);
}

struct RetainedFamily {
    FamilyCandidate candidate;
    RatFunc theta;
    std::optional<Poly> polynomial;
};

struct KovacicResult {
    CaseInfo info;
    SqrtBracket bracket;
    ESets e_sets;
    std::vector<FamilyCandidate> candidates;
    std::vector<RetainedFamily> retained;

    bool found() const {
        return std::any_of(retained.begin(), retained.end(), [](const RetainedFamily& f) { return f.polynomial.has_value(); });
    }
};

/// Steps 1-4 for n = 1 on z'' = nu z.
inline KovacicResult solve_n1(const RatFunc& nu, int bracket_sign = +1) {
    KovacicResult res;
    res.info = classify(nu);
    if (!res.info.infinity_in_gamma0() || !res.info.pole_at_zero() || res.info.order_at_zero < 4 ||
        res.info.order_at_zero % 2 != 0)
        throw UnsupportedPotential("pipeline needs o(inf) = 0 and o(0) = 2q with q >= 2 (got o(0) = " +
                                   std::to_string(res.info.order_at_zero) + ", o(inf) = " +
                                   std::to_string(res.info.order_at_infinity) + ")");
    if (!res.info.degrees_L.contains(1))
        throw UnsupportedPotential("1 is not in L; only the n = 1 search is implemented");
    res.bracket = sqrt_bracket(nu, bracket_sign);
    res.e_sets = build_e_sets(res.info, res.bracket);
    res.candidates = enumerate_families(res.e_sets);
    for (const auto& c : res.candidates) {
        if (!c.retained) continue;
        RetainedFamily f{c, build_theta(c, res.bracket), std::nullopt};
        f.polynomial = find_polynomial(f.theta, nu, c.degree());
        res.retained.push_back(std::move(f));
    }
    return res;
}

} // namespace lcev::kovacic
