#include "lcev/cev.hpp"
#include "lcev/verify.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace lcev;
using namespace lcev::verify;
using cev::CevParams;

namespace {

Rational Q(long n, long d = 1) { return ratio(n, d); }

CevParams market(int two_beta) { return {Q(7, 100), Q(3, 100), Q(1, 5), two_beta}; }

const std::vector<int> kTwoBetas = {-6, -5, -4, -3, -2, -1, 1, 2, 3, 4, 5, 6};

std::vector<cev::SpacetimeSolution> catalogue() {
    std::vector<cev::SpacetimeSolution> out;
    for (int tb : kTwoBetas)
        for (int i : cev::availability(tb).classes)
            for (int n : cev::admissible_n(tb, 4)) out.push_back(cev::solution_class(i, n, market(tb)));
    return out;
}

std::vector<Rational> s_grid() { return linspace(Q(1, 2), Q(2), 5); }
std::vector<Rational> t_grid() { return linspace(Q(0), Q(1), 3); }

} // namespace

// ---------------------------------------------------------------------------
// exact ODE residual

TEST(OdeResidual, LinearSolution) {
    for (int tb : kTwoBetas)
        EXPECT_TRUE(
            exact_ode_residual(ClosedFormFunction::from_laurent(LaurentPoly::monomial(Q(1), 1)), market(tb), Q(0)).is_zero);
}

TEST(OdeResidual, ConstantSolution) {
    const auto p = market(3);
    EXPECT_TRUE(exact_ode_residual(ClosedFormFunction::from_laurent(LaurentPoly::constant(Q(1))), p, p.q() - p.r()).is_zero);
}

TEST(OdeResidual, RejectsSquare) {
    // (alpha^2/2) S^4 * 2 + (r-q) S * 2S - (r-q) S^2 = alpha^2 S^4 + (r-q) S^2
    const auto p = market(2);
    const auto cert = exact_ode_residual(ClosedFormFunction::from_laurent(LaurentPoly::monomial(Q(1), 2)), p, Q(0));
    EXPECT_FALSE(cert.is_zero);
    LaurentPoly expect;
    expect.add_term(4, p.alpha_sq());
    expect.add_term(2, p.drift());
    EXPECT_EQ(cert.residual, expect);
}

// ---------------------------------------------------------------------------
// exact PDE residual

TEST(PdeResidual, Examples) {
    const auto p = market(2);
    const auto s10 = cev::solution_class(1, 0, p);
    const auto s20 = cev::solution_class(2, 0, p);
    EXPECT_TRUE(exact_pde_residual(s20).is_zero);
    EXPECT_TRUE(exact_pde_residual(s20, p).is_zero);
    EXPECT_TRUE(exact_pde_residual(cev::superpose({{Q(2), s10}, {Q(3), s20}})).is_zero);
    EXPECT_THROW(exact_pde_residual(s20, market(3)), ParamMismatch);
}

TEST(PdeResidual, LambdaOffByOneShiftsByTheBody) {
    for (const auto& v : catalogue()) {
        Candidate c = Candidate::from(v);
        c.lambda += 1;
        const auto cert = exact_pde_residual(c);
        EXPECT_FALSE(cert.is_zero) << c.label;
        EXPECT_EQ(cert.residual, v.spatial().body() * Q(-1)) << c.label;
    }
}

TEST(PdeResidual, TimeFactorIdentity) {
    const auto all = catalogue();
    std::mt19937 rng(2024);
    std::uniform_int_distribution<std::size_t> pick(0, all.size() - 1);
    std::uniform_int_distribution<int> shift(-3, 3);
    for (int k = 0; k < 50; ++k) {
        const auto& v = all[pick(rng)];
        Candidate c = Candidate::from(v);
        // off-solution lambdas too, so the identity is not just 0 == 0
        c.lambda += shift(rng);
        EXPECT_EQ(pde_residual_body(c), ode_residual_body(c.spatial, c.params, c.lambda)) << c.label;
    }
}

TEST(PdeResidual, SuperpositionGroups) {
    const auto p = market(4);
    const auto sum = cev::superpose({{Q(1), cev::solution_class(1, 4, p)}, {Q(-2), cev::solution_class(4, 8, p)}});
    const auto cert = exact_pde_residual(sum);
    EXPECT_TRUE(cert.is_zero);
    EXPECT_EQ(cert.groups.size(), 2u);
}

// ---------------------------------------------------------------------------
// numeric residual

TEST(NumericResidual, Examples) {
    const auto s10 = cev::solution_class(1, 0, market(2));
    const auto s12 = cev::solution_class(1, 2, market(2));
    EXPECT_LE(numeric_pde_residual(s10, s_grid(), t_grid(), 30), numeric_threshold(30));
    EXPECT_LE(numeric_pde_residual(s12, s_grid(), t_grid(), 30), numeric_threshold(30));
    EXPECT_LE(numeric_pde_residual(s12, s_grid(), t_grid(), 60), numeric_threshold(60));
    const auto bad = mutate(Candidate::from(s12), 0).candidate;
    EXPECT_GT(numeric_pde_residual(bad, s_grid(), t_grid(), 30), Real("1e-6"));
}

TEST(NumericResidual, DomainErrors) {
    const auto v = cev::solution_class(1, 0, market(2));
    EXPECT_THROW(numeric_pde_residual(v, {Q(0)}, t_grid(), 30), DomainError);
    EXPECT_THROW(numeric_pde_residual(v, {Q(-1, 2)}, t_grid(), 30), DomainError);
    EXPECT_THROW(numeric_pde_residual(v, s_grid(), t_grid(), 20), DomainError);
}

TEST(NumericResidual, AgreesWithCertificates) {
    const auto s_wide = linspace(Q(1, 2), Q(3), 6);
    for (const auto& v : catalogue()) {
        ASSERT_TRUE(exact_pde_residual(v).is_zero);
        EXPECT_LE(numeric_pde_residual(v, s_wide, t_grid(), 30), numeric_threshold(30)) << v.provenance().str();
    }
}

TEST(NumericResidual, Superposition) {
    const auto p = market(-3);
    const auto sum =
        cev::superpose({{Q(1), cev::solution_class(1, -3, p)}, {Q(5, 2), cev::solution_class(3, -6, p)}});
    EXPECT_LE(numeric_pde_residual(sum, s_grid(), t_grid(), 30), numeric_threshold(30));
}

TEST(Linspace, Nodes) {
    EXPECT_EQ(linspace(Q(0), Q(1), 3), (std::vector<Rational>{Q(0), Q(1, 2), Q(1)}));
    EXPECT_EQ(linspace(Q(2), Q(5), 1), (std::vector<Rational>{Q(2)}));
    EXPECT_TRUE(linspace(Q(0), Q(1), 0).empty());
}

// ---------------------------------------------------------------------------
// oracle

TEST(Oracle, LinearSolution) {
    const auto v = cev::solution_class(1, 0, market(2));
    const Real tol("1e-22");
    const auto rep = oracle_check(v, Q(1), Q(2), tol, 30);
    EXPECT_TRUE(rep.passed(tol));
    PrecisionScope scope(50);
    EXPECT_LT(abs(rep.integrated_value - 2), Real("1e-22"));
    EXPECT_GT(rep.step_count, 0);
}

TEST(Oracle, FirstClassDegreeTwo) {
    const auto v = cev::solution_class(1, 2, market(2));
    const auto rep = oracle_check(v, Q(1), Q(2), Real("1e-22"), 30);
    EXPECT_LE(rep.relative_error, Real("1e-20"));
}

TEST(Oracle, FourthClassAtTwoBetaFour) {
    const auto v = cev::solution_class(4, 4, market(4));
    const auto rep = oracle_check(v, Q(1), Q(2), Real("1e-22"), 30);
    EXPECT_LE(rep.relative_error, Real("1e-20"));
}

TEST(Oracle, BackwardIntegration) {
    const auto v = cev::solution_class(3, -2, market(-2));
    const auto rep = oracle_check(Candidate::from(v), Q(2), Q(1), Real("1e-22"), 30);
    EXPECT_LE(rep.relative_error, Real("1e-20"));
}

TEST(Oracle, PowerSolutions) {
    const auto p = market(0);
    const Rational lambda = Q(-1, 40); // exponents 1/2 and -3/2
    for (int root : {+1, -1}) {
        const auto v = cev::beta_zero_solution(p, lambda, root);
        const auto rep = oracle_check(v, Q(1), Q(2), Real("1e-22"), 30);
        PrecisionScope scope(50);
        const Real expect = pow(Real(2), to_real(root > 0 ? Q(1, 2) : Q(-3, 2)));
        EXPECT_LE(abs(rep.integrated_value - expect) / expect, Real("1e-22"));
        EXPECT_LE(rep.relative_error, Real("1e-22"));
    }
}

TEST(Oracle, DetectsWrongLambda) {
    auto c = Candidate::from(cev::solution_class(1, 3, market(3)));
    c.lambda += Q(1, 100);
    const auto rep = oracle_check(c, Q(1), Q(2), Real("1e-22"), 30);
    EXPECT_GT(rep.relative_error, Real("1e-8"));
}

TEST(Oracle, StepSizeUnderflowNearTheOrigin) {
    // solutions grow like exp(S^-2) towards S = 0; the step size collapses
    PrecisionScope scope(30);
    EXPECT_THROW(integrate_cev_ode(market(2), Q(0), Real(1), Real("0.001"), Real(1), Real(0), Real("1e-20"), 5),
                 StepSizeUnderflow);
}

TEST(Oracle, DomainErrors) {
    PrecisionScope scope(30);
    EXPECT_THROW(integrate_cev_ode(market(2), Q(0), Real(0), Real(1), Real(1), Real(0), Real("1e-20"), 30), DomainError);
    EXPECT_THROW(ode_integrate_oracle(market(2), Q(0), Q(1), Q(1), Real(1), Real(0), Real("1e-22")), DomainError);
}

// ---------------------------------------------------------------------------
// mutations

TEST(Mutation, SlotCounts) {
    const auto s10 = Candidate::from(cev::solution_class(1, 0, market(2)));
    EXPECT_EQ(mutation_slots(s10), 1u);
    const auto s12 = Candidate::from(cev::solution_class(1, 2, market(2)));
    EXPECT_EQ(mutation_slots(s12), 3u);
    const auto s32 = Candidate::from(cev::solution_class(3, 2, market(2)));
    EXPECT_EQ(mutation_slots(s32), 4u);
    EXPECT_EQ(mutate(s12, 4).description, mutate(s12, 1).description);
}

TEST(Mutation, EverySlotBreaksEverySolution) {
    for (const auto& v : catalogue()) {
        const Candidate c = Candidate::from(v);
        for (std::size_t k = 0; k < mutation_slots(c); ++k) {
            const auto mut = mutate(c, k);
            EXPECT_FALSE(exact_pde_residual(mut.candidate).is_zero) << mut.candidate.label;
        }
    }
}

TEST(Mutation, ExponentialCoefficient) {
    const Candidate c = Candidate::from(cev::solution_class(4, 0, market(5)));
    const auto mut = mutate(c, mutation_slots(c) - 1);
    EXPECT_EQ(mut.candidate.spatial.exp_coeff(), c.spatial.exp_coeff() + 1);
    EXPECT_NE(mut.description.find("exponential"), std::string::npos);
    EXPECT_FALSE(exact_pde_residual(mut.candidate).is_zero);
}
