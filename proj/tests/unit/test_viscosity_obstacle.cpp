#include <gtest/gtest.h>

#include <array>
#include <random>

#include "membranes/errors.hpp"
#include "membranes/viscosity_obstacle.hpp"
#include "test_support.hpp"

namespace membranes {
namespace {

using testing::constant;
using testing::expr;

ObstacleProblem visc_problem(double alpha, double beta, ScalarField h, Side side,
                             ScalarField obstacle, ScalarField boundary) {
    return ObstacleProblem{NormalizedPLaplacian(alpha, beta, std::move(h)), side, std::move(obstacle),
                           std::move(boundary)};
}

TEST(LocalSolve, DiscreteMeanValue) {
    std::array<double, 2> nb{0.3, 1.1};
    EXPECT_DOUBLE_EQ(local_solve(nb, nb, 0.0, 0.1, 0.0, 1.0), 0.7);
    EXPECT_DOUBLE_EQ(local_solve(nb, nb, 0.0, 0.1, 1.0, 0.0), 0.7);
    EXPECT_DOUBLE_EQ(local_solve(nb, nb, 0.0, 0.1, 0.4, 0.6), 0.7);
}

TEST(LocalSolve, SourceShift) {
    std::array<double, 2> nb{0.3, 1.1};
    const double h = 0.01;
    EXPECT_NEAR(local_solve(nb, nb, 10.0, h, 0.0, 1.0), 0.7 - 5.0 * h * h, 1e-15);
}

TEST(LocalSolve, ZeroesTheResidual) {
    std::mt19937_64 rng(testing::kSeed);
    for (int dim : {1, 2}) {
        auto g = build_grid(dim, 9);
        for (int trial = 0; trial < 10; ++trial) {
            ScalarField w = testing::noise_field(g, rng);
            NormalizedPLaplacian spec(0.1 * trial, 1.0 - 0.05 * trial, testing::noise_field(g, rng, 20.0));
            std::size_t node = g->interior_nodes()[trial % g->interior_nodes().size()];
            w[node] = local_solve(w, node, spec);
            EXPECT_NEAR(residual_viscosity(w, spec)[node], 0.0, 1e-9);
        }
    }
}

TEST(SolveVisc, FreeLaplacianReproducesDemoProfile) {
    auto g = build_grid(1, 201);
    auto P = visc_problem(0.0, 1.0, constant(g, 10.0), Side::Below, absent_obstacle(g, true), constant(g, 1.0));
    SolveReport r = solve_visc_obstacle(P, {});
    ASSERT_TRUE(r.converged);
    EXPECT_LT(sup_distance(r.solution, sample(g, expr("-5*x*(1-x)+1"))), 1e-8);
}

TEST(SolveVisc, InfinityHarmonicLinear) {
    auto g = build_grid(1, 201);
    auto P = visc_problem(1.0, 0.0, constant(g, 0.0), Side::Below, absent_obstacle(g, true), sample(g, expr("x")));
    SolveReport r = solve_visc_obstacle(P, {});
    ASSERT_TRUE(r.converged);
    EXPECT_LT(sup_distance(r.solution, sample(g, expr("x"))), 1e-8);
}

TEST(SolveVisc, AboveSideContactAtCenter) {
    auto g = build_grid(1, 201);
    auto P = visc_problem(0.0, 1.0, constant(g, -2.0), Side::Above, sample(g, expr("-5*x*(1-x)+1")),
                          constant(g, 0.0));
    SolveReport r = solve_visc_obstacle(P, {});
    ASSERT_TRUE(r.converged);
    EXPECT_NEAR(r.solution[100], -0.25, 1e-6);
    for (std::size_t k = 0; k < g->size(); ++k) EXPECT_LE(r.solution[k], P.obstacle[k]);
    EXPECT_FALSE(r.contact_set.empty());
}

TEST(SolveVisc, Errors) {
    auto g = build_grid(1, 11);
    auto bad = visc_problem(0.0, 1.0, constant(g, 0.0), Side::Below, constant(g, 1.0), constant(g, 0.0));
    EXPECT_THROW(solve_visc_obstacle(bad, {}), InfeasibleProblem);
    ObstacleProblem var{Variational(2.0, constant(g, 0.0)), Side::Below, absent_obstacle(g, true), constant(g, 0.0)};
    EXPECT_THROW(solve_visc_obstacle(var, {}), PreconditionError);
    auto ok = visc_problem(0.0, 1.0, constant(g, 0.0), Side::Below, absent_obstacle(g, true), constant(g, 0.0));
    SchemeConfig damp;
    damp.damping = 0.0;
    EXPECT_THROW(solve_visc_obstacle(ok, damp), PreconditionError);
    damp.damping = 1.5;
    EXPECT_THROW(solve_visc_obstacle(ok, damp), PreconditionError);
}

TEST(SolveVisc, BudgetGivesNonConvergedReport) {
    auto g = build_grid(1, 201);
    auto P = visc_problem(0.0, 1.0, constant(g, 10.0), Side::Below, absent_obstacle(g, true), constant(g, 1.0));
    SchemeConfig cfg;
    cfg.max_iter = 10;
    SolveReport r = solve_visc_obstacle(P, cfg);
    EXPECT_FALSE(r.converged);
    EXPECT_EQ(r.iterations, 10u);
}

TEST(SolveVisc, DampedIterationReachesSameSolution) {
    auto g = build_grid(1, 41);
    auto P = visc_problem(0.5, 0.5, constant(g, 0.0), Side::Below, sample(g, expr("0.1 - abs(x - 0.5)")),
                          constant(g, 0.0));
    SolveReport a = solve_visc_obstacle(P, {});
    SchemeConfig cfg;
    cfg.damping = 0.6;
    SolveReport b = solve_visc_obstacle(P, cfg);
    ASSERT_TRUE(a.converged && b.converged);
    EXPECT_LT(sup_distance(a.solution, b.solution), 1e-9);
}

TEST(Comparison, SubBelowSuper) {
    auto g = build_grid(1, 201);
    NormalizedPLaplacian spec(0.0, 1.0, constant(g, -2.0));
    ScalarField free = sample(g, expr("x*(1-x)"));
    ComparisonReport c = comparison_check(ScalarField(g, 0.0), free, spec, 1e-9);
    EXPECT_TRUE(c.passed);
    EXPECT_TRUE(c.hypotheses_hold);
    EXPECT_EQ(c.first, SolutionClass::Subsolution);
    EXPECT_EQ(c.second, SolutionClass::Solution);
    EXPECT_FALSE(c.violates_comparison());
}

TEST(Comparison, EqualFieldsZeroMargin) {
    auto g = build_grid(1, 21);
    ScalarField w = sample(g, expr("x*(1-x)"));
    ComparisonReport c = comparison_check(w, w, NormalizedPLaplacian(0.0, 1.0, constant(g, -2.0)), 1e-9);
    EXPECT_TRUE(c.passed);
    EXPECT_EQ(c.worst_margin, 0.0);
}

TEST(Comparison, BumpIsReportedAtItsNode) {
    auto g = build_grid(1, 201);
    NormalizedPLaplacian spec(0.0, 1.0, constant(g, -2.0));
    ScalarField free = sample(g, expr("x*(1-x)"));
    ScalarField bumped = free;
    bumped[60] += 0.1;
    ComparisonReport c = comparison_check(bumped, free, spec, 1e-9);
    EXPECT_FALSE(c.passed);
    EXPECT_EQ(c.worst_node, 60u);
    EXPECT_NEAR(c.worst_margin, 0.1, 1e-15);
}

// --- properties ---

TEST(ViscosityProperties, StencilMonotoneInNeighbors) {
    std::mt19937_64 rng(testing::kSeed + 3);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int dim : {1, 2}) {
        auto g = build_grid(dim, 7);
        for (int trial = 0; trial < 50; ++trial) {
            ScalarField w = testing::noise_field(g, rng);
            NormalizedPLaplacian spec(unit(rng), unit(rng) + 1e-3, testing::noise_field(g, rng));
            ResidualField base = residual_viscosity(w, spec);
            std::size_t j = rng() % w.size();
            ScalarField up = w;
            up[j] += unit(rng);
            ResidualField moved = residual_viscosity(up, spec);
            for (std::size_t k : g->interior_nodes()) {
                if (k != j) {
                    EXPECT_LE(moved[k], base[k] + 1e-9) << "dim " << dim << " node " << k;
                }
            }
        }
    }
}

TEST(ViscosityProperties, SweepsNondecreasingFromSubsolution) {
    auto g = build_grid(1, 51);
    // h = -2 makes 0 a subsolution; the obstacle sits below it.
    auto P = visc_problem(0.5, 0.5, constant(g, -2.0), Side::Below, sample(g, expr("-0.1 - abs(x-0.5)")),
                          constant(g, 0.0));
    ScalarField w(g, 0.0);
    for (int s = 0; s < 200; ++s) {
        ScalarField next = visc_sweep(w, P);
        for (std::size_t k = 0; k < w.size(); ++k) ASSERT_GE(next[k], w[k] - 1e-12) << "sweep " << s;
        w = next;
    }
}

TEST(ViscosityProperties, LimitIsSupersolutionAndSolutionOffContact) {
    std::mt19937_64 rng(testing::kSeed + 5);
    for (int dim : {1, 2}) {
        auto g = build_grid(dim, dim == 1 ? 41 : 13);
        auto P = visc_problem(0.7, 0.3, testing::random_field(g, rng, 3.0), Side::Below,
                              sample(g, expr(dim == 1 ? "0.2 - 2*abs(x-0.5)" : "0.2 - abs(x-0.5) - abs(y-0.5)")), constant(g, 0.0));
        const double tol = 1e-10;
        SchemeConfig cfg;
        cfg.tol = tol;
        SolveReport r = solve_visc_obstacle(P, cfg);
        ASSERT_TRUE(r.converged);
        Classification c = classify(r.solution, P.spec, 1e-8);
        EXPECT_TRUE(c.kind == SolutionClass::Supersolution || c.kind == SolutionClass::Solution);
        ResidualField res = residual(r.solution, P.spec);
        std::vector<bool> contact(g->size(), false);
        for (std::size_t k : r.contact_set) contact[k] = true;
        for (std::size_t k : g->interior_nodes()) {
            if (!contact[k]) {
                EXPECT_LE(std::abs(res[k]), 1e-8);
            }
        }
    }
}

TEST(ViscosityProperties, UniqueFromDifferentStarts) {
    std::mt19937_64 rng(testing::kSeed + 9);
    auto g = build_grid(2, 13);
    auto P = visc_problem(1.0, 0.5, constant(g, 1.0), Side::Above, sample(g, expr("0.05 + x*y")),
                          constant(g, 0.0));
    const double tol = 1e-10;
    SchemeConfig a, b;
    a.tol = b.tol = tol;
    b.initial = testing::noise_field(g, rng, 2.0);
    SolveReport ra = solve_visc_obstacle(P, a);
    SolveReport rb = solve_visc_obstacle(P, b);
    ASSERT_TRUE(ra.converged && rb.converged);
    EXPECT_LE(sup_distance(ra.solution, rb.solution), 10.0 * tol);
}

}  // namespace
}  // namespace membranes
