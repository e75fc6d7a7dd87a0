// Acceptance gate: one PASS/FAIL line per criterion, exit status = number of failures.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "membranes/iteration.hpp"
#include "membranes/variational_obstacle.hpp"
#include "membranes/verify.hpp"
#include "membranes/viscosity_obstacle.hpp"

using namespace membranes;

namespace {

constexpr std::size_t kN = 201;

struct Outcome {
    bool passed = false;
    std::string detail;
};

std::string fmt(const char* format, double a, double b = 0.0) {
    char buf[160];
    std::snprintf(buf, sizeof buf, format, a, b);
    return buf;
}

Expression E(const char* text) { return Expression::parse(text); }

ScalarField bumped_obstacle(const GridPtr& g, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> coef(-0.3, 0.3);
    std::uniform_int_distribution<int> freq(1, 4);
    double a = coef(rng), b = coef(rng), c = std::abs(coef(rng));
    int k = freq(rng);
    return sample(g, [=](double x, double) {
        return 4.0 * x * (1.0 - x) * (a * std::sin(k * std::numbers::pi * x) + b * x + c) - 0.02;
    });
}

ScalarField random_source(const GridPtr& g, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> coef(-3.0, 3.0);
    double a = coef(rng), b = coef(rng);
    return sample(g, [=](double x, double) { return a + b * std::cos(2.0 * std::numbers::pi * x); });
}

VariationalSolverOptions pg_options(double tol) {
    VariationalSolverOptions o;
    o.method = VariationalMethod::ProjectedGradient;
    o.tol = tol;
    return o;
}

Outcome golden_examples() {
    auto g = build_grid(1, kN);
    ObstacleProblem upper{Variational(2.0, ScalarField(g, 10.0)), Side::Below, absent_obstacle(g, true),
                          ScalarField(g, 1.0)};
    ObstacleProblem lower{Variational(2.0, ScalarField(g, -2.0)), Side::Above, absent_obstacle(g, false),
                          ScalarField(g, 0.0)};
    SolveReport a = solve_obstacle(upper, {});
    SolveReport b = solve_obstacle(lower, {});
    double ea = sup_distance(a.solution, sample(g, E("-5*x*(1-x)+1")));
    double eb = sup_distance(b.solution, sample(g, E("x*(1-x)")));
    bool ok = a.converged && b.converged && ea <= 1e-8 && eb <= 1e-8;
    return {ok, fmt("sup error u-hat %.2e, v-tilde %.2e (tol 1e-8)", ea, eb)};
}

Outcome nonuniqueness() {
    std::optional<DemoResult> demo;
    try {
        demo = nonuniqueness_demo(kN, 1e-6);
    } catch (const DemoFailed& e) {
        return {false, std::string("demo failed: ") + e.what()};
    }
    const DemoResult& d = *demo;
    bool ok = d.hat_residual.passes(1e-6) && d.tilde_residual.passes(1e-6) && d.separation >= 0.499;
    double worst = std::max({d.hat_residual.res_u, d.hat_residual.res_v, d.tilde_residual.res_u,
                             d.tilde_residual.res_v});
    return {ok, fmt("worst pair residual %.2e (tol 1e-6), separation %.6f (min 0.499)", worst, d.separation)};
}

Outcome monotone_convergence() {
    auto g = build_grid(1, kN);
    MembraneConfig inc{.upper = Variational(2.0, ScalarField(g, 10.0)),
                       .lower = Variational(2.0, ScalarField(g, -2.0)),
                       .boundary_f = ScalarField(g, 1.0),
                       .boundary_g = ScalarField(g, 0.0),
                       .seed = ScalarField(g, 0.0),
                       .mode = IterationMode::IncreasingFromSub};
    IterationTrace t = iterate(inc);
    std::size_t mono_violations = 0, order_violations = 0;
    for (std::size_t s = 0; s < t.steps.size(); ++s) {
        for (std::size_t k = 0; k < g->size(); ++k) {
            if (t.steps[s].u[k] - t.steps[s].v[k] < -1e-8) ++order_violations;
            if (s == 0) continue;
            if (t.steps[s].u[k] - t.steps[s - 1].u[k] < -1e-8) ++mono_violations;
            if (t.steps[s].v[k] - t.steps[s - 1].v[k] < -1e-8) ++mono_violations;
        }
    }
    double defect = std::max(t.last().res_u, t.last().res_v);
    bool inc_ok = t.converged && mono_violations == 0 && order_violations == 0 && defect <= 1e-6;

    MembraneConfig dec = inc;
    dec.mode = IterationMode::DecreasingFromSuper;
    dec.seed = sample(g, E("-5*x*(1-x)+1"));
    IterationTrace d = iterate(dec);
    double change = d.steps.size() == 2 ? std::max(d.last().sup_du, d.last().sup_dv) : INFINITY;
    bool dec_ok = d.converged && d.outer_steps() == 1 && change <= 1e-8;

    std::string detail = "increasing: " + std::to_string(t.outer_steps()) + " steps, " +
                         std::to_string(mono_violations) + " monotonicity and " +
                         std::to_string(order_violations) + " ordering violations, " +
                         fmt("final defect %.2e (tol 1e-6); ", defect) + "decreasing: " +
                         std::to_string(d.outer_steps()) + fmt(" outer step(s), sup change %.2e (tol 1e-8)", change);
    return {inc_ok && dec_ok, detail};
}

Outcome duality() {
    std::mt19937_64 rng(101);
    auto g = build_grid(1, kN);
    double worst = 0.0;
    bool ok = true;
    for (int trial = 0; trial < 10; ++trial) {
        const double p = trial % 2 == 0 ? 2.0 : 3.0;
        ObstacleProblem P{Variational(p, random_source(g, rng)), Side::Below, bumped_obstacle(g, rng),
                          ScalarField(g, 0.0)};
        ObstacleProblem D = dualize(P);
        std::optional<SolveReport> primal, dual;
        if (p == 2.0) {
            // the dual is solved natively from above by the viscosity backend (alpha = 0, beta = 1)
            primal = solve_obstacle(P, {});
            ObstacleProblem native = D;
            native.spec = NormalizedPLaplacian(0.0, 1.0, source_of(D.spec));
            dual = solve_visc_obstacle(native, SchemeConfig{});
        } else {
            // a different start for the dual makes the two solves follow different paths
            primal = solve_obstacle(P, pg_options(1e-9));
            VariationalSolverOptions o = pg_options(1e-9);
            o.initial = ScalarField(g, -0.5);
            dual = solve_obstacle(D, o);
        }
        ok = ok && primal->converged && dual->converged;
        worst = std::max(worst, sup_distance(primal->solution, -dual->solution));
    }
    ok = ok && worst <= 1e-6;
    return {ok, fmt("10 problems, worst |solve(P) + solve(dual P)| = %.2e (tol 1e-6)", worst)};
}

Outcome obstacle_monotonicity() {
    std::mt19937_64 rng(202);
    auto g = build_grid(1, kN);
    double worst = -INFINITY;
    bool ok = true;
    for (int trial = 0; trial < 10; ++trial) {
        const double p = trial < 5 ? 2.0 : 3.0;
        ScalarField phi1 = bumped_obstacle(g, rng);
        ScalarField lift = bumped_obstacle(g, rng);
        ScalarField phi2 = phi1;
        for (std::size_t k : g->interior_nodes()) phi2[k] += std::abs(lift[k]);
        ScalarField h = random_source(g, rng);
        VariationalSolverOptions o = p == 2.0 ? VariationalSolverOptions{} : pg_options(1e-10);
        SolveReport a = solve_obstacle({Variational(p, h), Side::Below, phi1, ScalarField(g, 0.0)}, o);
        SolveReport b = solve_obstacle({Variational(p, h), Side::Below, phi2, ScalarField(g, 0.0)}, o);
        ok = ok && a.converged && b.converged;
        for (std::size_t k = 0; k < g->size(); ++k) worst = std::max(worst, a.solution[k] - b.solution[k]);
    }
    ok = ok && worst <= 1e-8;
    return {ok, fmt("10 pairs, max(u1 - u2) = %.2e (tol 1e-8)", worst)};
}

Outcome cross_backend() {
    auto g1 = build_grid(1, kN);
    auto g2 = build_grid(2, 31);
    std::vector<ObstacleProblem> problems{
        {Variational(2.0, ScalarField(g1, 10.0)), Side::Below, absent_obstacle(g1, true), ScalarField(g1, 1.0)},
        {Variational(2.0, ScalarField(g1, 0.0)), Side::Below, sample(g1, E("0.1 - abs(x - 0.5)")),
         ScalarField(g1, 0.0)},
        {Variational(2.0, ScalarField(g1, -2.0)), Side::Above, sample(g1, E("-5*x*(1-x)+1")), ScalarField(g1, 0.0)},
        {Variational(2.0, sample(g1, E("5*sin(3*pi*x)"))), Side::Below, sample(g1, E("0.05*sin(2*pi*x) - 0.01")),
         sample(g1, E("0.2*x"))},
        {Variational(2.0, ScalarField(g2, 0.0)), Side::Below, sample(g2, E("0.3 - 2*((x-0.5)^2 + (y-0.5)^2)")),
         ScalarField(g2, 0.0)},
    };
    double worst = 0.0;
    bool ok = true;
    std::size_t active = 0;
    for (const ObstacleProblem& P : problems) {
        AuditReport r = audit_cross_solver(P, {});
        ok = ok && r.passed;
        worst = std::max(worst, r.worst_value);
        SolveReport s = solve_obstacle(P, {});
        if (!s.contact_set.empty()) ++active;
    }
    ok = ok && active >= 1;
    return {ok, fmt("5 problems (%.0f with active obstacle), worst sup difference %.2e (tol 1e-6)",
                    static_cast<double>(active), worst)};
}

Outcome gradient_oracle() {
    std::mt19937_64 rng(303);
    std::uniform_real_distribution<double> value(-1.0, 1.0);
    double worst = 0.0;
    for (double p : {1.5, 2.0, 3.0, 4.0}) {
        for (int trial = 0; trial < 20; ++trial) {
            auto g = build_grid(trial % 2 == 0 ? 1 : 2, trial % 2 == 0 ? 21 : 7);
            ScalarField w(g, 0.0), h(g, 0.0);
            for (std::size_t k = 0; k < w.size(); ++k) {
                w[k] = value(rng);
                h[k] = value(rng);
            }
            Variational spec(p, h);
            ScalarField grad = energy_gradient(w, spec);
            double diff = 0.0, scale = 0.0;
            const double step = 1e-6;
            for (std::size_t k : g->interior_nodes()) {
                ScalarField plus = w, minus = w;
                plus[k] += step;
                minus[k] -= step;
                double fd = (energy(plus, spec) - energy(minus, spec)) / (2.0 * step);
                diff = std::max(diff, std::abs(fd - grad[k]));
                scale = std::max(scale, std::abs(grad[k]));
            }
            worst = std::max(worst, diff / scale);
        }
    }
    return {worst < 1e-5, fmt("80 random fields, worst relative error %.2e (tol 1e-5)", worst)};
}

Outcome refinement() {
    OperatorTemplate op{OperatorTemplate::Kind::Variational, 2.0, 0.0, 1.0, E("-pi^2*sin(pi*x)")};
    std::vector<std::size_t> ns{101, 201};
    auto rows = grid_refinement_study(op, E("sin(pi*x)"), ns);
    double ratio = rows[1].ratio;
    return {ratio >= 3.5 && ratio <= 4.5,
            fmt("errors %.3e -> ", rows[0].error, 0.0) + fmt("%.3e, ratio %.4f (band [3.5, 4.5])", rows[1].error, ratio)};
}

Outcome tent_oracle() {
    auto g = build_grid(1, kN);
    ObstacleProblem P{Variational(2.0, ScalarField(g, 0.0)), Side::Below, sample(g, E("0.1 - abs(x - 0.5)")),
                      ScalarField(g, 0.0)};
    SolveReport r = solve_obstacle(P, {});
    double err = sup_distance(r.solution, sample(g, E("0.2*min(x, 1-x)")));
    bool contact_ok = r.contact_set == std::vector<std::size_t>{(kN - 1) / 2};
    return {r.converged && err <= 1e-8 && contact_ok,
            fmt("sup error %.2e (tol 1e-8), contact set size %.0f at the center", err,
                static_cast<double>(r.contact_set.size())) +
                (contact_ok ? "" : " [contact set mismatch]")};
}

}  // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
        {"golden example reproduction", golden_examples},
        {"non-uniqueness demo", nonuniqueness},
        {"monotone convergence", monotone_convergence},
        {"duality involution", duality},
        {"obstacle monotonicity", obstacle_monotonicity},
        {"cross-backend equivalence", cross_backend},
        {"gradient oracle", gradient_oracle},
        {"refinement study", refinement},
        {"tent-obstacle oracle", tent_oracle},
    };
    const auto start = std::chrono::steady_clock::now();
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome out;
        try {
            out = criteria[i].second();
        } catch (const std::exception& e) {
            out = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (!out.passed) ++failures;
        std::printf("[%s] %zu %s: %s (%.2fs)\n", out.passed ? "PASS" : "FAIL", i + 1, criteria[i].first,
                    out.detail.c_str(), secs);
    }
    const double total = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_budget = total < 60.0;
    if (!in_budget) ++failures;
    std::printf("[%s] total runtime %.2fs (budget 60s)\n", in_budget ? "PASS" : "FAIL", total);
    std::printf("%d failure(s)\n", failures);
    return failures;
}
