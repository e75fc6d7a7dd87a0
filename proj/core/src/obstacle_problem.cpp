#include "membranes/obstacle_problem.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "membranes/errors.hpp"

namespace membranes {

std::string_view to_string(Side side) noexcept { return side == Side::Below ? "below" : "above"; }

void validate(const ObstacleProblem& problem) {
    require_same_grid(problem.obstacle, problem.boundary, "obstacle problem");
    require_same_grid(problem.obstacle, source_of(problem.spec), "obstacle problem");
    const Grid& grid = problem.obstacle.grid();
    for (std::size_t k : grid.boundary_nodes()) {
        double f = problem.boundary[k];
        double phi = problem.obstacle[k];
        bool ok = problem.side == Side::Below ? f >= phi : f <= phi;
        if (!ok) {
            throw InfeasibleProblem("boundary value " + std::to_string(f) + " at node " +
                                    std::to_string(k) + " lies " +
                                    (problem.side == Side::Below ? "below" : "above") +
                                    " the obstacle value " + std::to_string(phi));
        }
    }
}

ObstacleProblem dualize(const ObstacleProblem& problem) {
    return ObstacleProblem{with_source(problem.spec, -source_of(problem.spec)),
                           problem.side == Side::Below ? Side::Above : Side::Below,
                           -problem.obstacle, -problem.boundary};
}

ScalarField complementarity_defect(const ScalarField& w, const ObstacleProblem& problem) {
    require_same_grid(w, problem.obstacle, "complementarity_defect");
    ResidualField r = residual(w, problem.spec);
    ScalarField defect(w.grid_ptr(), 0.0);
    for (std::size_t k : w.grid().interior_nodes()) {
        double gap = w[k] - problem.obstacle[k];
        defect[k] = problem.side == Side::Below ? std::min(r[k], gap) : std::max(r[k], gap);
    }
    return defect;
}

double complementarity_norm(const ScalarField& w, const ObstacleProblem& problem) {
    ScalarField defect = complementarity_defect(w, problem);
    double worst = 0.0;
    for (double d : defect.values()) worst = std::max(worst, std::abs(d));
    return worst;
}

std::vector<std::size_t> contact_set(const ScalarField& w, const ScalarField& obstacle,
                                     double gap_tol) {
    require_same_grid(w, obstacle, "contact_set");
    std::vector<std::size_t> nodes;
    for (std::size_t k : w.grid().interior_nodes()) {
        if (std::abs(w[k] - obstacle[k]) <= gap_tol) nodes.push_back(k);
    }
    return nodes;
}

namespace {

// Linear interpolation of boundary values; transfinite (Coons) patch in 2D.
ScalarField interpolate_boundary(const ScalarField& boundary) {
    const Grid& grid = boundary.grid();
    const std::size_t n = grid.n_per_axis();
    ScalarField out = boundary;
    if (grid.dim() == 1) {
        double a = boundary[0];
        double b = boundary[n - 1];
        for (std::size_t k : grid.interior_nodes()) {
            double x = grid.coordinate(k, 0);
            out[k] = (1.0 - x) * a + x * b;
        }
        return out;
    }
    auto at = [&](std::size_t i, std::size_t j) { return boundary[grid.index(i, j)]; };
    const std::size_t m = n - 1;
    for (std::size_t k : grid.interior_nodes()) {
        auto [i, j] = grid.axis_indices(k);
        double x = grid.coordinate(k, 0);
        double y = grid.coordinate(k, 1);
        double edges = (1 - x) * at(0, j) + x * at(m, j) + (1 - y) * at(i, 0) + y * at(i, m);
        double corners = (1 - x) * (1 - y) * at(0, 0) + x * (1 - y) * at(m, 0) +
                         (1 - x) * y * at(0, m) + x * y * at(m, m);
        out[k] = edges - corners;
    }
    return out;
}

}  // namespace

ScalarField make_feasible(ScalarField w, const ObstacleProblem& problem) {
    require_same_grid(w, problem.obstacle, "make_feasible");
    const Grid& grid = w.grid();
    for (std::size_t k = 0; k < w.size(); ++k) {
        if (grid.is_boundary(k)) {
            w[k] = problem.boundary[k];
        } else if (problem.side == Side::Below) {
            w[k] = std::max(w[k], problem.obstacle[k]);
        } else {
            w[k] = std::min(w[k], problem.obstacle[k]);
        }
    }
    return w;
}

ScalarField feasible_start(const ObstacleProblem& problem) {
    return make_feasible(interpolate_boundary(problem.boundary), problem);
}

}  // namespace membranes
