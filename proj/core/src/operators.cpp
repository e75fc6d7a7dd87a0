#include "membranes/operators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "membranes/errors.hpp"

namespace membranes {

namespace {

// Energy density (1/p) |g|^p as a function of s = |g|^2, regularized for p < 2.
struct PowerLaw {
    double p;

    double shifted(double s) const noexcept {
        return p < 2.0 ? s + kGradientRegularization * kGradientRegularization : s;
    }
    double density(double s) const noexcept { return std::pow(shifted(s), 0.5 * p) / p; }
    // d density / d g = coefficient(s) * g
    double coefficient(double s) const noexcept {
        if (p == 2.0) return 1.0;
        return std::pow(shifted(s), 0.5 * (p - 2.0));
    }
    // density(s_old + delta) - density(s_old) without cancellation
    double density_change(double s_old, double delta) const noexcept {
        double a = shifted(s_old);
        double ratio = a > 0.0 ? delta / a : 0.0;
        if (a <= 0.0 || std::abs(ratio) > 0.5) {
            return density(std::max(s_old + delta, 0.0)) - density(s_old);
        }
        return std::pow(a, 0.5 * p) / p * std::expm1(0.5 * p * std::log1p(ratio));
    }
};

template <typename CellFn>
void for_each_cell(const Grid& grid, CellFn&& fn) {
    const std::size_t n = grid.n_per_axis();
    if (grid.dim() == 1) {
        for (std::size_t i = 0; i + 1 < n; ++i) fn(grid.index(i), grid.index(i + 1), grid.index(i));
    } else {
        for (std::size_t i = 0; i + 1 < n; ++i) {
            for (std::size_t j = 0; j + 1 < n; ++j) {
                fn(grid.index(i, j), grid.index(i + 1, j), grid.index(i, j + 1));
            }
        }
    }
}

double cell_volume(const Grid& grid) {
    double h = grid.spacing();
    return grid.dim() == 1 ? h : h * h;
}

void check_spec_grid(const ScalarField& w, const ScalarField& source, const char* context) {
    require_same_grid(w, source, context);
}

}  // namespace

Variational::Variational(double p, ScalarField source) : p_(p), source_(std::move(source)) {
    if (!(p > 1.0) || !std::isfinite(p)) {
        throw InvalidOperator("variational exponent must satisfy 1 < p < inf, got " +
                              std::to_string(p));
    }
}

NormalizedPLaplacian::NormalizedPLaplacian(double alpha, double beta, ScalarField source)
    : alpha_(alpha), beta_(beta), source_(std::move(source)) {
    if (!(alpha >= 0.0) || !(beta >= 0.0) || !(alpha + beta > 0.0) || !std::isfinite(alpha) ||
        !std::isfinite(beta)) {
        throw InvalidOperator("normalized p-Laplacian needs alpha, beta >= 0 and alpha + beta > 0");
    }
}

OperatorSpec OperatorTemplate::instantiate(const GridPtr& grid) const {
    ScalarField field = sample(grid, source);
    if (kind == Kind::Variational) return Variational(p, std::move(field));
    return NormalizedPLaplacian(alpha, beta, std::move(field));
}

const ScalarField& source_of(const OperatorSpec& spec) noexcept {
    return std::visit([](const auto& s) -> const ScalarField& { return s.source(); }, spec);
}

OperatorSpec with_source(const OperatorSpec& spec, ScalarField source) {
    if (const auto* v = std::get_if<Variational>(&spec)) return Variational(v->p(), std::move(source));
    const auto& nl = std::get<NormalizedPLaplacian>(spec);
    return NormalizedPLaplacian(nl.alpha(), nl.beta(), std::move(source));
}

bool is_variational(const OperatorSpec& spec) noexcept {
    return std::holds_alternative<Variational>(spec);
}

double energy(const ScalarField& w, const Variational& spec) {
    check_spec_grid(w, spec.source(), "energy");
    const Grid& grid = w.grid();
    const PowerLaw law{spec.p()};
    const double h = grid.spacing();
    const double vol = cell_volume(grid);

    double gradient_part = 0.0;
    for_each_cell(grid, [&](std::size_t c, std::size_t ex, std::size_t ey) {
        double gx = (w[ex] - w[c]) / h;
        double s = gx * gx;
        if (grid.dim() == 2) {
            double gy = (w[ey] - w[c]) / h;
            s += gy * gy;
        }
        gradient_part += law.density(s) * vol;
    });

    double source_part = 0.0;
    for (std::size_t k = 0; k < w.size(); ++k) {
        source_part += spec.source()[k] * w[k] * grid.node_volume(k);
    }
    return gradient_part + source_part;
}

double energy_difference(const ScalarField& w, const ScalarField& step, const Variational& spec) {
    check_spec_grid(w, spec.source(), "energy_difference");
    require_same_grid(w, step, "energy_difference");
    const Grid& grid = w.grid();
    const PowerLaw law{spec.p()};
    const double h = grid.spacing();
    const double vol = cell_volume(grid);

    double change = 0.0;
    for_each_cell(grid, [&](std::size_t c, std::size_t ex, std::size_t ey) {
        double gx = (w[ex] - w[c]) / h;
        double dx = (step[ex] - step[c]) / h;
        double s = gx * gx;
        double delta = dx * (2.0 * gx + dx);
        if (grid.dim() == 2) {
            double gy = (w[ey] - w[c]) / h;
            double dy = (step[ey] - step[c]) / h;
            s += gy * gy;
            delta += dy * (2.0 * gy + dy);
        }
        change += law.density_change(s, delta) * vol;
    });
    for (std::size_t k = 0; k < w.size(); ++k) {
        change += spec.source()[k] * step[k] * grid.node_volume(k);
    }
    return change;
}

ScalarField energy_gradient(const ScalarField& w, const Variational& spec) {
    check_spec_grid(w, spec.source(), "energy_gradient");
    const Grid& grid = w.grid();
    const PowerLaw law{spec.p()};
    const double h = grid.spacing();
    const double vol = cell_volume(grid);

    ScalarField grad(w.grid_ptr(), 0.0);
    for_each_cell(grid, [&](std::size_t c, std::size_t ex, std::size_t ey) {
        double gx = (w[ex] - w[c]) / h;
        if (grid.dim() == 1) {
            double flux = law.coefficient(gx * gx) * gx * vol / h;
            grad[c] -= flux;
            grad[ex] += flux;
        } else {
            double gy = (w[ey] - w[c]) / h;
            double coef = law.coefficient(gx * gx + gy * gy) * vol / h;
            grad[c] -= coef * (gx + gy);
            grad[ex] += coef * gx;
            grad[ey] += coef * gy;
        }
    });
    for (std::size_t k = 0; k < w.size(); ++k) {
        if (grid.is_boundary(k)) {
            grad[k] = 0.0;
        } else {
            grad[k] += spec.source()[k] * grid.node_volume(k);
        }
    }
    return grad;
}

ResidualField residual_variational(const ScalarField& w, const Variational& spec) {
    ScalarField r = energy_gradient(w, spec);
    const Grid& grid = w.grid();
    for (std::size_t k : grid.interior_nodes()) r[k] /= grid.node_volume(k);
    return r;
}

Neighborhood neighborhood(const ScalarField& w, std::size_t node) {
    const Grid& grid = w.grid();
    Neighborhood nb;
    auto [i, j] = grid.axis_indices(node);
    if (grid.dim() == 1) {
        nb.axis = {w[node - 1], w[node + 1], 0.0, 0.0};
        nb.axis_count = 2;
        nb.stencil[0] = nb.axis[0];
        nb.stencil[1] = nb.axis[1];
        nb.stencil_count = 2;
        return nb;
    }
    nb.axis = {w[grid.index(i - 1, j)], w[grid.index(i + 1, j)], w[grid.index(i, j - 1)],
               w[grid.index(i, j + 1)]};
    nb.axis_count = 4;
    nb.stencil = {nb.axis[0],
                  nb.axis[1],
                  nb.axis[2],
                  nb.axis[3],
                  w[grid.index(i - 1, j - 1)],
                  w[grid.index(i - 1, j + 1)],
                  w[grid.index(i + 1, j - 1)],
                  w[grid.index(i + 1, j + 1)]};
    nb.stencil_count = 8;
    return nb;
}

ResidualField residual_viscosity(const ScalarField& w, const NormalizedPLaplacian& spec) {
    check_spec_grid(w, spec.source(), "residual_viscosity");
    const Grid& grid = w.grid();
    const double h2 = grid.spacing() * grid.spacing();
    ScalarField r(w.grid_ptr(), 0.0);
    for (std::size_t k : grid.interior_nodes()) {
        Neighborhood nb = neighborhood(w, k);
        double sum = 0.0;
        for (double v : nb.axis_values()) sum += v;
        auto [lo, hi] = std::minmax_element(nb.stencil_values().begin(), nb.stencil_values().end());
        double laplacian = (sum - static_cast<double>(nb.axis_count) * w[k]) / h2;
        double infinity_laplacian = (*hi + *lo - 2.0 * w[k]) / h2;
        r[k] = -spec.beta() * laplacian - spec.alpha() * infinity_laplacian + spec.source()[k];
    }
    return r;
}

ResidualField residual(const ScalarField& w, const OperatorSpec& spec) {
    if (const auto* v = std::get_if<Variational>(&spec)) return residual_variational(w, *v);
    return residual_viscosity(w, std::get<NormalizedPLaplacian>(spec));
}

std::string_view to_string(SolutionClass c) noexcept {
    switch (c) {
        case SolutionClass::Solution: return "solution";
        case SolutionClass::Supersolution: return "supersolution";
        case SolutionClass::Subsolution: return "subsolution";
        case SolutionClass::Neither: return "neither";
    }
    return "neither";
}

Classification classify(const ScalarField& w, const OperatorSpec& spec, double tol) {
    if (!(tol >= 0.0)) throw PreconditionError("classify: tolerance must be nonnegative");
    ResidualField r = residual(w, spec);
    Classification out;
    out.min_residual = std::numeric_limits<double>::infinity();
    out.max_residual = -std::numeric_limits<double>::infinity();
    for (std::size_t k : w.grid().interior_nodes()) {
        if (r[k] < out.min_residual) {
            out.min_residual = r[k];
            out.min_node = k;
        }
        if (r[k] > out.max_residual) {
            out.max_residual = r[k];
            out.max_node = k;
        }
    }
    bool super = out.min_residual >= -tol;
    bool sub = out.max_residual <= tol;
    if (super && sub) out.kind = SolutionClass::Solution;
    else if (super) out.kind = SolutionClass::Supersolution;
    else if (sub) out.kind = SolutionClass::Subsolution;
    else out.kind = SolutionClass::Neither;
    return out;
}

}  // namespace membranes
