#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string_view>
#include <variant>

#include "membranes/expression.hpp"
#include "membranes/grid.hpp"

namespace membranes {

/// Regularization of |grad w|^(p-2) for p < 2: (|grad w|^2 + eps^2)^((p-2)/2).
inline constexpr double kGradientRegularization = 1e-8;

/// L w = -div(|grad w|^(p-2) grad w) + source, the Euler-Lagrange operator of
///   E(w) = (1/p) int |grad w|^p + int source * w.
class Variational {
public:
    /// Throws InvalidOperator unless p > 1 and finite.
    Variational(double p, ScalarField source);

    double p() const noexcept { return p_; }
    const ScalarField& source() const noexcept { return source_; }

private:
    double p_;
    ScalarField source_;
};

/// L w = -beta * Laplacian(w) - alpha * normalized_infinity_Laplacian(w) + source.
class NormalizedPLaplacian {
public:
    /// Throws InvalidOperator unless alpha, beta >= 0 and alpha + beta > 0.
    NormalizedPLaplacian(double alpha, double beta, ScalarField source);

    double alpha() const noexcept { return alpha_; }
    double beta() const noexcept { return beta_; }
    const ScalarField& source() const noexcept { return source_; }

private:
    double alpha_;
    double beta_;
    ScalarField source_;
};

using OperatorSpec = std::variant<Variational, NormalizedPLaplacian>;

/// Grid-independent description of an operator; the source is an expression
/// sampled on whatever grid the operator is instantiated on.
struct OperatorTemplate {
    enum class Kind { Variational, Normalized };
    Kind kind = Kind::Variational;
    double p = 2.0;
    double alpha = 0.0;
    double beta = 1.0;
    Expression source;

    OperatorSpec instantiate(const GridPtr& grid) const;
};

const ScalarField& source_of(const OperatorSpec& spec) noexcept;
/// Same operator with the source replaced.
OperatorSpec with_source(const OperatorSpec& spec, ScalarField source);
bool is_variational(const OperatorSpec& spec) noexcept;

/// Operator residual at interior nodes; boundary entries are 0.
/// Nonnegative everywhere means discrete supersolution (L w >= 0).
using ResidualField = ScalarField;

/// Discrete energy: forward-difference cell gradients (per interval in 1D,
/// per square cell using the two forward differences in 2D) and trapezoid
/// node weights for the source term.
double energy(const ScalarField& w, const Variational& spec);

/// E(w + step) - E(w), evaluated cell by cell so that tiny steps keep full
/// relative precision instead of cancelling against |E|.
double energy_difference(const ScalarField& w, const ScalarField& step, const Variational& spec);

/// Partial derivatives of energy() with respect to interior node values; 0 on the boundary.
ScalarField energy_gradient(const ScalarField& w, const Variational& spec);

/// energy_gradient divided by the node weight: the discrete -Delta_p w + source.
ResidualField residual_variational(const ScalarField& w, const Variational& spec);

/// -beta * Delta_h w - alpha * DeltaInf_h w + source, where Delta_h is the
/// 3/5-point Laplacian and DeltaInf_h w = (max + min - 2 w_i) / h^2 over the
/// neighbor stencil (two neighbors in 1D; the eight axis and diagonal
/// neighbors in 2D).
ResidualField residual_viscosity(const ScalarField& w, const NormalizedPLaplacian& spec);

ResidualField residual(const ScalarField& w, const OperatorSpec& spec);

/// Neighbor values of an interior node.
struct Neighborhood {
    std::array<double, 4> axis{};     // 2 * dim values used by the Laplacian
    std::array<double, 8> stencil{};  // values scanned by the min-max infinity Laplacian
    std::size_t axis_count = 0;
    std::size_t stencil_count = 0;

    std::span<const double> axis_values() const noexcept { return {axis.data(), axis_count}; }
    std::span<const double> stencil_values() const noexcept {
        return {stencil.data(), stencil_count};
    }
};

Neighborhood neighborhood(const ScalarField& w, std::size_t node);

enum class SolutionClass { Solution, Supersolution, Subsolution, Neither };

std::string_view to_string(SolutionClass c) noexcept;

struct Classification {
    SolutionClass kind = SolutionClass::Neither;
    double min_residual = 0.0;
    std::size_t min_node = 0;
    double max_residual = 0.0;
    std::size_t max_node = 0;
};

/// Solution if max |residual| <= tol, else Supersolution if min residual >= -tol,
/// else Subsolution if max residual <= tol, else Neither. Interior nodes only.
Classification classify(const ScalarField& w, const OperatorSpec& spec, double tol);

}  // namespace membranes
