#pragma once

#include <array>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace membranes {

/// Uniform lattice on the unit interval (dim 1) or unit square (dim 2).
///
/// Nodes are ordered lexicographically by coordinate: in 2D the node with
/// axis indices (i, j) has flat index i * n + j and coordinates (i*h, j*h),
/// so y varies fastest.
class Grid {
public:
    /// Throws InvalidResolution if dim is not 1 or 2 or n_per_axis < 3.
    Grid(int dim, std::size_t n_per_axis);

    int dim() const noexcept { return dim_; }
    std::size_t n_per_axis() const noexcept { return n_; }
    std::size_t size() const noexcept { return size_; }
    double spacing() const noexcept { return h_; }

    bool is_boundary(std::size_t node) const noexcept { return boundary_[node] != 0; }
    std::size_t boundary_count() const noexcept { return boundary_nodes_.size(); }
    std::span<const std::size_t> boundary_nodes() const noexcept { return boundary_nodes_; }
    std::span<const std::size_t> interior_nodes() const noexcept { return interior_nodes_; }

    /// Coordinate of a node along one axis; exact i/(n-1) so refined grids share values bit-for-bit.
    double coordinate(std::size_t node, int axis) const noexcept;
    std::array<double, 2> point(std::size_t node) const noexcept;

    std::size_t index(std::size_t i, std::size_t j = 0) const noexcept {
        return dim_ == 1 ? i : i * n_ + j;
    }
    std::array<std::size_t, 2> axis_indices(std::size_t node) const noexcept {
        return dim_ == 1 ? std::array<std::size_t, 2>{node, 0}
                         : std::array<std::size_t, 2>{node / n_, node % n_};
    }

    /// Trapezoid quadrature weight of a node (product rule in 2D).
    double node_volume(std::size_t node) const noexcept;

    /// Same dimension and resolution.
    bool operator==(const Grid& other) const noexcept {
        return dim_ == other.dim_ && n_ == other.n_;
    }

private:
    int dim_;
    std::size_t n_;
    std::size_t size_;
    double h_;
    std::vector<unsigned char> boundary_;
    std::vector<std::size_t> boundary_nodes_;
    std::vector<std::size_t> interior_nodes_;
};

using GridPtr = std::shared_ptr<const Grid>;

GridPtr build_grid(int dim, std::size_t n_per_axis);

/// Extreme value standing in for an absent obstacle: -kAbsentObstacle from
/// below, +kAbsentObstacle from above. Solvers never see it as active.
inline constexpr double kAbsentObstacle = 1e9;

/// One real value per grid node.
class ScalarField {
public:
    ScalarField(GridPtr grid, std::vector<double> values);
    ScalarField(GridPtr grid, double fill);

    const Grid& grid() const noexcept { return *grid_; }
    const GridPtr& grid_ptr() const noexcept { return grid_; }

    std::size_t size() const noexcept { return values_.size(); }
    double operator[](std::size_t i) const noexcept { return values_[i]; }
    double& operator[](std::size_t i) noexcept { return values_[i]; }
    std::span<const double> values() const noexcept { return values_; }
    std::span<double> values() noexcept { return values_; }

    bool same_grid(const ScalarField& other) const noexcept { return *grid_ == *other.grid_; }

    /// Bitwise equality of grid and values.
    bool operator==(const ScalarField& other) const noexcept;

    ScalarField operator-() const;

private:
    GridPtr grid_;
    std::vector<double> values_;
};

/// Throws GridMismatch unless both fields live on equal grids.
void require_same_grid(const ScalarField& a, const ScalarField& b, const char* context);

/// max_i |a_i - b_i|.
double sup_distance(const ScalarField& a, const ScalarField& b);

/// The "no obstacle" field for a lower (below = true) or upper obstacle problem.
ScalarField absent_obstacle(const GridPtr& grid, bool below);

}  // namespace membranes
