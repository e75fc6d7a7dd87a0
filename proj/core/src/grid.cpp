#include "membranes/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "membranes/errors.hpp"

namespace membranes {

Grid::Grid(int dim, std::size_t n_per_axis) : dim_(dim), n_(n_per_axis) {
    if (dim != 1 && dim != 2) {
        throw InvalidResolution("grid dimension must be 1 or 2, got " + std::to_string(dim));
    }
    if (n_per_axis < 3) {
        throw InvalidResolution("grid needs at least 3 nodes per axis, got " +
                                std::to_string(n_per_axis));
    }
    size_ = dim == 1 ? n_ : n_ * n_;
    h_ = 1.0 / static_cast<double>(n_ - 1);
    boundary_.assign(size_, 0);
    for (std::size_t k = 0; k < size_; ++k) {
        auto [i, j] = axis_indices(k);
        bool on_edge = i == 0 || i == n_ - 1;
        if (dim_ == 2) on_edge = on_edge || j == 0 || j == n_ - 1;
        boundary_[k] = on_edge ? 1 : 0;
        (on_edge ? boundary_nodes_ : interior_nodes_).push_back(k);
    }
}

double Grid::coordinate(std::size_t node, int axis) const noexcept {
    auto idx = axis_indices(node);
    if (axis >= dim_) return 0.0;
    return static_cast<double>(idx[static_cast<std::size_t>(axis)]) / static_cast<double>(n_ - 1);
}

std::array<double, 2> Grid::point(std::size_t node) const noexcept {
    return {coordinate(node, 0), coordinate(node, 1)};
}

double Grid::node_volume(std::size_t node) const noexcept {
    auto weight = [this](std::size_t i) { return (i == 0 || i == n_ - 1) ? 0.5 * h_ : h_; };
    auto [i, j] = axis_indices(node);
    return dim_ == 1 ? weight(i) : weight(i) * weight(j);
}

GridPtr build_grid(int dim, std::size_t n_per_axis) {
    return std::make_shared<const Grid>(dim, n_per_axis);
}

ScalarField::ScalarField(GridPtr grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
    if (values_.size() != grid_->size()) {
        throw GridMismatch("field has " + std::to_string(values_.size()) +
                           " values but the grid has " + std::to_string(grid_->size()) +
                           " nodes");
    }
}

ScalarField::ScalarField(GridPtr grid, double fill)
    : grid_(std::move(grid)), values_(grid_->size(), fill) {}

bool ScalarField::operator==(const ScalarField& other) const noexcept {
    return same_grid(other) && std::equal(values_.begin(), values_.end(), other.values_.begin());
}

ScalarField ScalarField::operator-() const {
    ScalarField out = *this;
    for (double& v : out.values_) v = -v;
    return out;
}

void require_same_grid(const ScalarField& a, const ScalarField& b, const char* context) {
    if (!a.same_grid(b)) {
        throw GridMismatch(std::string(context) + ": fields live on different grids");
    }
}

double sup_distance(const ScalarField& a, const ScalarField& b) {
    require_same_grid(a, b, "sup_distance");
    double worst = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) worst = std::max(worst, std::abs(a[k] - b[k]));
    return worst;
}

ScalarField absent_obstacle(const GridPtr& grid, bool below) {
    return ScalarField(grid, below ? -kAbsentObstacle : kAbsentObstacle);
}

}  // namespace membranes
