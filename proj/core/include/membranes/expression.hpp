#pragma once

#include <concepts>
#include <memory>
#include <string>
#include <string_view>

#include "membranes/grid.hpp"

namespace membranes {

/// Closed-form scalar function of (x, y) parsed from a tiny arithmetic grammar:
///
///   expr    := term (('+' | '-') term)*
///   term    := unary (('*' | '/') unary)*
///   unary   := ('+' | '-') unary | power
///   power   := primary ('^' unary)?          right-associative
///   primary := number | 'x' | 'y' | 'pi' | '(' expr ')'
///            | ('abs' | 'sin') '(' expr ')'
///            | ('min' | 'max') '(' expr ',' expr ')'
///
/// The Unicode minus sign U+2212 is accepted as '-'.
class Expression {
public:
    /// The constant 0.
    Expression();

    /// Throws ParseError with the character offset of the first bad token.
    static Expression parse(std::string_view text);
    static Expression constant(double value);

    double operator()(double x, double y = 0.0) const;
    const std::string& text() const noexcept { return text_; }

    struct Node;

private:
    Expression(std::shared_ptr<const Node> root, std::string text)
        : root_(std::move(root)), text_(std::move(text)) {}

    std::shared_ptr<const Node> root_;
    std::string text_;
};

/// Evaluates `expr` at every node. Throws SamplingError naming the first node
/// where the value is not finite.
ScalarField sample(const GridPtr& grid, const Expression& expr);

template <typename F>
    requires std::invocable<const F&, double, double>
ScalarField sample(const GridPtr& grid, const F& fn) {
    ScalarField field(grid, 0.0);
    for (std::size_t k = 0; k < grid->size(); ++k) {
        auto p = grid->point(k);
        field[k] = fn(p[0], p[1]);
    }
    return field;
}

}  // namespace membranes
