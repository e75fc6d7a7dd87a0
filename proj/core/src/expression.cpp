#include "membranes/expression.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "membranes/errors.hpp"

namespace membranes {

struct Expression::Node {
    enum class Kind { Constant, X, Y, Neg, Add, Sub, Mul, Div, Pow, Abs, Sin, Min, Max };
    Kind kind;
    double value = 0.0;
    std::shared_ptr<const Node> lhs;
    std::shared_ptr<const Node> rhs;

    double eval(double x, double y) const {
        switch (kind) {
            case Kind::Constant: return value;
            case Kind::X: return x;
            case Kind::Y: return y;
            case Kind::Neg: return -lhs->eval(x, y);
            case Kind::Add: return lhs->eval(x, y) + rhs->eval(x, y);
            case Kind::Sub: return lhs->eval(x, y) - rhs->eval(x, y);
            case Kind::Mul: return lhs->eval(x, y) * rhs->eval(x, y);
            case Kind::Div: return lhs->eval(x, y) / rhs->eval(x, y);
            case Kind::Pow: return std::pow(lhs->eval(x, y), rhs->eval(x, y));
            case Kind::Abs: return std::abs(lhs->eval(x, y));
            case Kind::Sin: return std::sin(lhs->eval(x, y));
            case Kind::Min: return std::min(lhs->eval(x, y), rhs->eval(x, y));
            case Kind::Max: return std::max(lhs->eval(x, y), rhs->eval(x, y));
        }
        return 0.0;
    }
};

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;
using Kind = Expression::Node::Kind;

NodePtr make(Kind kind, NodePtr lhs = nullptr, NodePtr rhs = nullptr, double value = 0.0) {
    return std::make_shared<const Expression::Node>(
        Expression::Node{kind, value, std::move(lhs), std::move(rhs)});
}

// U+2212 MINUS SIGN in UTF-8
constexpr std::string_view kUnicodeMinus = "\xE2\x88\x92";

std::string normalize(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    for (std::size_t i = 0; i < text.size();) {
        if (text.substr(i, kUnicodeMinus.size()) == kUnicodeMinus) {
            out.push_back('-');
            i += kUnicodeMinus.size();
        } else {
            out.push_back(text[i++]);
        }
    }
    return out;
}

class Parser {
public:
    explicit Parser(std::string_view src) : src_(src) {}

    NodePtr parse() {
        NodePtr root = expr();
        skip_space();
        if (pos_ != src_.size()) fail("unexpected trailing input");
        return root;
    }

private:
    [[noreturn]] void fail(const std::string& msg) const {
        throw ParseError("expression '" + std::string(src_) + "': " + msg + " at offset " +
                             std::to_string(pos_),
                         pos_);
    }

    void skip_space() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    }

    bool accept(char c) {
        skip_space();
        if (pos_ < src_.size() && src_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c) {
        if (!accept(c)) fail(std::string("expected '") + c + "'");
    }

    NodePtr expr() {
        NodePtr lhs = term();
        for (;;) {
            if (accept('+')) lhs = make(Kind::Add, lhs, term());
            else if (accept('-')) lhs = make(Kind::Sub, lhs, term());
            else return lhs;
        }
    }

    NodePtr term() {
        NodePtr lhs = unary();
        for (;;) {
            if (accept('*')) lhs = make(Kind::Mul, lhs, unary());
            else if (accept('/')) lhs = make(Kind::Div, lhs, unary());
            else return lhs;
        }
    }

    NodePtr unary() {
        if (accept('-')) return make(Kind::Neg, unary());
        if (accept('+')) return unary();
        return power();
    }

    NodePtr power() {
        NodePtr base = primary();
        if (accept('^')) return make(Kind::Pow, base, unary());
        return base;
    }

    NodePtr primary() {
        skip_space();
        if (pos_ >= src_.size()) fail("unexpected end of input");
        char c = src_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (std::isalpha(static_cast<unsigned char>(c))) return identifier();
        if (accept('(')) {
            NodePtr inner = expr();
            expect(')');
            return inner;
        }
        fail(std::string("unexpected character '") + c + "'");
    }

    NodePtr number() {
        double value = 0.0;
        auto [end, ec] = std::from_chars(src_.data() + pos_, src_.data() + src_.size(), value);
        if (ec != std::errc()) fail("malformed number");
        pos_ = static_cast<std::size_t>(end - src_.data());
        return make(Kind::Constant, nullptr, nullptr, value);
    }

    NodePtr identifier() {
        std::size_t start = pos_;
        while (pos_ < src_.size() && std::isalnum(static_cast<unsigned char>(src_[pos_]))) ++pos_;
        std::string_view name = src_.substr(start, pos_ - start);
        if (name == "x") return make(Kind::X);
        if (name == "y") return make(Kind::Y);
        if (name == "pi") return make(Kind::Constant, nullptr, nullptr, std::numbers::pi);
        if (name == "abs" || name == "sin") {
            expect('(');
            NodePtr arg = expr();
            expect(')');
            return make(name == "abs" ? Kind::Abs : Kind::Sin, arg);
        }
        if (name == "min" || name == "max") {
            expect('(');
            NodePtr a = expr();
            expect(',');
            NodePtr b = expr();
            expect(')');
            return make(name == "min" ? Kind::Min : Kind::Max, a, b);
        }
        pos_ = start;
        fail("unknown identifier '" + std::string(name) + "'");
    }

    std::string_view src_;
    std::size_t pos_ = 0;
};

}  // namespace

Expression Expression::parse(std::string_view text) {
    std::string normalized = normalize(text);
    NodePtr root = Parser(normalized).parse();
    return Expression(std::move(root), std::string(text));
}

Expression::Expression() : Expression(make(Kind::Constant), "0") {}

Expression Expression::constant(double value) {
    std::string text = std::to_string(value);
    return Expression(make(Kind::Constant, nullptr, nullptr, value), text);
}

double Expression::operator()(double x, double y) const { return root_->eval(x, y); }

ScalarField sample(const GridPtr& grid, const Expression& expr) {
    ScalarField field(grid, 0.0);
    for (std::size_t k = 0; k < grid->size(); ++k) {
        auto p = grid->point(k);
        double v = expr(p[0], p[1]);
        if (!std::isfinite(v)) {
            throw SamplingError("expression '" + expr.text() + "' is not finite at node " +
                                    std::to_string(k) + " (x=" + std::to_string(p[0]) +
                                    ", y=" + std::to_string(p[1]) + ")",
                                k);
        }
        field[k] = v;
    }
    return field;
}

}  // namespace membranes
