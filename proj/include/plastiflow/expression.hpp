#pragma once

#include <memory>
#include <string>

namespace plastiflow {

/**
 * Arithmetic expression in x and y, parsed once and evaluated many times.
 *
 * Grammar: + - * / ^ (right-associative), unary minus, parentheses, numeric
 * literals, constants pi and e, and the functions sin cos tan exp log sqrt
 * abs sinh cosh tanh min max pow. Throws ConfigError on malformed input.
 */
class Expression {
public:
    explicit Expression(const std::string& text);
    ~Expression();
    Expression(Expression&&) noexcept;
    Expression& operator=(Expression&&) noexcept;

    double operator()(double x, double y = 0.0) const;
    const std::string& text() const noexcept { return text_; }

    struct Node;

private:
    std::string text_;
    std::unique_ptr<Node> root_;
};

}  // namespace plastiflow
