#include "plastiflow/expression.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <vector>

#include "plastiflow/error.hpp"

namespace plastiflow {

struct Expression::Node {
    enum class Op { Number, X, Y, Neg, Add, Sub, Mul, Div, Pow, Call } op = Op::Number;
    double value = 0.0;
    double (*fn1)(double) = nullptr;
    double (*fn2)(double, double) = nullptr;
    std::vector<std::unique_ptr<Node>> args;

    double eval(double x, double y) const
    {
        switch (op) {
        case Op::Number:
            return value;
        case Op::X:
            return x;
        case Op::Y:
            return y;
        case Op::Neg:
            return -args[0]->eval(x, y);
        case Op::Add:
            return args[0]->eval(x, y) + args[1]->eval(x, y);
        case Op::Sub:
            return args[0]->eval(x, y) - args[1]->eval(x, y);
        case Op::Mul:
            return args[0]->eval(x, y) * args[1]->eval(x, y);
        case Op::Div:
            return args[0]->eval(x, y) / args[1]->eval(x, y);
        case Op::Pow:
            return std::pow(args[0]->eval(x, y), args[1]->eval(x, y));
        case Op::Call:
            if (fn1)
                return fn1(args[0]->eval(x, y));
            return fn2(args[0]->eval(x, y), args[1]->eval(x, y));
        }
        return 0.0;
    }
};

namespace {

using Node = Expression::Node;
using NodePtr = std::unique_ptr<Node>;

NodePtr make(Node::Op op, std::vector<NodePtr> args = {})
{
    auto n = std::make_unique<Node>();
    n->op = op;
    n->args = std::move(args);
    return n;
}

NodePtr binary(Node::Op op, NodePtr a, NodePtr b)
{
    std::vector<NodePtr> args;
    args.push_back(std::move(a));
    args.push_back(std::move(b));
    return make(op, std::move(args));
}

double fmin2(double a, double b) { return std::fmin(a, b); }
double fmax2(double a, double b) { return std::fmax(a, b); }
double pow2(double a, double b) { return std::pow(a, b); }

class Parser {
public:
    explicit Parser(const std::string& s) : s_(s) {}

    NodePtr parse()
    {
        auto e = expr();
        skip();
        if (pos_ != s_.size())
            fail("unexpected '" + std::string(1, s_[pos_]) + "'");
        return e;
    }

private:
    [[noreturn]] void fail(const std::string& what) const
    {
        throw Error(ErrorKind::ConfigError,
                    "expression \"" + s_ + "\" at offset " + std::to_string(pos_) + ": " + what);
    }

    void skip()
    {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_])))
            ++pos_;
    }

    bool accept(char c)
    {
        skip();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c)
    {
        if (!accept(c))
            fail(std::string("expected '") + c + "'");
    }

    NodePtr expr()
    {
        auto lhs = term();
        for (;;) {
            if (accept('+'))
                lhs = binary(Node::Op::Add, std::move(lhs), term());
            else if (accept('-'))
                lhs = binary(Node::Op::Sub, std::move(lhs), term());
            else
                return lhs;
        }
    }

    NodePtr term()
    {
        auto lhs = unary();
        for (;;) {
            if (accept('*'))
                lhs = binary(Node::Op::Mul, std::move(lhs), unary());
            else if (accept('/'))
                lhs = binary(Node::Op::Div, std::move(lhs), unary());
            else
                return lhs;
        }
    }

    // unary minus binds looser than ^, so -x^2 = -(x^2)
    NodePtr unary()
    {
        if (accept('-')) {
            std::vector<NodePtr> a;
            a.push_back(unary());
            return make(Node::Op::Neg, std::move(a));
        }
        if (accept('+'))
            return unary();
        return power();
    }

    NodePtr power()
    {
        auto base = primary();
        if (accept('^'))
            return binary(Node::Op::Pow, std::move(base), unary());
        return base;
    }

    NodePtr primary()
    {
        skip();
        if (pos_ >= s_.size())
            fail("unexpected end of input");
        const char c = s_[pos_];
        if (accept('(')) {
            auto e = expr();
            expect(')');
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            const char* begin = s_.c_str() + pos_;
            char* end = nullptr;
            const double v = std::strtod(begin, &end);
            if (end == begin)
                fail("bad number");
            pos_ += static_cast<std::size_t>(end - begin);
            auto n = make(Node::Op::Number);
            n->value = v;
            return n;
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            const std::size_t start = pos_;
            while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
                ++pos_;
            const std::string id = s_.substr(start, pos_ - start);
            if (id == "x")
                return make(Node::Op::X);
            if (id == "y")
                return make(Node::Op::Y);
            if (id == "pi" || id == "e") {
                auto n = make(Node::Op::Number);
                n->value = id == "pi" ? std::numbers::pi : std::numbers::e;
                return n;
            }
            return call(id);
        }
        fail("unexpected '" + std::string(1, c) + "'");
    }

    NodePtr call(const std::string& id)
    {
        struct Unary {
            const char* name;
            double (*fn)(double);
        };
        static const Unary unaries[] = {
            {"sin", [](double v) { return std::sin(v); }},   {"cos", [](double v) { return std::cos(v); }},
            {"tan", [](double v) { return std::tan(v); }},   {"exp", [](double v) { return std::exp(v); }},
            {"log", [](double v) { return std::log(v); }},   {"sqrt", [](double v) { return std::sqrt(v); }},
            {"abs", [](double v) { return std::fabs(v); }},  {"sinh", [](double v) { return std::sinh(v); }},
            {"cosh", [](double v) { return std::cosh(v); }}, {"tanh", [](double v) { return std::tanh(v); }},
        };
        auto n = make(Node::Op::Call);
        for (const auto& u : unaries)
            if (id == u.name)
                n->fn1 = u.fn;
        if (id == "min")
            n->fn2 = fmin2;
        else if (id == "max")
            n->fn2 = fmax2;
        else if (id == "pow")
            n->fn2 = pow2;
        if (!n->fn1 && !n->fn2)
            fail("unknown identifier '" + id + "'");
        expect('(');
        n->args.push_back(expr());
        if (n->fn2) {
            expect(',');
            n->args.push_back(expr());
        }
        expect(')');
        return n;
    }

    const std::string& s_;
    std::size_t pos_ = 0;
};

}  // namespace

Expression::Expression(const std::string& text) : text_(text), root_(Parser(text_).parse()) {}
Expression::~Expression() = default;
Expression::Expression(Expression&&) noexcept = default;
Expression& Expression::operator=(Expression&&) noexcept = default;

double Expression::operator()(double x, double y) const
{
    return root_->eval(x, y);
}

}  // namespace plastiflow
