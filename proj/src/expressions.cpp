#include "mlnheat/expressions.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <utility>
#include <vector>

#include "mlnheat/errors.hpp"

namespace mlnheat {

struct SmoothExpr::Node {
    enum class Op { constant, var_x, var_y, var_box, add, sub, mul, div, neg, sin, cos, exp, gauss, bump };
    Op op = Op::constant;
    double value = 0.0;
    std::shared_ptr<const Node> lhs, rhs;

    double eval(double x, double y, double box) const {
        switch (op) {
            case Op::constant: return value;
            case Op::var_x: return x;
            case Op::var_y: return y;
            case Op::var_box: return box;
            case Op::add: return lhs->eval(x, y, box) + rhs->eval(x, y, box);
            case Op::sub: return lhs->eval(x, y, box) - rhs->eval(x, y, box);
            case Op::mul: return lhs->eval(x, y, box) * rhs->eval(x, y, box);
            case Op::div: return lhs->eval(x, y, box) / rhs->eval(x, y, box);
            case Op::neg: return -lhs->eval(x, y, box);
            case Op::sin: return std::sin(lhs->eval(x, y, box));
            case Op::cos: return std::cos(lhs->eval(x, y, box));
            case Op::exp: return std::exp(lhs->eval(x, y, box));
            case Op::gauss: {
                const double t = lhs->eval(x, y, box);
                return std::exp(-0.5 * t * t);
            }
            case Op::bump: {
                const double t = lhs->eval(x, y, box);
                if (std::fabs(t) >= 1.0) return 0.0;
                return std::exp(1.0 - 1.0 / (1.0 - t * t));
            }
        }
        return 0.0;
    }
};

namespace {

using Node = SmoothExpr::Node;
using NodePtr = std::shared_ptr<const Node>;

NodePtr make(Node::Op op, NodePtr lhs = nullptr, NodePtr rhs = nullptr, double value = 0.0) {
    auto n = std::make_shared<Node>();
    n->op = op;
    n->value = value;
    n->lhs = std::move(lhs);
    n->rhs = std::move(rhs);
    return n;
}

class Parser {
public:
    explicit Parser(const std::string& text) : text_(text) {}

    NodePtr run() {
        NodePtr e = expr();
        skip_ws();
        if (pos_ != text_.size()) fail("unexpected trailing input");
        return e;
    }

    bool uses_y = false;

private:
    const std::string& text_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& what) const {
        throw ParseError("expression \"" + text_ + "\" at offset " + std::to_string(pos_) + ": " + what);
    }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool consume(char c) {
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    char peek() {
        skip_ws();
        return pos_ < text_.size() ? text_[pos_] : '\0';
    }

    NodePtr expr() {
        NodePtr lhs = term();
        for (;;) {
            if (consume('+')) lhs = make(Node::Op::add, lhs, term());
            else if (consume('-')) lhs = make(Node::Op::sub, lhs, term());
            else return lhs;
        }
    }

    NodePtr term() {
        NodePtr lhs = unary();
        for (;;) {
            if (consume('*')) lhs = make(Node::Op::mul, lhs, unary());
            else if (consume('/')) lhs = make(Node::Op::div, lhs, unary());
            else return lhs;
        }
    }

    NodePtr unary() {
        if (consume('-')) return make(Node::Op::neg, unary());
        return primary();
    }

    std::string identifier() {
        skip_ws();
        std::string id;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
            id += text_[pos_++];
        return id;
    }

    NodePtr primary() {
        skip_ws();
        if (pos_ >= text_.size()) fail("unexpected end of input");
        const char c = text_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            char* end = nullptr;
            const double v = std::strtod(text_.c_str() + pos_, &end);
            if (end == text_.c_str() + pos_) fail("bad number");
            pos_ = static_cast<std::size_t>(end - text_.c_str());
            return make(Node::Op::constant, nullptr, nullptr, v);
        }
        if (c == '(') {
            ++pos_;
            NodePtr e = expr();
            if (!consume(')')) fail("expected ')'");
            return e;
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            const std::string id = identifier();
            if (id == "x") return make(Node::Op::var_x);
            if (id == "y") {
                uses_y = true;
                return make(Node::Op::var_y);
            }
            if (id == "L") return make(Node::Op::var_box);
            if (id == "pi") return make(Node::Op::constant, nullptr, nullptr, std::numbers::pi);
            Node::Op fn;
            if (id == "sin") fn = Node::Op::sin;
            else if (id == "cos") fn = Node::Op::cos;
            else if (id == "exp") fn = Node::Op::exp;
            else if (id == "gauss") fn = Node::Op::gauss;
            else if (id == "bump") fn = Node::Op::bump;
            else fail("unknown identifier '" + id + "'");
            if (!consume('(')) fail("expected '(' after '" + id + "'");
            NodePtr arg = expr();
            if (!consume(')')) fail("expected ')'");
            return make(fn, arg);
        }
        fail(std::string("unexpected character '") + c + "'");
    }
};

} // namespace

SmoothExpr SmoothExpr::parse(const std::string& text) {
    Parser p(text);
    NodePtr root = p.run();
    return SmoothExpr(std::move(root), text, p.uses_y);
}

double SmoothExpr::eval(double x, double y, double box) const {
    return root_->eval(x, y, box);
}

} // namespace mlnheat
