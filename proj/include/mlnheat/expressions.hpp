#pragma once
// Closed-form scalar expressions for coefficients and initial data.
// Deliberately small so every admissible input has an analytic oracle:
//   expr    := term (('+'|'-') term)*
//   term    := unary (('*'|'/') unary)*
//   unary   := '-' unary | primary
//   primary := number | 'x' | 'y' | 'pi' | 'L' | fn '(' expr ')' | '(' expr ')'
//   fn      := sin | cos | exp | gauss | bump
// gauss(t) = exp(-t^2/2); bump(t) = exp(1 - 1/(1-t^2)) for |t|<1, else 0
// (a smooth compactly supported profile with bump(0) = 1). 'L' binds to the
// box length of the grid the expression is sampled on.

#include <memory>
#include <string>

namespace mlnheat {

class SmoothExpr {
public:
    static SmoothExpr parse(const std::string& text); // throws ParseError

    double eval(double x, double y, double box) const;
    const std::string& text() const { return text_; }
    bool uses_y() const { return uses_y_; }

    struct Node;

private:
    SmoothExpr(std::shared_ptr<const Node> root, std::string text, bool uses_y)
        : root_(std::move(root)), text_(std::move(text)), uses_y_(uses_y) {}
    std::shared_ptr<const Node> root_;
    std::string text_;
    bool uses_y_ = false;
};

} // namespace mlnheat
