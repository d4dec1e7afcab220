#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "blochgap/geometry.hpp"

namespace blochgap {

// Transverse profile f(x1, x2) over the grammar
//   expr   := term (('+'|'-') term)*
//   term   := factor ('*' factor)*
//   factor := atom ('^' unsigned-int)?
//   atom   := number | 'pi' | 'x1' | 'x2' | 'sin(' expr ')' | 'cos(' expr ')' | '(' expr ')'
class ProfileExpression {
public:
    enum class Kind { Number, Pi, X1, X2, Add, Sub, Mul, Pow, Sin, Cos };

    struct Node {
        Kind kind = Kind::Number;
        double value = 0.0;   // Number
        unsigned exponent = 0;  // Pow
        std::shared_ptr<const Node> lhs;  // binary operands, Pow base, function argument
        std::shared_ptr<const Node> rhs;
    };
    using NodePtr = std::shared_ptr<const Node>;

    static ProfileExpression parse(std::string_view text);
    static ProfileExpression number(double v);
    static ProfileExpression x1();
    static ProfileExpression x2();
    static ProfileExpression product(const ProfileExpression& a, const ProfileExpression& b);

    double evaluate(const Point2& x) const;
    std::string to_string() const;
    bool uses_x2() const;
    const Node& root() const { return *root_; }

    friend bool operator==(const ProfileExpression& a, const ProfileExpression& b);

private:
    explicit ProfileExpression(NodePtr root) : root_(std::move(root)) {}
    NodePtr root_;
};

}  // namespace blochgap
