#ifndef LVN_EXPR_HPP
#define LVN_EXPR_HPP

#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "lvn/errors.hpp"

namespace lvn::dsl {

// Small arithmetic expression language for eigenvalue sequences lambda(n),
// matrix-element generators a(m,n) and vector sequences v(n).
//
//   expression ::= term { ("+" | "-") term }
//   term       ::= unary { ("*" | "/") unary }
//   unary      ::= "-" unary | power
//   power      ::= primary [ "^" unary ]          (right-associative)
//   primary    ::= number | variable | call | "(" expression ")"
//   call       ::= ("exp"|"log"|"sqrt"|"abs") "(" expression ")"
//                | "pow" "(" expression "," expression ")"
//   number     ::= digit {digit} ["." digit {digit}] [("e"|"E") ["+"|"-"] digit {digit}]
//
// "^" binds tighter than unary minus, so -n^2 parses as -(n^2).

enum class BinaryOp { Add, Sub, Mul, Div, Pow };
enum class Func { Exp, Log, Sqrt, Abs, Pow };

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
    enum class Kind { Number, Variable, Negate, Binary, Call };

    Kind kind;
    double number = 0.0;        // Kind::Number
    std::string name;           // Kind::Variable
    BinaryOp op = BinaryOp::Add;
    Func func = Func::Exp;
    std::vector<ExprPtr> args;  // Negate: 1, Binary: 2, Call: 1 or 2
};

/// Variable bindings for evaluation; indices are positive integers converted
/// to double (exact for desk-scale indices).
class EvalContext {
public:
    EvalContext() = default;
    EvalContext& bind(std::string name, long value);
    const double* lookup(std::string_view name) const;
    std::string describe() const;

    static EvalContext over_n(long n);
    static EvalContext over_mn(long m, long n);

private:
    std::vector<std::pair<std::string, double>> bindings_;
};

/// Parse `source` against the declared variable set. Throws ParseError with a
/// byte offset on lexical/syntactic failure, including references to
/// undeclared variables (named in the message).
ExprPtr parse(std::string_view source, const std::vector<std::string>& vars);

/// IEEE double evaluation. Throws EvalError on division by zero, log of a
/// nonpositive value, sqrt of a negative value, and a negative base raised
/// to a non-integer exponent; the error message carries the bindings.
double eval(const Expr& e, const EvalContext& ctx);
double eval(const ExprPtr& e, const EvalContext& ctx);

/// Pretty-print with minimal parentheses; parse(to_string(e)) is
/// structurally equal to e and evaluates identically.
std::string to_string(const Expr& e);
std::string to_string(const ExprPtr& e);

bool structurally_equal(const Expr& a, const Expr& b);
bool structurally_equal(const ExprPtr& a, const ExprPtr& b);

// Convenience node builders (used by tests and the model layer).
ExprPtr number(double v);
ExprPtr variable(std::string name);
ExprPtr negate(ExprPtr e);
ExprPtr binary(BinaryOp op, ExprPtr lhs, ExprPtr rhs);
ExprPtr call(Func f, std::vector<ExprPtr> args);

} // namespace lvn::dsl

#endif
