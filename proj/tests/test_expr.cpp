#include <doctest.h>

#include <cmath>
#include <random>

#include "lvn/expr.hpp"

using namespace lvn;
using namespace lvn::dsl;

namespace {

double eval_n(const std::string& src, long n) {
    return eval(parse(src, {"n"}), EvalContext::over_n(n));
}

double eval_mn(const std::string& src, long m, long n) {
    return eval(parse(src, {"m", "n"}), EvalContext::over_mn(m, n));
}

// depth-bounded random AST over {m, n}; numbers stay positive so printed
// literals survive the round trip unchanged
ExprPtr random_ast(std::mt19937_64& rng, int depth) {
    std::uniform_int_distribution<int> pick(0, depth <= 0 ? 1 : 7);
    std::uniform_real_distribution<double> num(0.1, 9.9);
    switch (pick(rng)) {
        case 0: return number(num(rng));
        case 1: return variable(pick(rng) % 2 == 0 ? "m" : "n");
        case 2: return negate(random_ast(rng, depth - 1));
        case 3:
            return binary(static_cast<BinaryOp>(pick(rng) % 4), random_ast(rng, depth - 1),
                          random_ast(rng, depth - 1));
        case 4: return binary(BinaryOp::Pow, random_ast(rng, depth - 1), number(pick(rng) % 3));
        case 5: return call(Func::Abs, {random_ast(rng, depth - 1)});
        case 6: return call(Func::Exp, {negate(call(Func::Abs, {random_ast(rng, depth - 1)}))});
        default:
            return call(Func::Pow, {call(Func::Abs, {random_ast(rng, depth - 1)}), number(2.0)});
    }
}

} // namespace

TEST_CASE("parse produces the expected AST shapes") {
    const ExprPtr var = parse("n", {"n"});
    CHECK(var->kind == Expr::Kind::Variable);
    CHECK(var->name == "n");

    const ExprPtr div = parse("1/(m*n)", {"m", "n"});
    REQUIRE(div->kind == Expr::Kind::Binary);
    CHECK(div->op == BinaryOp::Div);
    CHECK(div->args[0]->kind == Expr::Kind::Number);
    CHECK(div->args[1]->kind == Expr::Kind::Binary);
    CHECK(div->args[1]->op == BinaryOp::Mul);

    const ExprPtr call_node = parse("exp(-0.5*(m+n))", {"m", "n"});
    REQUIRE(call_node->kind == Expr::Kind::Call);
    CHECK(call_node->func == Func::Exp);
    CHECK(call_node->args.size() == 1);
}

TEST_CASE("precedence and associativity") {
    CHECK(eval_n("2^3^2", 1) == 512.0);     // right-associative power
    CHECK(eval_n("-2^2", 1) == -4.0);       // power binds tighter than unary minus
    CHECK(eval_n("2+3*4", 1) == 14.0);
    CHECK(eval_n("2*3+4", 1) == 10.0);
    CHECK(eval_n("6/3/2", 1) == 1.0);       // left-associative division
    CHECK(eval_n("2-3-4", 1) == -5.0);
    CHECK(eval_n("2^-1", 1) == 0.5);
    CHECK(eval_n("-n^2", 3) == -9.0);
    CHECK(eval_n("(2+3)*4", 1) == 20.0);
}

TEST_CASE("evaluation examples") {
    CHECK(eval_n("n", 7) == 7.0);
    CHECK(eval_mn("1/(m*n)", 2, 4) == 0.125);
    CHECK(eval_n("n^2 - n", 3) == 6.0);
    CHECK(eval_n("sqrt(n)", 9) == 3.0);
    CHECK(eval_n("abs(-n)", 5) == 5.0);
    CHECK(eval_n("log(n)", 1) == 0.0);
    CHECK(eval_n("pow(n, 3)", 2) == 8.0);
    CHECK(eval_n("1e-2 * n", 3) == doctest::Approx(0.03).epsilon(1e-15));
    CHECK(eval_n("0^0", 1) == 1.0); // Kronecker-delta convention via 0^abs(m-n)
}

TEST_CASE("lexical and parse errors carry byte offsets") {
    CHECK_THROWS_AS(parse("", {"n"}), ParseError);
    CHECK_THROWS_AS(parse("1 $ 2", {"n"}), ParseError);
    try {
        parse("1 $ 2", {"n"});
    } catch (const ParseError& e) {
        CHECK(e.offset() == 2);
    }
    CHECK_THROWS_AS(parse("1/(n", {"n"}), ParseError);
    CHECK_THROWS_AS(parse("1..2", {"n"}), ParseError);
    CHECK_THROWS_AS(parse("pow(1)", {"n"}), ParseError);
    CHECK_THROWS_AS(parse("exp(1, 2)", {"n"}), ParseError);
    CHECK_THROWS_AS(parse("n n", {"n"}), ParseError);

    // unknown variables and functions are named
    try {
        parse("k + 1", {"n"});
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("'k'") != std::string::npos);
    }
    try {
        parse("foo(1)", {"n"});
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("'foo'") != std::string::npos);
    }
}

TEST_CASE("evaluation errors carry the offending bindings") {
    CHECK_THROWS_AS(eval_mn("1/(m-n)", 3, 3), EvalError);
    try {
        eval_mn("1/(m-n)", 3, 3);
    } catch (const EvalError& e) {
        CHECK(std::string(e.what()).find("m=3") != std::string::npos);
        CHECK(std::string(e.what()).find("n=3") != std::string::npos);
    }
    CHECK_THROWS_AS(eval_n("log(n-1)", 1), EvalError);
    CHECK_THROWS_AS(eval_n("log(-n)", 2), EvalError);
    CHECK_THROWS_AS(eval_n("sqrt(1-n)", 4), EvalError);
    CHECK_THROWS_AS(eval_n("(-2)^0.5", 1), EvalError);
    CHECK_THROWS_AS(eval_n("pow(-2, 0.5)", 1), EvalError);
    CHECK_THROWS_AS(eval_n("0^-1", 1), EvalError);
    CHECK_NOTHROW(eval_n("(-2)^3", 1)); // integer exponents of negative bases are fine
}

TEST_CASE("print/parse round trip on random ASTs") {
    std::mt19937_64 rng(20240817);
    int evaluated = 0;
    for (int i = 0; i < 1000; ++i) {
        const ExprPtr ast = random_ast(rng, 4);
        const std::string text = to_string(ast);
        const ExprPtr back = parse(text, {"m", "n"});
        REQUIRE_MESSAGE(structurally_equal(ast, back), "round trip failed for: " << text);

        const auto ctx = EvalContext::over_mn(3, 5);
        double first = 0.0;
        bool ok = true;
        try {
            first = eval(ast, ctx);
        } catch (const EvalError&) {
            ok = false;
            CHECK_THROWS_AS(eval(back, ctx), EvalError);
        }
        if (ok) {
            ++evaluated;
            CHECK(eval(back, ctx) == first); // bit-exact
            CHECK(eval(ast, ctx) == first);  // no hidden state
        }
    }
    CHECK(evaluated > 800);
}

TEST_CASE("parser totality on fuzzed inputs") {
    std::mt19937_64 rng(99);
    const std::string alphabet = "0123456789.+-*/^()abcdefmnp ,eE___";
    std::uniform_int_distribution<std::size_t> pick(0, alphabet.size() - 1);
    std::uniform_int_distribution<int> len(1, 40);
    for (int i = 0; i < 500; ++i) {
        std::string soup;
        const int l = len(rng);
        for (int k = 0; k < l; ++k) soup += alphabet[pick(rng)];
        try {
            const ExprPtr e = parse(soup, {"m", "n"});
            CHECK(e != nullptr);
        } catch (const ParseError&) {
            // positioned rejection is the other acceptable outcome
        }
    }
}
