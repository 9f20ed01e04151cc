#include "lvn/expr.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <optional>

namespace lvn::dsl {

namespace {

struct Token {
    enum class Kind { Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, Comma, End };
    Kind kind;
    double number = 0.0;
    std::string text;
    std::size_t offset = 0;
};

class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) {}

    Token next() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
        const std::size_t start = pos_;
        if (pos_ >= src_.size()) return {Token::Kind::End, 0.0, "", start};

        const char c = src_[pos_];
        switch (c) {
            case '+': ++pos_; return {Token::Kind::Plus, 0.0, "+", start};
            case '-': ++pos_; return {Token::Kind::Minus, 0.0, "-", start};
            case '*': ++pos_; return {Token::Kind::Star, 0.0, "*", start};
            case '/': ++pos_; return {Token::Kind::Slash, 0.0, "/", start};
            case '^': ++pos_; return {Token::Kind::Caret, 0.0, "^", start};
            case '(': ++pos_; return {Token::Kind::LParen, 0.0, "(", start};
            case ')': ++pos_; return {Token::Kind::RParen, 0.0, ")", start};
            case ',': ++pos_; return {Token::Kind::Comma, 0.0, ",", start};
            default: break;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) return lex_number(start);
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            while (pos_ < src_.size() &&
                   (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
                ++pos_;
            return {Token::Kind::Ident, 0.0, std::string(src_.substr(start, pos_ - start)), start};
        }
        throw ParseError(std::string("unexpected character '") + c + "'", start);
    }

private:
    Token lex_number(std::size_t start) {
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
        if (pos_ < src_.size() && src_[pos_] == '.') {
            ++pos_;
            if (pos_ >= src_.size() || !std::isdigit(static_cast<unsigned char>(src_[pos_])))
                throw ParseError("expected digit after decimal point", pos_);
            while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
        }
        if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
            std::size_t mark = pos_;
            ++pos_;
            if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) ++pos_;
            if (pos_ >= src_.size() || !std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
                pos_ = mark; // not an exponent, leave 'e...' for the ident lexer
            } else {
                while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_])))
                    ++pos_;
            }
        }
        const std::string text(src_.substr(start, pos_ - start));
        try {
            return {Token::Kind::Number, std::stod(text), text, start};
        } catch (const std::out_of_range&) {
            throw ParseError("number literal out of range: '" + text + "'", start);
        }
    }

    std::string_view src_;
    std::size_t pos_ = 0;
};

std::optional<Func> function_by_name(std::string_view name) {
    if (name == "exp") return Func::Exp;
    if (name == "log") return Func::Log;
    if (name == "sqrt") return Func::Sqrt;
    if (name == "abs") return Func::Abs;
    if (name == "pow") return Func::Pow;
    return std::nullopt;
}

const char* function_name(Func f) {
    switch (f) {
        case Func::Exp: return "exp";
        case Func::Log: return "log";
        case Func::Sqrt: return "sqrt";
        case Func::Abs: return "abs";
        case Func::Pow: return "pow";
    }
    return "?";
}

class Parser {
public:
    Parser(std::string_view src, const std::vector<std::string>& vars)
        : lexer_(src), vars_(vars) {
        advance();
    }

    ExprPtr run() {
        ExprPtr e = expression();
        expect(Token::Kind::End, "end of input");
        return e;
    }

private:
    void advance() { current_ = lexer_.next(); }

    void expect(Token::Kind kind, const std::string& what) {
        if (current_.kind != kind)
            throw ParseError("expected " + what + ", got '" +
                                 (current_.kind == Token::Kind::End ? "<end>" : current_.text) + "'",
                             current_.offset);
        if (kind != Token::Kind::End) advance();
    }

    ExprPtr expression() {
        ExprPtr lhs = term();
        while (current_.kind == Token::Kind::Plus || current_.kind == Token::Kind::Minus) {
            const BinaryOp op =
                current_.kind == Token::Kind::Plus ? BinaryOp::Add : BinaryOp::Sub;
            advance();
            lhs = binary(op, std::move(lhs), term());
        }
        return lhs;
    }

    ExprPtr term() {
        ExprPtr lhs = unary();
        while (current_.kind == Token::Kind::Star || current_.kind == Token::Kind::Slash) {
            const BinaryOp op =
                current_.kind == Token::Kind::Star ? BinaryOp::Mul : BinaryOp::Div;
            advance();
            lhs = binary(op, std::move(lhs), unary());
        }
        return lhs;
    }

    ExprPtr unary() {
        if (current_.kind == Token::Kind::Minus) {
            advance();
            return negate(unary());
        }
        return power();
    }

    ExprPtr power() {
        ExprPtr base = primary();
        if (current_.kind == Token::Kind::Caret) {
            advance();
            return binary(BinaryOp::Pow, std::move(base), unary());
        }
        return base;
    }

    ExprPtr primary() {
        switch (current_.kind) {
            case Token::Kind::Number: {
                const double v = current_.number;
                advance();
                return number(v);
            }
            case Token::Kind::LParen: {
                advance();
                ExprPtr e = expression();
                expect(Token::Kind::RParen, "')'");
                return e;
            }
            case Token::Kind::Ident: {
                const std::string name = current_.text;
                const std::size_t off = current_.offset;
                advance();
                if (current_.kind == Token::Kind::LParen) return call_args(name, off);
                if (std::find(vars_.begin(), vars_.end(), name) == vars_.end())
                    throw ParseError("unknown variable '" + name + "'", off);
                return variable(name);
            }
            default:
                throw ParseError("expected number, variable, function call or '(', got '" +
                                     (current_.kind == Token::Kind::End ? "<end>" : current_.text) +
                                     "'",
                                 current_.offset);
        }
    }

    ExprPtr call_args(const std::string& name, std::size_t off) {
        const auto func = function_by_name(name);
        if (!func) throw ParseError("unknown function '" + name + "'", off);
        expect(Token::Kind::LParen, "'('");
        std::vector<ExprPtr> args;
        args.push_back(expression());
        if (*func == Func::Pow) {
            expect(Token::Kind::Comma, "',' (pow takes two arguments)");
            args.push_back(expression());
        }
        expect(Token::Kind::RParen, "')'");
        return call(*func, std::move(args));
    }

    Lexer lexer_;
    Token current_;
    const std::vector<std::string>& vars_;
};

bool is_integer(double x) {
    return std::isfinite(x) && x == std::floor(x);
}

double apply_pow(double base, double exponent, const EvalContext& ctx) {
    if (base < 0.0 && !is_integer(exponent))
        throw EvalError("negative base raised to non-integer exponent", ctx.describe());
    if (base == 0.0 && exponent < 0.0)
        throw EvalError("zero base raised to negative exponent", ctx.describe());
    return std::pow(base, exponent);
}

int precedence(const Expr& e) {
    switch (e.kind) {
        case Expr::Kind::Binary:
            switch (e.op) {
                case BinaryOp::Add:
                case BinaryOp::Sub: return 1;
                case BinaryOp::Mul:
                case BinaryOp::Div: return 2;
                case BinaryOp::Pow: return 4;
            }
            return 0;
        case Expr::Kind::Negate: return 3;
        default: return 5;
    }
}

void print(const Expr& e, std::string& out);

void print_child(const Expr& child, int min_prec, std::string& out) {
    if (precedence(child) < min_prec) {
        out += '(';
        print(child, out);
        out += ')';
    } else {
        print(child, out);
    }
}

std::string format_number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void print(const Expr& e, std::string& out) {
    switch (e.kind) {
        case Expr::Kind::Number:
            out += format_number(e.number);
            return;
        case Expr::Kind::Variable:
            out += e.name;
            return;
        case Expr::Kind::Negate:
            out += '-';
            print_child(*e.args[0], 3, out);
            return;
        case Expr::Kind::Binary: {
            const int prec = precedence(e);
            const char* sym = nullptr;
            switch (e.op) {
                case BinaryOp::Add: sym = " + "; break;
                case BinaryOp::Sub: sym = " - "; break;
                case BinaryOp::Mul: sym = "*"; break;
                case BinaryOp::Div: sym = "/"; break;
                case BinaryOp::Pow: sym = "^"; break;
            }
            if (e.op == BinaryOp::Pow) {
                // right-associative: parenthesize a pow/unary on the left
                print_child(*e.args[0], prec + 1, out);
                out += sym;
                print_child(*e.args[1], 3, out);
            } else {
                print_child(*e.args[0], prec, out);
                out += sym;
                print_child(*e.args[1], prec + 1, out);
            }
            return;
        }
        case Expr::Kind::Call: {
            out += function_name(e.func);
            out += '(';
            print(*e.args[0], out);
            if (e.args.size() > 1) {
                out += ", ";
                print(*e.args[1], out);
            }
            out += ')';
            return;
        }
    }
}

} // namespace

EvalContext& EvalContext::bind(std::string name, long value) {
    bindings_.emplace_back(std::move(name), static_cast<double>(value));
    return *this;
}

const double* EvalContext::lookup(std::string_view name) const {
    for (const auto& [key, value] : bindings_)
        if (key == name) return &value;
    return nullptr;
}

std::string EvalContext::describe() const {
    std::string out;
    for (const auto& [key, value] : bindings_) {
        if (!out.empty()) out += ", ";
        out += key + "=" + std::to_string(static_cast<long>(value));
    }
    return out.empty() ? "no bindings" : out;
}

EvalContext EvalContext::over_n(long n) {
    EvalContext ctx;
    ctx.bind("n", n);
    return ctx;
}

EvalContext EvalContext::over_mn(long m, long n) {
    EvalContext ctx;
    ctx.bind("m", m);
    ctx.bind("n", n);
    return ctx;
}

ExprPtr parse(std::string_view source, const std::vector<std::string>& vars) {
    if (source.empty()) throw ParseError("empty expression", 0);
    return Parser(source, vars).run();
}

double eval(const Expr& e, const EvalContext& ctx) {
    switch (e.kind) {
        case Expr::Kind::Number:
            return e.number;
        case Expr::Kind::Variable: {
            const double* v = ctx.lookup(e.name);
            if (!v) throw EvalError("unbound variable '" + e.name + "'", ctx.describe());
            return *v;
        }
        case Expr::Kind::Negate:
            return -eval(*e.args[0], ctx);
        case Expr::Kind::Binary: {
            const double lhs = eval(*e.args[0], ctx);
            const double rhs = eval(*e.args[1], ctx);
            switch (e.op) {
                case BinaryOp::Add: return lhs + rhs;
                case BinaryOp::Sub: return lhs - rhs;
                case BinaryOp::Mul: return lhs * rhs;
                case BinaryOp::Div:
                    if (rhs == 0.0) throw EvalError("division by zero", ctx.describe());
                    return lhs / rhs;
                case BinaryOp::Pow: return apply_pow(lhs, rhs, ctx);
            }
            return 0.0;
        }
        case Expr::Kind::Call: {
            const double x = eval(*e.args[0], ctx);
            switch (e.func) {
                case Func::Exp: return std::exp(x);
                case Func::Log:
                    if (x <= 0.0) throw EvalError("log of nonpositive value", ctx.describe());
                    return std::log(x);
                case Func::Sqrt:
                    if (x < 0.0) throw EvalError("sqrt of negative value", ctx.describe());
                    return std::sqrt(x);
                case Func::Abs: return std::abs(x);
                case Func::Pow: return apply_pow(x, eval(*e.args[1], ctx), ctx);
            }
            return 0.0;
        }
    }
    return 0.0;
}

double eval(const ExprPtr& e, const EvalContext& ctx) {
    return eval(*e, ctx);
}

std::string to_string(const Expr& e) {
    std::string out;
    print(e, out);
    return out;
}

std::string to_string(const ExprPtr& e) {
    return to_string(*e);
}

bool structurally_equal(const Expr& a, const Expr& b) {
    if (a.kind != b.kind) return false;
    switch (a.kind) {
        case Expr::Kind::Number:
            return a.number == b.number;
        case Expr::Kind::Variable:
            return a.name == b.name;
        case Expr::Kind::Negate:
            return structurally_equal(*a.args[0], *b.args[0]);
        case Expr::Kind::Binary:
            return a.op == b.op && structurally_equal(*a.args[0], *b.args[0]) &&
                   structurally_equal(*a.args[1], *b.args[1]);
        case Expr::Kind::Call:
            if (a.func != b.func || a.args.size() != b.args.size()) return false;
            for (std::size_t i = 0; i < a.args.size(); ++i)
                if (!structurally_equal(*a.args[i], *b.args[i])) return false;
            return true;
    }
    return false;
}

bool structurally_equal(const ExprPtr& a, const ExprPtr& b) {
    return structurally_equal(*a, *b);
}

ExprPtr number(double v) {
    auto e = std::make_shared<Expr>();
    e->kind = Expr::Kind::Number;
    e->number = v;
    return e;
}

ExprPtr variable(std::string name) {
    auto e = std::make_shared<Expr>();
    e->kind = Expr::Kind::Variable;
    e->name = std::move(name);
    return e;
}

ExprPtr negate(ExprPtr inner) {
    auto e = std::make_shared<Expr>();
    e->kind = Expr::Kind::Negate;
    e->args.push_back(std::move(inner));
    return e;
}

ExprPtr binary(BinaryOp op, ExprPtr lhs, ExprPtr rhs) {
    auto e = std::make_shared<Expr>();
    e->kind = Expr::Kind::Binary;
    e->op = op;
    e->args.push_back(std::move(lhs));
    e->args.push_back(std::move(rhs));
    return e;
}

ExprPtr call(Func f, std::vector<ExprPtr> args) {
    auto e = std::make_shared<Expr>();
    e->kind = Expr::Kind::Call;
    e->func = f;
    e->args = std::move(args);
    return e;
}

} // namespace lvn::dsl
