#pragma once

// Expression language for user-supplied sources f(t, u).
//
//   expr    = term { ("+" | "-") term } ;
//   term    = unary { ("*" | "/") unary } ;
//   unary   = "-" unary | power ;
//   power   = primary [ "^" unary ] ;            (* right associative *)
//   primary = number | "t" | "u" | func "(" expr ")" | "(" expr ")" ;
//   func    = "sin" | "cos" | "exp" | "sqrt" | "abs" ;
//   number  = digits [ "." [ digits ] ] [ ("e" | "E") [ "+" | "-" ] digits ]
//           | "." digits [ exponent ] ;
//
// Whitespace between tokens is ignored. There is no implicit multiplication.

#include <array>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "thermistor/error.hpp"

namespace thermistor {

enum class NodeKind { Number, VarT, VarU, Negate, Add, Sub, Mul, Div, Pow, Call };
enum class Function { Sin, Cos, Exp, Sqrt, Abs };

struct ExprNode {
    NodeKind kind;
    double value = 0.0;
    Function fn = Function::Sin;
    int lhs = -1;
    int rhs = -1;
    std::size_t begin = 0;  // source span [begin, end)
    std::size_t end = 0;
};

/// Immutable parse tree; cheap to copy and safe to share between threads.
class Expr {
public:
    [[nodiscard]] double evaluate(double t, double u) const { return eval(root_, t, u); }
    double operator()(double t, double u) const { return evaluate(t, u); }

    [[nodiscard]] const std::string& source() const noexcept { return *source_; }
    [[nodiscard]] const std::vector<ExprNode>& nodes() const noexcept { return nodes_; }
    [[nodiscard]] int root() const noexcept { return root_; }

    [[nodiscard]] bool uses_t() const { return uses(NodeKind::VarT); }
    [[nodiscard]] bool uses_u() const { return uses(NodeKind::VarU); }

    /// Fully parenthesized rendering that reparses to the same tree.
    [[nodiscard]] std::string to_string() const { return render(root_); }

private:
    friend class ExprParser;

    [[nodiscard]] bool uses(NodeKind k) const {
        for (const auto& n : nodes_)
            if (n.kind == k) return true;
        return false;
    }

    [[noreturn]] void fail(const ExprNode& n, const std::string& what) const {
        throw EvalError(what, n.begin, n.end, source_->substr(n.begin, n.end - n.begin));
    }

    double checked(const ExprNode& n, double v) const {
        if (!std::isfinite(v)) fail(n, "non-finite result");
        return v;
    }

    double eval(int idx, double t, double u) const {
        const ExprNode& n = nodes_[static_cast<std::size_t>(idx)];
        switch (n.kind) {
            case NodeKind::Number: return n.value;
            case NodeKind::VarT: return t;
            case NodeKind::VarU: return u;
            case NodeKind::Negate: return -eval(n.lhs, t, u);
            case NodeKind::Add: return checked(n, eval(n.lhs, t, u) + eval(n.rhs, t, u));
            case NodeKind::Sub: return checked(n, eval(n.lhs, t, u) - eval(n.rhs, t, u));
            case NodeKind::Mul: return checked(n, eval(n.lhs, t, u) * eval(n.rhs, t, u));
            case NodeKind::Div: {
                const double num = eval(n.lhs, t, u);
                const double den = eval(n.rhs, t, u);
                if (den == 0.0) fail(n, "division by zero");
                return checked(n, num / den);
            }
            case NodeKind::Pow: return checked(n, std::pow(eval(n.lhs, t, u), eval(n.rhs, t, u)));
            case NodeKind::Call: {
                const double x = eval(n.lhs, t, u);
                switch (n.fn) {
                    case Function::Sin: return std::sin(x);
                    case Function::Cos: return std::cos(x);
                    case Function::Exp: return checked(n, std::exp(x));
                    case Function::Sqrt:
                        if (x < 0.0) fail(n, "sqrt of negative argument");
                        return std::sqrt(x);
                    case Function::Abs: return std::abs(x);
                }
            }
        }
        fail(n, "malformed expression node");
    }

    std::string render(int idx) const {
        const ExprNode& n = nodes_[static_cast<std::size_t>(idx)];
        auto bin = [&](const char* op) { return "(" + render(n.lhs) + " " + op + " " + render(n.rhs) + ")"; };
        switch (n.kind) {
            case NodeKind::Number: {
                std::array<char, 32> buf{};
                auto res = std::to_chars(buf.data(), buf.data() + buf.size(), n.value);
                return std::string(buf.data(), res.ptr);
            }
            case NodeKind::VarT: return "t";
            case NodeKind::VarU: return "u";
            case NodeKind::Negate: return "(-" + render(n.lhs) + ")";
            case NodeKind::Add: return bin("+");
            case NodeKind::Sub: return bin("-");
            case NodeKind::Mul: return bin("*");
            case NodeKind::Div: return bin("/");
            case NodeKind::Pow: return bin("^");
            case NodeKind::Call: return std::string(function_name(n.fn)) + "(" + render(n.lhs) + ")";
        }
        return {};
    }

public:
    static constexpr std::string_view function_name(Function f) {
        switch (f) {
            case Function::Sin: return "sin";
            case Function::Cos: return "cos";
            case Function::Exp: return "exp";
            case Function::Sqrt: return "sqrt";
            case Function::Abs: return "abs";
        }
        return "?";
    }

private:
    std::shared_ptr<const std::string> source_;
    std::vector<ExprNode> nodes_;
    int root_ = -1;
};

/// Same shape, operators, functions and literal values; spans are ignored.
inline bool structurally_equal(const Expr& x, const Expr& y) {
    auto same = [&](auto&& self, int i, int j) -> bool {
        if (i < 0 || j < 0) return i == j;
        const auto& a = x.nodes()[static_cast<std::size_t>(i)];
        const auto& b = y.nodes()[static_cast<std::size_t>(j)];
        if (a.kind != b.kind) return false;
        if (a.kind == NodeKind::Number && a.value != b.value) return false;
        if (a.kind == NodeKind::Call && a.fn != b.fn) return false;
        return self(self, a.lhs, b.lhs) && self(self, a.rhs, b.rhs);
    };
    return same(same, x.root(), y.root());
}

class ExprParser {
public:
    static Expr parse(std::string_view text) {
        ExprParser p(text);
        return p.run();
    }

private:
    enum class Tok { Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, End };

    struct Token {
        Tok kind = Tok::End;
        std::size_t begin = 0;
        std::size_t end = 0;
        double number = 0.0;
    };

    static constexpr int kMaxDepth = 200;

    explicit ExprParser(std::string_view text) : src_(text) {}

    Expr run() {
        expr_.source_ = std::make_shared<const std::string>(src_);
        advance();
        if (tok_.kind == Tok::End) throw ParseError(tok_.begin, "expression", "end of input");
        expr_.root_ = parse_expr(0);
        if (tok_.kind != Tok::End) throw ParseError(tok_.begin, "operator or end of input", describe(tok_));
        return std::move(expr_);
    }

    std::string describe(const Token& tk) const {
        if (tk.kind == Tok::End) return "end of input";
        const auto lexeme = std::string(src_.substr(tk.begin, tk.end - tk.begin));
        if (tk.kind == Tok::Number) return "number " + lexeme;
        if (tk.kind == Tok::Ident) return "identifier '" + lexeme + "'";
        return "'" + lexeme + "'";
    }

    static bool is_digit(char c) { return c >= '0' && c <= '9'; }
    static bool is_alpha(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_'; }

    void advance() {
        while (pos_ < src_.size() && (src_[pos_] == ' ' || src_[pos_] == '\t' || src_[pos_] == '\n' || src_[pos_] == '\r'))
            ++pos_;
        tok_ = Token{};
        tok_.begin = pos_;
        if (pos_ >= src_.size()) {
            tok_.end = pos_;
            return;
        }
        const char c = src_[pos_];
        auto single = [&](Tok k) {
            tok_.kind = k;
            tok_.end = ++pos_;
        };
        switch (c) {
            case '+': return single(Tok::Plus);
            case '-': return single(Tok::Minus);
            case '*': return single(Tok::Star);
            case '/': return single(Tok::Slash);
            case '^': return single(Tok::Caret);
            case '(': return single(Tok::LParen);
            case ')': return single(Tok::RParen);
            default: break;
        }
        if (is_digit(c) || c == '.') return lex_number();
        if (is_alpha(c)) {
            while (pos_ < src_.size() && (is_alpha(src_[pos_]) || is_digit(src_[pos_]))) ++pos_;
            tok_.kind = Tok::Ident;
            tok_.end = pos_;
            return;
        }
        throw ParseError(pos_, "token", "'" + std::string(1, c) + "'");
    }

    void lex_number() {
        const std::size_t start = pos_;
        std::size_t digits = 0;
        while (pos_ < src_.size() && is_digit(src_[pos_])) ++pos_, ++digits;
        if (pos_ < src_.size() && src_[pos_] == '.') {
            ++pos_;
            while (pos_ < src_.size() && is_digit(src_[pos_])) ++pos_, ++digits;
        }
        if (digits == 0) throw ParseError(start, "digit", "'.'");
        if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
            std::size_t p = pos_ + 1;
            if (p < src_.size() && (src_[p] == '+' || src_[p] == '-')) ++p;
            if (p >= src_.size() || !is_digit(src_[p])) {
                throw ParseError(p, "exponent digits",
                                 p < src_.size() ? "'" + std::string(1, src_[p]) + "'" : "end of input");
            }
            while (p < src_.size() && is_digit(src_[p])) ++p;
            pos_ = p;
        }
        double v = 0.0;
        const char* first = src_.data() + start;
        const char* last = src_.data() + pos_;
        auto [ptr, ec] = std::from_chars(first, last, v);
        if (ec != std::errc() || ptr != last || !std::isfinite(v)) {
            throw ParseError(start, "finite number", "'" + std::string(first, last) + "'");
        }
        tok_.kind = Tok::Number;
        tok_.end = pos_;
        tok_.number = v;
    }

    int add(ExprNode n) {
        expr_.nodes_.push_back(n);
        return static_cast<int>(expr_.nodes_.size()) - 1;
    }

    int binary(NodeKind k, int lhs, int rhs) {
        const auto& l = expr_.nodes_[static_cast<std::size_t>(lhs)];
        const auto& r = expr_.nodes_[static_cast<std::size_t>(rhs)];
        return add(ExprNode{k, 0.0, Function::Sin, lhs, rhs, l.begin, r.end});
    }

    void guard(int depth) const {
        if (depth > kMaxDepth) throw ParseError(tok_.begin, "shallower nesting", "nesting deeper than 200");
    }

    int parse_expr(int depth) {
        guard(depth);
        int lhs = parse_term(depth);
        while (tok_.kind == Tok::Plus || tok_.kind == Tok::Minus) {
            const NodeKind k = tok_.kind == Tok::Plus ? NodeKind::Add : NodeKind::Sub;
            advance();
            lhs = binary(k, lhs, parse_term(depth));
        }
        return lhs;
    }

    int parse_term(int depth) {
        int lhs = parse_unary(depth);
        while (tok_.kind == Tok::Star || tok_.kind == Tok::Slash) {
            const NodeKind k = tok_.kind == Tok::Star ? NodeKind::Mul : NodeKind::Div;
            advance();
            lhs = binary(k, lhs, parse_unary(depth));
        }
        return lhs;
    }

    int parse_unary(int depth) {
        guard(depth);
        if (tok_.kind == Tok::Minus) {
            const std::size_t begin = tok_.begin;
            advance();
            const int operand = parse_unary(depth + 1);
            const std::size_t end = expr_.nodes_[static_cast<std::size_t>(operand)].end;
            return add(ExprNode{NodeKind::Negate, 0.0, Function::Sin, operand, -1, begin, end});
        }
        return parse_power(depth);
    }

    int parse_power(int depth) {
        const int base = parse_primary(depth);
        if (tok_.kind != Tok::Caret) return base;
        advance();
        return binary(NodeKind::Pow, base, parse_unary(depth + 1));
    }

    void expect(Tok k, const char* what) {
        if (tok_.kind != k) throw ParseError(tok_.begin, what, describe(tok_));
    }

    int parse_primary(int depth) {
        const Token tk = tok_;
        switch (tk.kind) {
            case Tok::Number:
                advance();
                return add(ExprNode{NodeKind::Number, tk.number, Function::Sin, -1, -1, tk.begin, tk.end});
            case Tok::LParen: {
                advance();
                const int inner = parse_expr(depth + 1);
                expect(Tok::RParen, "')'");
                advance();
                return inner;
            }
            case Tok::Ident: {
                const std::string_view name = src_.substr(tk.begin, tk.end - tk.begin);
                if (name == "t" || name == "u") {
                    advance();
                    return add(ExprNode{name == "t" ? NodeKind::VarT : NodeKind::VarU, 0.0, Function::Sin, -1, -1,
                                        tk.begin, tk.end});
                }
                static constexpr std::array<Function, 5> fns{Function::Sin, Function::Cos, Function::Exp,
                                                             Function::Sqrt, Function::Abs};
                for (Function f : fns) {
                    if (name != Expr::function_name(f)) continue;
                    advance();
                    expect(Tok::LParen, "'(' after function name");
                    advance();
                    const int arg = parse_expr(depth + 1);
                    expect(Tok::RParen, "')'");
                    const std::size_t end = tok_.end;
                    advance();
                    return add(ExprNode{NodeKind::Call, 0.0, f, arg, -1, tk.begin, end});
                }
                throw ParseError(tk.begin, "variable t or u or one of sin, cos, exp, sqrt, abs", describe(tk));
            }
            default:
                throw ParseError(tk.begin, "number, variable, function call or '('", describe(tk));
        }
    }

    std::string_view src_;
    std::size_t pos_ = 0;
    Token tok_;
    Expr expr_;
};

/// Parses f(t, u) source text; throws ParseError with a byte offset on malformed input.
inline Expr parse_expr(std::string_view source) { return ExprParser::parse(source); }

/// Evaluates e at (t, u); throws EvalError naming the offending subexpression.
inline double eval_expr(const Expr& e, double t, double u) { return e.evaluate(t, u); }

}  // namespace thermistor
