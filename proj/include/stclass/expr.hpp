#pragma once

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "stclass/error.hpp"
#include "stclass/jet.hpp"
#include "stclass/linalg.hpp"

namespace stc {

/// Names the four coordinates of a chart. The canonical spellings x0..x3 are
/// always accepted alongside the chart aliases.
struct SymbolTable {
    std::array<std::string, 4> coord_names{"x0", "x1", "x2", "x3"};
    std::vector<std::string> param_names;

    std::optional<int> coord_axis(const std::string& s) const {
        for (int i = 0; i < 4; ++i)
            if (s == coord_names[static_cast<std::size_t>(i)]) return i;
        if (s.size() == 2 && s[0] == 'x' && s[1] >= '0' && s[1] <= '3') return s[1] - '0';
        return std::nullopt;
    }
    bool is_param(const std::string& s) const {
        for (const auto& p : param_names)
            if (p == s) return true;
        return false;
    }
};

enum class Fn { Sin, Cos, Exp, Log, Sinh, Cosh, Sqrt };

inline const char* fn_name(Fn f) {
    switch (f) {
        case Fn::Sin: return "sin";
        case Fn::Cos: return "cos";
        case Fn::Exp: return "exp";
        case Fn::Log: return "log";
        case Fn::Sinh: return "sinh";
        case Fn::Cosh: return "cosh";
        case Fn::Sqrt: return "sqrt";
    }
    return "?";
}

inline std::optional<Fn> fn_from_name(const std::string& s) {
    if (s == "sin") return Fn::Sin;
    if (s == "cos") return Fn::Cos;
    if (s == "exp") return Fn::Exp;
    if (s == "log") return Fn::Log;
    if (s == "sinh") return Fn::Sinh;
    if (s == "cosh") return Fn::Cosh;
    if (s == "sqrt") return Fn::Sqrt;
    return std::nullopt;
}

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

/// Immutable expression tree. Coordinates are resolved to an axis at parse
/// time but keep their spelling for printing.
struct Expr {
    enum class Kind { Number, Coord, Param, Neg, Add, Sub, Mul, Div, Pow, Call };

    Kind kind;
    double number = 0.0;   // Number
    int axis = -1;         // Coord
    std::string name;      // Coord spelling / Param name
    Fn fn = Fn::Sin;       // Call
    ExprPtr a, b;          // children

    static ExprPtr make_number(double v) {
        auto e = std::make_shared<Expr>();
        e->kind = Kind::Number;
        e->number = v;
        return e;
    }
    static ExprPtr make_coord(int axis, std::string name) {
        auto e = std::make_shared<Expr>();
        e->kind = Kind::Coord;
        e->axis = axis;
        e->name = std::move(name);
        return e;
    }
    static ExprPtr make_param(std::string name) {
        auto e = std::make_shared<Expr>();
        e->kind = Kind::Param;
        e->name = std::move(name);
        return e;
    }
    static ExprPtr make_unary(Kind k, ExprPtr a) {
        auto e = std::make_shared<Expr>();
        e->kind = k;
        e->a = std::move(a);
        return e;
    }
    static ExprPtr make_binary(Kind k, ExprPtr a, ExprPtr b) {
        auto e = std::make_shared<Expr>();
        e->kind = k;
        e->a = std::move(a);
        e->b = std::move(b);
        return e;
    }
    static ExprPtr make_call(Fn f, ExprPtr a) {
        auto e = std::make_shared<Expr>();
        e->kind = Kind::Call;
        e->fn = f;
        e->a = std::move(a);
        return e;
    }
};

namespace detail {

struct Token {
    enum class Type { Number, Ident, Op, End } type = Type::End;
    double number = 0.0;
    std::string text;
    char op = 0;
    std::size_t offset = 0;
};

class Lexer {
public:
    explicit Lexer(const std::string& s) : s_(s) { advance(); }

    const Token& peek() const { return tok_; }

    Token take() {
        Token t = tok_;
        advance();
        return t;
    }

private:
    void advance() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        tok_ = Token{};
        tok_.offset = pos_;
        if (pos_ >= s_.size()) {
            tok_.type = Token::Type::End;
            return;
        }
        const char c = s_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            const char* start = s_.c_str() + pos_;
            char* end = nullptr;
            const double v = std::strtod(start, &end);
            if (end == start) throw parse_error("malformed number", pos_);
            tok_.type = Token::Type::Number;
            tok_.number = v;
            tok_.text.assign(start, static_cast<std::size_t>(end - start));
            pos_ += static_cast<std::size_t>(end - start);
            return;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t end = pos_;
            while (end < s_.size() &&
                   (std::isalnum(static_cast<unsigned char>(s_[end])) || s_[end] == '_'))
                ++end;
            tok_.type = Token::Type::Ident;
            tok_.text = s_.substr(pos_, end - pos_);
            pos_ = end;
            return;
        }
        if (std::string("+-*/^()").find(c) != std::string::npos) {
            tok_.type = Token::Type::Op;
            tok_.op = c;
            ++pos_;
            return;
        }
        throw parse_error(std::string("unexpected character '") + c + "'", pos_);
    }

    const std::string& s_;
    std::size_t pos_ = 0;
    Token tok_;
};

// Grammar (conventional precedence: ^ above unary minus above * / above + -):
//   sum    := product (('+'|'-') product)*
//   product:= unary (('*'|'/') unary)*
//   unary  := '-' unary | power
//   power  := atom ('^' unary)?          right-associative
//   atom   := number | ident | ident '(' sum ')' | '(' sum ')'
class Parser {
public:
    Parser(const std::string& text, const SymbolTable& symbols)
        : lex_(text), symbols_(symbols) {}

    ExprPtr run() {
        ExprPtr e = sum();
        const Token& t = lex_.peek();
        if (t.type != Token::Type::End)
            throw parse_error("unexpected trailing input", t.offset);
        return e;
    }

private:
    bool at_op(char c) const {
        return lex_.peek().type == Token::Type::Op && lex_.peek().op == c;
    }

    ExprPtr sum() {
        ExprPtr e = product();
        while (at_op('+') || at_op('-')) {
            const char op = lex_.take().op;
            e = Expr::make_binary(op == '+' ? Expr::Kind::Add : Expr::Kind::Sub, e, product());
        }
        return e;
    }

    ExprPtr product() {
        ExprPtr e = unary();
        while (at_op('*') || at_op('/')) {
            const char op = lex_.take().op;
            e = Expr::make_binary(op == '*' ? Expr::Kind::Mul : Expr::Kind::Div, e, unary());
        }
        return e;
    }

    ExprPtr unary() {
        if (at_op('-')) {
            lex_.take();
            return Expr::make_unary(Expr::Kind::Neg, unary());
        }
        if (at_op('+')) {
            lex_.take();
            return unary();
        }
        return power();
    }

    ExprPtr power() {
        ExprPtr base = atom();
        if (at_op('^')) {
            lex_.take();
            return Expr::make_binary(Expr::Kind::Pow, base, unary());
        }
        return base;
    }

    ExprPtr atom() {
        const Token t = lex_.take();
        switch (t.type) {
            case Token::Type::Number:
                return Expr::make_number(t.number);
            case Token::Type::Ident: {
                if (at_op('(')) {
                    const auto fn = fn_from_name(t.text);
                    if (!fn)
                        throw parse_error("unknown function '" + t.text + "'", t.offset);
                    lex_.take();
                    ExprPtr arg = sum();
                    expect(')');
                    return Expr::make_call(*fn, arg);
                }
                if (const auto axis = symbols_.coord_axis(t.text))
                    return Expr::make_coord(*axis, t.text);
                if (symbols_.is_param(t.text)) return Expr::make_param(t.text);
                throw parse_error("unknown identifier '" + t.text + "'", t.offset);
            }
            case Token::Type::Op:
                if (t.op == '(') {
                    ExprPtr e = sum();
                    expect(')');
                    return e;
                }
                throw parse_error(std::string("unexpected '") + t.op + "'", t.offset);
            case Token::Type::End:
                throw parse_error("unexpected end of expression", t.offset);
        }
        throw parse_error("unexpected token", t.offset);
    }

    void expect(char c) {
        const Token& t = lex_.peek();
        if (!at_op(c))
            throw parse_error(std::string("expected '") + c + "'", t.offset);
        lex_.take();
    }

    Lexer lex_;
    const SymbolTable& symbols_;
};

inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

} // namespace detail

/// Parse an expression against a symbol table; throws parse_error with the
/// byte offset of the failing token.
inline ExprPtr parse(const std::string& text, const SymbolTable& symbols) {
    if (text.empty()) throw parse_error("empty expression", 0);
    return detail::Parser(text, symbols).run();
}

inline bool contains_coordinate(const Expr& e) {
    switch (e.kind) {
        case Expr::Kind::Coord: return true;
        case Expr::Kind::Number:
        case Expr::Kind::Param: return false;
        case Expr::Kind::Neg:
        case Expr::Kind::Call: return contains_coordinate(*e.a);
        default: return contains_coordinate(*e.a) || contains_coordinate(*e.b);
    }
}

using ParamMap = std::map<std::string, double>;

namespace detail {

inline double param_value(const std::string& name, const ParamMap& params) {
    const auto it = params.find(name);
    if (it == params.end()) throw eval_error("unbound parameter '" + name + "'");
    return it->second;
}

inline double eval_real_impl(const Expr& e, const Vec4& point, const ParamMap& params);

template <class T, class MakeCoord>
T eval_generic(const Expr& e, const MakeCoord& coord, const Vec4& point, const ParamMap& params) {
    using K = Expr::Kind;
    switch (e.kind) {
        case K::Number: return T::constant(e.number);
        case K::Coord: return coord(e.axis);
        case K::Param: return T::constant(param_value(e.name, params));
        case K::Neg: return -eval_generic<T>(*e.a, coord, point, params);
        case K::Add:
            return eval_generic<T>(*e.a, coord, point, params) +
                   eval_generic<T>(*e.b, coord, point, params);
        case K::Sub:
            return eval_generic<T>(*e.a, coord, point, params) -
                   eval_generic<T>(*e.b, coord, point, params);
        case K::Mul:
            return eval_generic<T>(*e.a, coord, point, params) *
                   eval_generic<T>(*e.b, coord, point, params);
        case K::Div:
            return eval_generic<T>(*e.a, coord, point, params) /
                   eval_generic<T>(*e.b, coord, point, params);
        case K::Pow: {
            T base = eval_generic<T>(*e.a, coord, point, params);
            if (!contains_coordinate(*e.b)) {
                // coordinate-free exponent evaluates to a constant
                return pow(base, eval_real_impl(*e.b, point, params));
            }
            // variable exponent: a^b = exp(b * log(a))
            return exp(eval_generic<T>(*e.b, coord, point, params) * log(base));
        }
        case K::Call: {
            T arg = eval_generic<T>(*e.a, coord, point, params);
            switch (e.fn) {
                case Fn::Sin: return sin(arg);
                case Fn::Cos: return cos(arg);
                case Fn::Exp: return exp(arg);
                case Fn::Log: return log(arg);
                case Fn::Sinh: return sinh(arg);
                case Fn::Cosh: return cosh(arg);
                case Fn::Sqrt: return sqrt(arg);
            }
            throw eval_error("unknown function tag");
        }
    }
    throw eval_error("unknown expression node");
}

inline double eval_real_impl(const Expr& e, const Vec4& point, const ParamMap& params) {
    using K = Expr::Kind;
    switch (e.kind) {
        case K::Number: return e.number;
        case K::Coord: return point[static_cast<std::size_t>(e.axis)];
        case K::Param: return param_value(e.name, params);
        case K::Neg: return -eval_real_impl(*e.a, point, params);
        case K::Add: return eval_real_impl(*e.a, point, params) + eval_real_impl(*e.b, point, params);
        case K::Sub: return eval_real_impl(*e.a, point, params) - eval_real_impl(*e.b, point, params);
        case K::Mul: return eval_real_impl(*e.a, point, params) * eval_real_impl(*e.b, point, params);
        case K::Div: {
            const double d = eval_real_impl(*e.b, point, params);
            if (d == 0.0) throw eval_error("division by zero");
            return eval_real_impl(*e.a, point, params) / d;
        }
        case K::Pow: {
            const double base = eval_real_impl(*e.a, point, params);
            const double p = eval_real_impl(*e.b, point, params);
            const double r = std::nearbyint(p);
            if (p == r && std::abs(r) <= 32.0) {
                if (base == 0.0 && r < 0.0) throw eval_error("division by zero");
                return std::pow(base, p);
            }
            if (!(base > 0.0)) throw eval_error("non-integer power of a non-positive base");
            return std::pow(base, p);
        }
        case K::Call: {
            const double a = eval_real_impl(*e.a, point, params);
            switch (e.fn) {
                case Fn::Sin: return std::sin(a);
                case Fn::Cos: return std::cos(a);
                case Fn::Exp: return std::exp(a);
                case Fn::Log:
                    if (!(a > 0.0)) throw eval_error("log of a non-positive value");
                    return std::log(a);
                case Fn::Sinh: return std::sinh(a);
                case Fn::Cosh: return std::cosh(a);
                case Fn::Sqrt:
                    if (a < 0.0) throw eval_error("sqrt of a negative value");
                    return std::sqrt(a);
            }
            throw eval_error("unknown function tag");
        }
    }
    throw eval_error("unknown expression node");
}

} // namespace detail

inline double eval_real(const Expr& e, const Vec4& point, const ParamMap& params) {
    return detail::eval_real_impl(e, point, params);
}

inline double eval_real(const ExprPtr& e, const Vec4& point, const ParamMap& params) {
    return detail::eval_real_impl(*e, point, params);
}

/// Order-3 jet of the expression at the point. Coordinates become jet
/// variables, parameters constants.
inline Jet3 eval_jet(const Expr& e, const Vec4& point, const ParamMap& params) {
    const auto coord = [&](int axis) {
        return Jet3::variable(axis, point[static_cast<std::size_t>(axis)]);
    };
    return detail::eval_generic<Jet3>(e, coord, point, params);
}

inline Jet3 eval_jet(const ExprPtr& e, const Vec4& point, const ParamMap& params) {
    return eval_jet(*e, point, params);
}

/// First-order jet of the expression (value plus gradient).
inline Dual4 eval_dual(const Expr& e, const Vec4& point, const ParamMap& params) {
    const auto coord = [&](int axis) {
        return Dual4::variable(axis, point[static_cast<std::size_t>(axis)]);
    };
    return detail::eval_generic<Dual4>(e, coord, point, params);
}

inline Dual4 eval_dual(const ExprPtr& e, const Vec4& point, const ParamMap& params) {
    return eval_dual(*e, point, params);
}

namespace detail {

inline int precedence(Expr::Kind k) {
    using K = Expr::Kind;
    switch (k) {
        case K::Add:
        case K::Sub: return 1;
        case K::Mul:
        case K::Div: return 2;
        case K::Neg: return 3;
        case K::Pow: return 4;
        default: return 5;
    }
}

inline void print(const Expr& e, std::string& out) {
    using K = Expr::Kind;
    const auto child = [&](const Expr& c, bool needs_parens) {
        if (needs_parens) out += '(';
        print(c, out);
        if (needs_parens) out += ')';
    };
    switch (e.kind) {
        case K::Number:
            if (e.number < 0.0) {
                out += '(';
                out += format_double(e.number);
                out += ')';
            } else {
                out += format_double(e.number);
            }
            return;
        case K::Coord: out += e.name; return;
        case K::Param: out += e.name; return;
        case K::Neg:
            out += '-';
            child(*e.a, precedence(e.a->kind) < precedence(K::Neg));
            return;
        case K::Add:
            child(*e.a, precedence(e.a->kind) < 1);
            out += " + ";
            child(*e.b, precedence(e.b->kind) <= 1);
            return;
        case K::Sub:
            child(*e.a, precedence(e.a->kind) < 1);
            out += " - ";
            child(*e.b, precedence(e.b->kind) <= 1);
            return;
        case K::Mul:
            child(*e.a, precedence(e.a->kind) < 2);
            out += "*";
            child(*e.b, precedence(e.b->kind) <= 2);
            return;
        case K::Div:
            child(*e.a, precedence(e.a->kind) < 2);
            out += "/";
            child(*e.b, precedence(e.b->kind) <= 2);
            return;
        case K::Pow:
            child(*e.a, precedence(e.a->kind) <= 4);
            out += "^";
            child(*e.b, precedence(e.b->kind) < 4);
            return;
        case K::Call:
            out += fn_name(e.fn);
            out += '(';
            print(*e.a, out);
            out += ')';
            return;
    }
}

} // namespace detail

/// Text form that reparses to an equivalent expression; numbers at 17
/// significant digits so values round-trip exactly.
inline std::string to_string(const Expr& e) {
    std::string out;
    detail::print(e, out);
    return out;
}

inline std::string to_string(const ExprPtr& e) { return to_string(*e); }

} // namespace stc
