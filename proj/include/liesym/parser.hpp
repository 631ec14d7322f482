#pragma once

#include <cctype>
#include <string>
#include <string_view>
#include <vector>

#include "liesym/expr.hpp"

namespace liesym {
namespace detail {

/// Recursive-descent parser for the expression grammar:
///
///   expr     := term (("+"|"-") term)*
///   term     := factor (("*"|"/") factor)*
///   factor   := base ("^" exponent)?
///   base     := NUMBER | IDENT | IDENT "[" index-list "]"
///             | IDENT "(" arg-list ")" | "(" expr ")" | "-" factor
///   exponent := signed-integer | IDENT | "(" expr ")"
///
/// `u[x,x,t]` is the jet atom u_xxt, `f(u)` applies a declared unknown
/// function, `f[u,u]` is its second derivative, and `exp(...)` is reserved.
/// "/" divides by a coefficient or a single monomial.
class ExprParser {
public:
    ExprParser(std::string_view text, const Context& ctx) : text_(text), ctx_(ctx) {}

    Expr parse() {
        Expr e = expr();
        skip();
        if (!eof()) fail("unexpected trailing input");
        return e;
    }

private:
    std::string_view text_;
    const Context& ctx_;
    std::size_t pos_ = 0;
    int line_ = 1, col_ = 1;

    bool eof() const { return pos_ >= text_.size(); }
    char peek() const { return text_[pos_]; }
    void advance() {
        if (text_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }
    void skip() {
        while (!eof() && std::isspace(static_cast<unsigned char>(peek()))) advance();
    }
    bool accept(char c) {
        skip();
        if (!eof() && peek() == c) {
            advance();
            return true;
        }
        return false;
    }
    void expect(char c, const char* what) {
        if (!accept(c)) fail(std::string("expected '") + c + "' " + what);
    }
    [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, line_, col_); }

    Expr expr() {
        Expr e = term();
        for (;;) {
            if (accept('+'))
                e += term();
            else if (accept('-'))
                e -= term();
            else
                return e;
        }
    }

    Expr term() {
        Expr e = factor();
        for (;;) {
            if (accept('*'))
                e *= factor();
            else if (accept('/'))
                e = divide(e, factor());
            else
                return e;
        }
    }

    Expr factor() {
        Expr b = base();
        if (accept('^')) {
            RationalFunction e = exponent();
            return e.is_integer() ? b.pow_int(e.integer_value()) : Expr::pow_symbolic(b, e);
        }
        return b;
    }

    Expr base() {
        skip();
        if (eof()) fail("unexpected end of input");
        char c = peek();
        if (c == '(') {
            advance();
            Expr e = expr();
            expect(')', "to close parenthesis");
            return e;
        }
        if (c == '-') {
            advance();
            return -factor();
        }
        if (std::isdigit(static_cast<unsigned char>(c))) return Expr(RationalFunction(number()));
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
        fail("unexpected character '" + std::string(1, c) + "'");
    }

    Rat number() {
        std::string digits;
        while (!eof() && std::isdigit(static_cast<unsigned char>(peek()))) {
            digits += peek();
            advance();
        }
        return Rat(Int(digits));
    }

    std::string ident() {
        skip();
        if (eof() || !(std::isalpha(static_cast<unsigned char>(peek())) || peek() == '_'))
            fail("expected identifier");
        std::string name;
        while (!eof() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_')) {
            name += peek();
            advance();
        }
        return name;
    }

    Expr identifier() {
        int at_line = line_, at_col = col_;
        std::string name = ident();
        if (accept('[')) return bracket_atom(name, at_line, at_col);
        skip();
        if (!eof() && peek() == '(') {
            advance();
            return application(name, at_line, at_col);
        }
        if (name == "exp") throw ParseError("exp requires an argument list", at_line, at_col);
        int axis = ctx_.axis_of(name);
        if (axis >= 0) return Expr::indep(axis);
        if (ctx_.is_dep(name)) return Expr::jet(MultiIndex{});
        int pid = ctx_.param_id(name);
        if (pid >= 0) return Expr(RationalFunction::variable(pid));
        if (ctx_.is_unknown(name))
            throw ParseError("unknown function '" + name +
                                 "' must be applied or differentiated",
                             at_line, at_col);
        throw ParseError("unknown identifier '" + name + "'", at_line, at_col);
    }

    std::vector<std::string> name_list(char closing) {
        std::vector<std::string> names;
        for (;;) {
            names.push_back(ident());
            if (accept(closing)) return names;
            expect(',', "in argument list");
        }
    }

    Expr bracket_atom(const std::string& name, int at_line, int at_col) {
        std::vector<std::string> idx = name_list(']');
        if (ctx_.is_dep(name)) {
            std::vector<int> axes;
            for (const auto& n : idx) {
                int a = ctx_.axis_of(n);
                if (a < 0)
                    throw ParseError("jet index '" + n + "' is not an independent variable",
                                     at_line, at_col);
                axes.push_back(a);
            }
            return Expr::jet(MultiIndex(std::move(axes)));
        }
        if (ctx_.is_unknown(name)) {
            const auto& declared = ctx_.unknown_args(name);
            for (const auto& n : idx) {
                if (std::find(declared.begin(), declared.end(), n) == declared.end())
                    throw ParseError("'" + n + "' is not an argument of '" + name + "'",
                                     at_line, at_col);
            }
            return Expr::unknown(name, idx);
        }
        throw ParseError("'" + name + "' cannot take a derivative index", at_line, at_col);
    }

    Expr application(const std::string& name, int at_line, int at_col) {
        if (name == "exp") {
            Expr arg = expr();
            expect(')', "to close exp");
            return Expr::exp(arg);
        }
        if (!ctx_.is_unknown(name))
            throw ParseError("'" + name + "' is not a declared function", at_line, at_col);
        std::vector<std::string> args = name_list(')');
        const auto& declared = ctx_.unknown_args(name);
        if (args != declared) {
            std::string want;
            for (std::size_t i = 0; i < declared.size(); ++i)
                want += (i ? "," : "") + declared[i];
            throw ParseError("'" + name + "' must be applied as " + name + "(" + want + ")",
                             at_line, at_col);
        }
        return Expr::unknown(name, {});
    }

    RationalFunction exponent() {
        skip();
        if (eof()) fail("expected exponent");
        char c = peek();
        if (c == '-' || std::isdigit(static_cast<unsigned char>(c))) {
            bool neg = c == '-';
            if (neg) advance();
            skip();
            if (eof() || !std::isdigit(static_cast<unsigned char>(peek())))
                fail("expected integer exponent");
            Rat n = number();
            return RationalFunction(neg ? Rat(-n) : n);
        }
        if (c == '(') {
            advance();
            int at_line = line_, at_col = col_;
            Expr e = expr();
            expect(')', "to close exponent");
            if (!e.is_coefficient())
                throw ParseError("exponent must be built from integers and parameters",
                                 at_line, at_col);
            return e.coefficient_value();
        }
        int at_line = line_, at_col = col_;
        std::string name = ident();
        int pid = ctx_.param_id(name);
        if (pid < 0)
            throw ParseError("exponent '" + name + "' is not a parameter", at_line, at_col);
        return RationalFunction::variable(pid);
    }

    Expr divide(const Expr& a, const Expr& b) {
        if (b.is_zero()) fail("division by zero");
        if (b.is_coefficient()) return a * b.coefficient_value().inverse();
        if (b.term_count() == 1) return a * b.pow_int(-1);
        fail("division by a sum is not supported");
    }
};

}  // namespace detail

inline Expr parse_expr(std::string_view text, const Context& ctx) {
    return detail::ExprParser(text, ctx).parse();
}

/// Parses a semicolon-separated component list (e.g. a vector-field text form
/// "y; -x; 0" or a multi-expression input line).
inline std::vector<Expr> parse_components(std::string_view text, const Context& ctx) {
    std::vector<Expr> out;
    std::size_t start = 0;
    while (true) {
        std::size_t semi = text.find(';', start);
        std::string_view piece =
            semi == std::string_view::npos ? text.substr(start) : text.substr(start, semi - start);
        out.push_back(parse_expr(piece, ctx));
        if (semi == std::string_view::npos) break;
        start = semi + 1;
    }
    return out;
}

}  // namespace liesym
