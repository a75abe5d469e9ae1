#pragma once

// Expression trees over z, z̄: parser, printer, evaluator and symbolic ∂/∂̄.

#include <cctype>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <memory>
#include <string>
#include <vector>

#include "dual.hpp"
#include "errors.hpp"

namespace wsurf {

using cd = std::complex<double>;

enum class Op { Const, Z, Zb, Add, Sub, Mul, Div, Neg, Pow, Conj, Sqrt };

struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct Node {
    Op op;
    cd value{};          // Const
    int twice_exp = 0;   // Pow: exponent = twice_exp / 2
    NodePtr a, b;
};

struct EvalContext {
    double cut_angle = std::numbers::pi;  // ray of the sqrt cut
    double eps_puncture = 1e-9;
};

class Expr {
public:
    Expr() : n_(make_const(0.0)) {}
    Expr(cd c) : n_(make_const(c)) {}
    Expr(double c) : n_(make_const(c)) {}
    explicit Expr(NodePtr n) : n_(std::move(n)) {}

    static Expr z() { return Expr(std::make_shared<const Node>(Node{Op::Z, {}, 0, nullptr, nullptr})); }
    static Expr zb() { return Expr(std::make_shared<const Node>(Node{Op::Zb, {}, 0, nullptr, nullptr})); }

    const NodePtr& node() const { return n_; }
    bool is_const() const { return n_->op == Op::Const; }
    bool is_zero() const { return is_const() && n_->value == cd(0); }
    bool is_one() const { return is_const() && n_->value == cd(1); }

    friend Expr operator+(const Expr& a, const Expr& b) {
        if (a.is_zero()) return b;
        if (b.is_zero()) return a;
        if (a.is_const() && b.is_const()) return Expr(a.n_->value + b.n_->value);
        return bin(Op::Add, a, b);
    }
    friend Expr operator-(const Expr& a, const Expr& b) {
        if (b.is_zero()) return a;
        if (a.is_zero()) return -b;
        if (a.is_const() && b.is_const()) return Expr(a.n_->value - b.n_->value);
        return bin(Op::Sub, a, b);
    }
    friend Expr operator*(const Expr& a, const Expr& b) {
        if (a.is_zero() || b.is_zero()) return Expr(0.0);
        if (a.is_one()) return b;
        if (b.is_one()) return a;
        if (a.is_const() && b.is_const()) return Expr(a.n_->value * b.n_->value);
        return bin(Op::Mul, a, b);
    }
    friend Expr operator/(const Expr& a, const Expr& b) {
        if (b.is_one()) return a;
        if (a.is_zero() && !b.is_zero()) return Expr(0.0);
        if (a.is_const() && b.is_const() && b.n_->value != cd(0)) return Expr(a.n_->value / b.n_->value);
        return bin(Op::Div, a, b);
    }
    friend Expr operator-(const Expr& a) {
        if (a.is_const()) return Expr(-a.n_->value);
        if (a.n_->op == Op::Neg) return Expr(a.n_->a);
        return Expr(std::make_shared<const Node>(Node{Op::Neg, {}, 0, a.n_, nullptr}));
    }
    friend Expr conj(const Expr& a) {
        if (a.is_const()) return Expr(std::conj(a.n_->value));
        if (a.n_->op == Op::Conj) return Expr(a.n_->a);
        return Expr(std::make_shared<const Node>(Node{Op::Conj, {}, 0, a.n_, nullptr}));
    }
    friend Expr sqrt(const Expr& a) {
        return Expr(std::make_shared<const Node>(Node{Op::Sqrt, {}, 0, a.n_, nullptr}));
    }
    // a^(twice/2)
    friend Expr pow_half(const Expr& a, int twice) {
        if (twice == 0) return Expr(1.0);
        if (twice == 2) return a;
        return Expr(std::make_shared<const Node>(Node{Op::Pow, {}, twice, a.n_, nullptr}));
    }
    friend Expr pow(const Expr& a, int n) { return pow_half(a, 2 * n); }

private:
    static NodePtr make_const(cd c) { return std::make_shared<const Node>(Node{Op::Const, c, 0, nullptr, nullptr}); }
    static Expr bin(Op op, const Expr& a, const Expr& b) {
        return Expr(std::make_shared<const Node>(Node{op, {}, 0, a.n_, b.n_}));
    }
    NodePtr n_;
};

// ---- evaluation -----------------------------------------------------------

namespace detail {

template <class T>
Dual2<T> eval_node(const Node& n, const Dual2<T>& z, const Dual2<T>& zb, const EvalContext& ctx) {
    switch (n.op) {
        case Op::Const: return Dual2<T>::constant(std::complex<T>(n.value));
        case Op::Z: return z;
        case Op::Zb: return zb;
        case Op::Add: return eval_node(*n.a, z, zb, ctx) + eval_node(*n.b, z, zb, ctx);
        case Op::Sub: return eval_node(*n.a, z, zb, ctx) - eval_node(*n.b, z, zb, ctx);
        case Op::Mul: return eval_node(*n.a, z, zb, ctx) * eval_node(*n.b, z, zb, ctx);
        case Op::Div: {
            auto den = eval_node(*n.b, z, zb, ctx);
            if (std::abs(den.v) <= ctx.eps_puncture)
                throw PunctureViolation("denominator vanishes at evaluation point");
            return eval_node(*n.a, z, zb, ctx) / den;
        }
        case Op::Neg: return -eval_node(*n.a, z, zb, ctx);
        case Op::Conj: return conj(eval_node(*n.a, z, zb, ctx));
        case Op::Sqrt: return half_pow(eval_node(*n.a, z, zb, ctx), 1, T(ctx.cut_angle));
        case Op::Pow: {
            auto base = eval_node(*n.a, z, zb, ctx);
            if (n.twice_exp < 0 && std::abs(base.v) <= ctx.eps_puncture)
                throw PunctureViolation("negative power of a vanishing base");
            return half_pow(base, n.twice_exp, T(ctx.cut_angle));
        }
    }
    return {};
}

inline void collect_denominators(const NodePtr& n, std::vector<NodePtr>& out) {
    if (!n) return;
    if (n->op == Op::Div) out.push_back(n->b);
    if (n->op == Op::Pow && n->twice_exp < 0) out.push_back(n->a);
    collect_denominators(n->a, out);
    collect_denominators(n->b, out);
}

}  // namespace detail

template <class T = double>
Dual2<T> eval_dual(const Expr& e, T x, T y, const EvalContext& ctx = {}) {
    return detail::eval_node(*e.node(), Dual2<T>::var_z(x, y), Dual2<T>::var_zb(x, y), ctx);
}

// Plain value, no derivatives.
inline cd eval_value(const Expr& e, cd z, const EvalContext& ctx = {}) {
    return eval_dual<double>(e, z.real(), z.imag(), ctx).v;
}

// ---- symbolic Wirtinger derivatives --------------------------------------

enum class Wrt { dz, dzb };

inline Expr derive(const Expr& e, Wrt w) {
    const Node& n = *e.node();
    auto A = [&] { return Expr(n.a); };
    auto B = [&] { return Expr(n.b); };
    switch (n.op) {
        case Op::Const: return Expr(0.0);
        case Op::Z: return Expr(w == Wrt::dz ? 1.0 : 0.0);
        case Op::Zb: return Expr(w == Wrt::dzb ? 1.0 : 0.0);
        case Op::Add: return derive(A(), w) + derive(B(), w);
        case Op::Sub: return derive(A(), w) - derive(B(), w);
        case Op::Neg: return -derive(A(), w);
        case Op::Mul: return derive(A(), w) * B() + A() * derive(B(), w);
        case Op::Div: return (derive(A(), w) * B() - A() * derive(B(), w)) / pow(B(), 2);
        case Op::Conj: return conj(derive(A(), w == Wrt::dz ? Wrt::dzb : Wrt::dz));
        case Op::Sqrt: return derive(A(), w) / (Expr(2.0) * e);
        case Op::Pow: {
            auto da = derive(A(), w);
            if (da.is_zero()) return Expr(0.0);
            return Expr(cd(n.twice_exp / 2.0)) * pow_half(A(), n.twice_exp - 2) * da;
        }
    }
    return Expr(0.0);
}

// ---- printing -------------------------------------------------------------

namespace detail {

inline std::string fmt_real(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::string fmt_const(cd c) {
    if (c.imag() == 0.0) return fmt_real(c.real());
    if (c.real() == 0.0) return fmt_real(c.imag()) + "i";
    return "(" + fmt_real(c.real()) + (c.imag() < 0 ? "-" : "+") + fmt_real(std::abs(c.imag())) + "i)";
}

inline std::string print(const Node& n) {
    auto p = [](const NodePtr& c) { return "(" + print(*c) + ")"; };
    switch (n.op) {
        case Op::Const: {
            auto s = fmt_const(n.value);
            return s[0] == '-' ? "(" + s + ")" : s;
        }
        case Op::Z: return "z";
        case Op::Zb: return "zb";
        case Op::Add: return p(n.a) + "+" + p(n.b);
        case Op::Sub: return p(n.a) + "-" + p(n.b);
        case Op::Mul: return p(n.a) + "*" + p(n.b);
        case Op::Div: return p(n.a) + "/" + p(n.b);
        case Op::Neg: return "-" + p(n.a);
        case Op::Conj: return "conj(" + print(*n.a) + ")";
        case Op::Sqrt: return "sqrt(" + print(*n.a) + ")";
        case Op::Pow:
            return p(n.a) + "^(" + (n.twice_exp % 2 == 0 ? std::to_string(n.twice_exp / 2)
                                                          : std::to_string(n.twice_exp) + "/2") + ")";
    }
    return {};
}

// Recursive-descent parser for the DSL.
class Parser {
public:
    explicit Parser(std::string s) : s_(std::move(s)) {}

    Expr parse() {
        Expr e = expr();
        skip();
        if (i_ != s_.size()) fail("unexpected trailing input");
        return e;
    }

private:
    [[noreturn]] void fail(const std::string& msg) const {
        throw SpecParse(msg + " at position " + std::to_string(i_) + " in '" + s_ + "'");
    }
    void skip() {
        while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
    }
    bool eat(char c) {
        skip();
        if (i_ < s_.size() && s_[i_] == c) { ++i_; return true; }
        return false;
    }
    bool peek_ident(const char* id) {
        skip();
        std::size_t len = std::char_traits<char>::length(id);
        if (s_.compare(i_, len, id) != 0) return false;
        std::size_t j = i_ + len;
        return j >= s_.size() || !(std::isalnum(static_cast<unsigned char>(s_[j])) || s_[j] == '_');
    }

    Expr expr() {
        Expr e = term();
        for (;;) {
            if (eat('+')) e = e + term();
            else if (eat('-')) e = e - term();
            else return e;
        }
    }
    Expr term() {
        Expr e = unary();
        for (;;) {
            if (eat('*')) e = e * unary();
            else if (eat('/')) e = e / unary();
            else return e;
        }
    }
    Expr unary() {
        if (eat('-')) return -unary();
        if (eat('+')) return unary();
        return power();
    }
    Expr power() {
        Expr base = primary();
        if (eat('^')) return pow_half(base, exponent());
        return base;
    }
    // Integer or half-integer exponent: 3, -2, 1.5, (1/2), (-3/2), (0.5).
    // A fraction needs parentheses, so z^3/2 is (z^3)/2.
    int exponent() {
        double val = 0;
        skip();
        bool paren = eat('(');
        bool neg = false;
        while (eat('-')) neg = !neg;
        double num = number_literal();
        if (paren && eat('/')) {
            double den = number_literal();
            if (den == 0) fail("zero denominator in exponent");
            val = num / den;
        } else {
            val = num;
        }
        if (paren && !eat(')')) fail("expected ')' after exponent");
        if (neg) val = -val;
        double tw = 2 * val;
        if (std::abs(tw - std::round(tw)) > 1e-12 || std::abs(tw) > 1e6)
            fail("exponent must be an integer or half-integer");
        return static_cast<int>(std::lround(tw));
    }
    double number_literal() {
        skip();
        const char* start = s_.c_str() + i_;
        char* end = nullptr;
        double v = std::strtod(start, &end);
        if (end == start) fail("expected number");
        i_ += static_cast<std::size_t>(end - start);
        return v;
    }
    Expr primary() {
        skip();
        if (i_ >= s_.size()) fail("unexpected end of expression");
        char c = s_[i_];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            double v = number_literal();
            if (i_ < s_.size() && s_[i_] == 'i' &&
                (i_ + 1 >= s_.size() || !std::isalnum(static_cast<unsigned char>(s_[i_ + 1])))) {
                ++i_;
                return Expr(cd(0, v));
            }
            return Expr(v);
        }
        if (eat('(')) {
            Expr e = expr();
            if (!eat(')')) fail("expected ')'");
            return e;
        }
        if (peek_ident("conj")) {
            i_ += 4;
            if (!eat('(')) fail("expected '(' after conj");
            Expr e = expr();
            if (!eat(')')) fail("expected ')'");
            return conj(e);
        }
        if (peek_ident("sqrt")) {
            i_ += 4;
            if (!eat('(')) fail("expected '(' after sqrt");
            Expr e = expr();
            if (!eat(')')) fail("expected ')'");
            return sqrt(e);
        }
        if (peek_ident("zb")) { i_ += 2; return Expr::zb(); }
        if (peek_ident("z")) { i_ += 1; return Expr::z(); }
        if (peek_ident("i")) { i_ += 1; return Expr(cd(0, 1)); }
        fail("unknown token");
    }

    std::string s_;
    std::size_t i_ = 0;
};

}  // namespace detail

inline std::string to_string(const Expr& e) { return detail::print(*e.node()); }

inline Expr parse_expr(const std::string& text) { return detail::Parser(text).parse(); }

// Subexpressions that appear as denominators (division or negative powers).
inline std::vector<Expr> denominators(const Expr& e) {
    std::vector<NodePtr> raw;
    detail::collect_denominators(e.node(), raw);
    std::vector<Expr> out;
    out.reserve(raw.size());
    for (auto& r : raw) out.emplace_back(r);
    return out;
}

}  // namespace wsurf
