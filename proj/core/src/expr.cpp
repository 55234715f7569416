#include "colehopf/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <utility>
#include <vector>

namespace colehopf {
namespace detail {

enum class Kind { Const, Var, Param, Neg, Add, Sub, Mul, Div, Pow, Fn };

enum class Fun { Exp, Ln, Sin, Cos, Tan, Sqrt, Sinh, Cosh };

struct Node {
    Kind kind;
    double value = 0.0;    // Const
    std::string name;      // Param
    Fun fun = Fun::Exp;    // Fn
    NodePtr a, b;
};

namespace {

NodePtr make_const(double v) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Const;
    n->value = v;
    return n;
}

const NodePtr& zero() {
    static NodePtr n = make_const(0.0);
    return n;
}
const NodePtr& one() {
    static NodePtr n = make_const(1.0);
    return n;
}

bool is_const(const NodePtr& n, double* v = nullptr) {
    if (n->kind != Kind::Const) return false;
    if (v) *v = n->value;
    return true;
}
bool is_const_eq(const NodePtr& n, double c) {
    return n->kind == Kind::Const && n->value == c;
}

NodePtr neg(const NodePtr& a);

NodePtr add(const NodePtr& a, const NodePtr& b) {
    double va, vb;
    if (is_const(a, &va) && is_const(b, &vb)) return make_const(va + vb);
    if (is_const_eq(a, 0.0)) return b;
    if (is_const_eq(b, 0.0)) return a;
    auto n = std::make_shared<Node>();
    n->kind = Kind::Add;
    n->a = a;
    n->b = b;
    return n;
}

NodePtr sub(const NodePtr& a, const NodePtr& b) {
    double va, vb;
    if (is_const(a, &va) && is_const(b, &vb)) return make_const(va - vb);
    if (is_const_eq(b, 0.0)) return a;
    if (is_const_eq(a, 0.0)) return neg(b);
    auto n = std::make_shared<Node>();
    n->kind = Kind::Sub;
    n->a = a;
    n->b = b;
    return n;
}

NodePtr mul(const NodePtr& a, const NodePtr& b) {
    double va, vb;
    if (is_const(a, &va) && is_const(b, &vb)) return make_const(va * vb);
    if (is_const_eq(a, 0.0) || is_const_eq(b, 0.0)) return zero();
    if (is_const_eq(a, 1.0)) return b;
    if (is_const_eq(b, 1.0)) return a;
    auto n = std::make_shared<Node>();
    n->kind = Kind::Mul;
    n->a = a;
    n->b = b;
    return n;
}

NodePtr div(const NodePtr& a, const NodePtr& b) {
    double va, vb;
    if (is_const(a, &va) && is_const(b, &vb) && vb != 0.0) return make_const(va / vb);
    if (is_const_eq(a, 0.0)) return zero();
    if (is_const_eq(b, 1.0)) return a;
    auto n = std::make_shared<Node>();
    n->kind = Kind::Div;
    n->a = a;
    n->b = b;
    return n;
}

NodePtr neg(const NodePtr& a) {
    double va;
    if (is_const(a, &va)) return make_const(-va);
    if (a->kind == Kind::Neg) return a->a;
    auto n = std::make_shared<Node>();
    n->kind = Kind::Neg;
    n->a = a;
    return n;
}

double fun_eval(Fun f, double v) {
    switch (f) {
        case Fun::Exp: return std::exp(v);
        case Fun::Ln: return std::log(v);
        case Fun::Sin: return std::sin(v);
        case Fun::Cos: return std::cos(v);
        case Fun::Tan: return std::tan(v);
        case Fun::Sqrt: return std::sqrt(v);
        case Fun::Sinh: return std::sinh(v);
        case Fun::Cosh: return std::cosh(v);
    }
    return std::nan("");
}

NodePtr fn(Fun f, const NodePtr& a) {
    double va;
    if (is_const(a, &va)) {
        double r = fun_eval(f, va);
        if (std::isfinite(r)) return make_const(r);
    }
    auto n = std::make_shared<Node>();
    n->kind = Kind::Fn;
    n->fun = f;
    n->a = a;
    return n;
}

NodePtr pw(const NodePtr& a, const NodePtr& b) {
    double va, vb;
    if (is_const(a, &va) && is_const(b, &vb)) {
        double r = std::pow(va, vb);
        if (std::isfinite(r)) return make_const(r);
    }
    if (is_const_eq(b, 1.0)) return a;
    if (is_const_eq(b, 0.0)) return one();
    auto n = std::make_shared<Node>();
    n->kind = Kind::Pow;
    n->a = a;
    n->b = b;
    return n;
}

const char* fun_name(Fun f) {
    switch (f) {
        case Fun::Exp: return "exp";
        case Fun::Ln: return "ln";
        case Fun::Sin: return "sin";
        case Fun::Cos: return "cos";
        case Fun::Tan: return "tan";
        case Fun::Sqrt: return "sqrt";
        case Fun::Sinh: return "sinh";
        case Fun::Cosh: return "cosh";
    }
    return "?";
}

// Printer with minimal parenthesization by precedence.
// Levels: 0 add/sub, 1 mul/div, 2 unary minus, 3 pow, 4 atom.
int prec(const Node& n) {
    switch (n.kind) {
        case Kind::Add:
        case Kind::Sub: return 0;
        case Kind::Mul:
        case Kind::Div: return 1;
        case Kind::Neg: return 2;
        case Kind::Pow: return 3;
        default: return 4;
    }
}

void print_node(const Node& n, std::string& out);

void print_child(const Node& c, int min_prec, std::string& out) {
    if (prec(c) < min_prec) {
        out += '(';
        print_node(c, out);
        out += ')';
    } else {
        print_node(c, out);
    }
}

void print_node(const Node& n, std::string& out) {
    switch (n.kind) {
        case Kind::Const: {
            char buf[40];
            if (n.value < 0) {
                std::snprintf(buf, sizeof buf, "(%.17g)", n.value);
            } else {
                std::snprintf(buf, sizeof buf, "%.17g", n.value);
            }
            out += buf;
            break;
        }
        case Kind::Var: out += 'x'; break;
        case Kind::Param: out += n.name; break;
        case Kind::Neg:
            out += '-';
            print_child(*n.a, 2, out);
            break;
        case Kind::Add:
            print_child(*n.a, 0, out);
            out += " + ";
            print_child(*n.b, 1, out);
            break;
        case Kind::Sub:
            print_child(*n.a, 0, out);
            out += " - ";
            print_child(*n.b, 1, out);
            break;
        case Kind::Mul:
            print_child(*n.a, 1, out);
            out += "*";
            print_child(*n.b, 2, out);
            break;
        case Kind::Div:
            print_child(*n.a, 1, out);
            out += "/";
            // force parens on any non-atom denominator
            print_child(*n.b, 4, out);
            break;
        case Kind::Pow:
            print_child(*n.a, 4, out);
            out += "^";
            print_child(*n.b, 4, out);
            break;
        case Kind::Fn:
            out += fun_name(n.fun);
            out += '(';
            print_node(*n.a, out);
            out += ')';
            break;
    }
}

std::string node_str(const NodePtr& n) {
    std::string s;
    print_node(*n, s);
    return s;
}

double eval_node(const Node& n, double x, const ParamEnv& env) {
    double r;
    switch (n.kind) {
        case Kind::Const: return n.value;
        case Kind::Var: return x;
        case Kind::Param: {
            auto it = env.find(n.name);
            if (it == env.end()) throw EvalError("unbound parameter '" + n.name + "'", n.name);
            return it->second;
        }
        case Kind::Neg: return -eval_node(*n.a, x, env);
        case Kind::Add: r = eval_node(*n.a, x, env) + eval_node(*n.b, x, env); break;
        case Kind::Sub: r = eval_node(*n.a, x, env) - eval_node(*n.b, x, env); break;
        case Kind::Mul: r = eval_node(*n.a, x, env) * eval_node(*n.b, x, env); break;
        case Kind::Div: r = eval_node(*n.a, x, env) / eval_node(*n.b, x, env); break;
        case Kind::Pow: r = std::pow(eval_node(*n.a, x, env), eval_node(*n.b, x, env)); break;
        case Kind::Fn: r = fun_eval(n.fun, eval_node(*n.a, x, env)); break;
        default: r = std::nan("");
    }
    if (!std::isfinite(r)) {
        std::string where;
        print_node(n, where);
        throw EvalError("non-finite result", where);
    }
    return r;
}

NodePtr diff_node(const NodePtr& n);

NodePtr diff_fn(const Node& n) {
    const NodePtr& a = n.a;
    NodePtr da = diff_node(a);
    switch (n.fun) {
        case Fun::Exp: return mul(fn(Fun::Exp, a), da);
        case Fun::Ln: return div(da, a);
        case Fun::Sin: return mul(fn(Fun::Cos, a), da);
        case Fun::Cos: return neg(mul(fn(Fun::Sin, a), da));
        case Fun::Tan: return div(da, pw(fn(Fun::Cos, a), make_const(2.0)));
        case Fun::Sqrt: return div(da, mul(make_const(2.0), fn(Fun::Sqrt, a)));
        case Fun::Sinh: return mul(fn(Fun::Cosh, a), da);
        case Fun::Cosh: return mul(fn(Fun::Sinh, a), da);
    }
    return zero();
}

NodePtr diff_node(const NodePtr& n) {
    switch (n->kind) {
        case Kind::Const:
        case Kind::Param: return zero();
        case Kind::Var: return one();
        case Kind::Neg: return neg(diff_node(n->a));
        case Kind::Add: return add(diff_node(n->a), diff_node(n->b));
        case Kind::Sub: return sub(diff_node(n->a), diff_node(n->b));
        case Kind::Mul: return add(mul(diff_node(n->a), n->b), mul(n->a, diff_node(n->b)));
        case Kind::Div:
            return div(sub(mul(diff_node(n->a), n->b), mul(n->a, diff_node(n->b))),
                       pw(n->b, make_const(2.0)));
        case Kind::Pow: {
            double c;
            if (is_const(n->b, &c)) {
                // power rule: d(a^c) = c a^(c-1) a'
                return mul(mul(n->b, pw(n->a, make_const(c - 1.0))), diff_node(n->a));
            }
            // non-constant exponent: rewrite a^b = exp(b ln a) first
            NodePtr rewritten = fn(Fun::Exp, mul(n->b, fn(Fun::Ln, n->a)));
            return diff_node(rewritten);
        }
        case Kind::Fn: return diff_fn(*n);
    }
    return zero();
}

NodePtr refold(const NodePtr& n) {
    switch (n->kind) {
        case Kind::Const:
        case Kind::Var:
        case Kind::Param: return n;
        case Kind::Neg: return neg(refold(n->a));
        case Kind::Add: return add(refold(n->a), refold(n->b));
        case Kind::Sub: return sub(refold(n->a), refold(n->b));
        case Kind::Mul: return mul(refold(n->a), refold(n->b));
        case Kind::Div: return div(refold(n->a), refold(n->b));
        case Kind::Pow: return pw(refold(n->a), refold(n->b));
        case Kind::Fn: return fn(n->fun, refold(n->a));
    }
    return n;
}

void collect_params(const Node& n, std::set<std::string>& out) {
    if (n.kind == Kind::Param) out.insert(n.name);
    if (n.a) collect_params(*n.a, out);
    if (n.b) collect_params(*n.b, out);
}

}  // namespace
}  // namespace detail

using detail::Node;
using detail::NodePtr;

Expr::Expr() : node_(detail::zero()) {}

Expr Expr::constant(double v) { return Expr(detail::make_const(v)); }

Expr Expr::var() {
    auto n = std::make_shared<Node>();
    n->kind = detail::Kind::Var;
    return Expr(std::move(n));
}

Expr Expr::param(std::string name) {
    auto n = std::make_shared<Node>();
    n->kind = detail::Kind::Param;
    n->name = std::move(name);
    return Expr(std::move(n));
}

double Expr::operator()(double x, const ParamEnv& env) const {
    return detail::eval_node(*node_, x, env);
}

Expr Expr::differentiate(int order) const {
    if (order < 1) throw Error("differentiate: order must be >= 1");
    NodePtr n = node_;
    for (int i = 0; i < order; ++i) n = detail::diff_node(n);
    return Expr(std::move(n));
}

Expr Expr::folded() const { return Expr(detail::refold(node_)); }

std::string Expr::str() const { return detail::node_str(node_); }

bool Expr::is_constant() const { return node_->kind == detail::Kind::Const; }

double Expr::constant_value() const {
    return is_constant() ? node_->value : std::nan("");
}

std::set<std::string> Expr::params() const {
    std::set<std::string> out;
    detail::collect_params(*node_, out);
    return out;
}

Expr operator+(const Expr& a, const Expr& b) { return Expr(detail::add(a.node_, b.node_)); }
Expr operator-(const Expr& a, const Expr& b) { return Expr(detail::sub(a.node_, b.node_)); }
Expr operator*(const Expr& a, const Expr& b) { return Expr(detail::mul(a.node_, b.node_)); }
Expr operator/(const Expr& a, const Expr& b) { return Expr(detail::div(a.node_, b.node_)); }
Expr operator-(const Expr& a) { return Expr(detail::neg(a.node_)); }
Expr pow(const Expr& a, const Expr& b) { return Expr(detail::pw(a.node_, b.node_)); }

Expr exp(const Expr& a) { return Expr(detail::fn(detail::Fun::Exp, a.node_)); }
Expr ln(const Expr& a) { return Expr(detail::fn(detail::Fun::Ln, a.node_)); }
Expr sin(const Expr& a) { return Expr(detail::fn(detail::Fun::Sin, a.node_)); }
Expr cos(const Expr& a) { return Expr(detail::fn(detail::Fun::Cos, a.node_)); }
Expr tan(const Expr& a) { return Expr(detail::fn(detail::Fun::Tan, a.node_)); }
Expr sqrt(const Expr& a) { return Expr(detail::fn(detail::Fun::Sqrt, a.node_)); }
Expr sinh(const Expr& a) { return Expr(detail::fn(detail::Fun::Sinh, a.node_)); }
Expr cosh(const Expr& a) { return Expr(detail::fn(detail::Fun::Cosh, a.node_)); }

// ---------------------------------------------------------------------------
// Recursive-descent parser
// ---------------------------------------------------------------------------

namespace {

struct Parser {
    std::string_view src;
    std::size_t pos = 0;

    void skip_ws() {
        while (pos < src.size() && std::isspace(static_cast<unsigned char>(src[pos]))) ++pos;
    }

    bool eof() {
        skip_ws();
        return pos >= src.size();
    }

    char peek() {
        skip_ws();
        return pos < src.size() ? src[pos] : '\0';
    }

    bool accept(char c) {
        if (peek() == c) {
            ++pos;
            return true;
        }
        return false;
    }

    void expect(char c) {
        if (!accept(c)) throw ParseError(std::string("expected '") + c + "'", pos);
    }

    Expr parse_expr() {
        Expr e = parse_term();
        for (;;) {
            if (accept('+')) {
                e = e + parse_term();
            } else if (accept('-')) {
                e = e - parse_term();
            } else {
                return e;
            }
        }
    }

    Expr parse_term() {
        Expr e = parse_unary();
        for (;;) {
            if (accept('*')) {
                e = e * parse_unary();
            } else if (accept('/')) {
                e = e / parse_unary();
            } else {
                return e;
            }
        }
    }

    Expr parse_unary() {
        if (accept('-')) return -parse_unary();
        return parse_power();
    }

    Expr parse_power() {
        Expr base = parse_atom();
        if (accept('^')) return pow(base, parse_unary());
        return base;
    }

    Expr parse_atom() {
        char c = peek();
        if (c == '(') {
            ++pos;
            Expr e = parse_expr();
            expect(')');
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_ident();
        throw ParseError("expected number, identifier or '('", pos);
    }

    Expr parse_number() {
        skip_ws();
        std::size_t start = pos;
        while (pos < src.size() &&
               (std::isdigit(static_cast<unsigned char>(src[pos])) || src[pos] == '.'))
            ++pos;
        if (pos < src.size() && (src[pos] == 'e' || src[pos] == 'E')) {
            std::size_t save = pos++;
            if (pos < src.size() && (src[pos] == '+' || src[pos] == '-')) ++pos;
            if (pos < src.size() && std::isdigit(static_cast<unsigned char>(src[pos]))) {
                while (pos < src.size() && std::isdigit(static_cast<unsigned char>(src[pos]))) ++pos;
            } else {
                pos = save;  // 'e' belongs to an identifier that follows, not this number
            }
        }
        std::string text(src.substr(start, pos - start));
        try {
            std::size_t used = 0;
            double v = std::stod(text, &used);
            if (used != text.size()) throw std::invalid_argument(text);
            return Expr::constant(v);
        } catch (const std::exception&) {
            throw ParseError("malformed number '" + text + "'", start);
        }
    }

    Expr parse_ident() {
        skip_ws();
        std::size_t start = pos;
        while (pos < src.size() && (std::isalnum(static_cast<unsigned char>(src[pos])) || src[pos] == '_'))
            ++pos;
        std::string name(src.substr(start, pos - start));
        if (peek() == '(') {
            ++pos;
            Expr arg = parse_expr();
            expect(')');
            if (name == "exp") return exp(arg);
            if (name == "ln") return ln(arg);
            if (name == "sin") return sin(arg);
            if (name == "cos") return cos(arg);
            if (name == "tan") return tan(arg);
            if (name == "sqrt") return sqrt(arg);
            if (name == "sinh") return sinh(arg);
            if (name == "cosh") return cosh(arg);
            throw ParseError("unknown function '" + name + "'", start);
        }
        if (name == "x") return Expr::var();
        return Expr::param(std::move(name));
    }
};

}  // namespace

Expr parse(std::string_view src) {
    Parser p{src};
    if (p.eof()) throw ParseError("empty input", 0);
    Expr e = p.parse_expr();
    if (!p.eof()) throw ParseError("trailing input", p.pos);
    return e;
}

}  // namespace colehopf
