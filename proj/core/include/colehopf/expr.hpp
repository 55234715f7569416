#pragma once

#include <map>
#include <memory>
#include <set>
#include <string>
#include <string_view>

#include "colehopf/errors.hpp"

namespace colehopf {

/// Bindings for the named real parameters of an expression. Evaluating an
/// expression with an unbound parameter is an error, never a default.
using ParamEnv = std::map<std::string, double, std::less<>>;

namespace detail {
struct Node;
using NodePtr = std::shared_ptr<const Node>;
}  // namespace detail

/// Immutable symbolic expression in one variable `x` with named real
/// parameters. Construction folds constants and the neutral elements
/// (+0, -0, *1, *0, /1, ^1); no further simplification is attempted.
class Expr {
public:
    /// The constant 0.
    Expr();

    static Expr constant(double v);
    static Expr var();
    static Expr param(std::string name);

    /// Point evaluation. Throws EvalError on unbound parameters and on
    /// domain violations (non-finite result), naming the offending
    /// subexpression.
    double operator()(double x, const ParamEnv& env = {}) const;

    /// d^order/dx^order, constant-folded. order >= 1.
    Expr differentiate(int order = 1) const;

    /// Rebuilds the tree through the folding constructors. Idempotent.
    Expr folded() const;

    /// Parseable text form: parse(e.str()) evaluates pointwise equal to e.
    std::string str() const;

    bool is_constant() const;
    /// Value if the expression folded to a constant, NaN otherwise.
    double constant_value() const;

    /// Names of all free parameters.
    std::set<std::string> params() const;

    friend Expr operator+(const Expr&, const Expr&);
    friend Expr operator-(const Expr&, const Expr&);
    friend Expr operator*(const Expr&, const Expr&);
    friend Expr operator/(const Expr&, const Expr&);
    friend Expr operator-(const Expr&);
    friend Expr pow(const Expr& base, const Expr& exponent);

    friend Expr exp(const Expr&);
    friend Expr ln(const Expr&);
    friend Expr sin(const Expr&);
    friend Expr cos(const Expr&);
    friend Expr tan(const Expr&);
    friend Expr sqrt(const Expr&);
    friend Expr sinh(const Expr&);
    friend Expr cosh(const Expr&);

private:
    explicit Expr(detail::NodePtr n) : node_(std::move(n)) {}
    detail::NodePtr node_;
};

inline Expr operator+(const Expr& a, double b) { return a + Expr::constant(b); }
inline Expr operator+(double a, const Expr& b) { return Expr::constant(a) + b; }
inline Expr operator-(const Expr& a, double b) { return a - Expr::constant(b); }
inline Expr operator-(double a, const Expr& b) { return Expr::constant(a) - b; }
inline Expr operator*(const Expr& a, double b) { return a * Expr::constant(b); }
inline Expr operator*(double a, const Expr& b) { return Expr::constant(a) * b; }
inline Expr operator/(const Expr& a, double b) { return a / Expr::constant(b); }
inline Expr operator/(double a, const Expr& b) { return Expr::constant(a) / b; }

/// Parses expression text per the grammar:
///   expr   := term (("+"|"-") term)*
///   term   := unary (("*"|"/") unary)*
///   unary  := "-" unary | power
///   power  := atom ("^" unary)?
///   atom   := NUMBER | IDENT | IDENT "(" expr ")" | "(" expr ")"
/// Reserved idents: x, exp, ln, sin, cos, tan, sqrt, sinh, cosh.
/// Other identifiers become parameters. Throws ParseError with byte offset.
Expr parse(std::string_view src);

}  // namespace colehopf
