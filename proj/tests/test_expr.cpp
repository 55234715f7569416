#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "colehopf/expr.hpp"

using namespace colehopf;

namespace {

// Random small expression trees over domain-safe constructions: division
// only by cosh (>= 1), sqrt only of cosh.
Expr random_tree(std::mt19937& rng, int depth) {
    std::uniform_real_distribution<double> cdist(0.5, 2.0);
    std::uniform_int_distribution<int> leaf(0, 2);
    if (depth == 0) {
        switch (leaf(rng)) {
            case 0: return Expr::var();
            case 1: return Expr::constant(cdist(rng));
            default: return Expr::var() * Expr::constant(cdist(rng));
        }
    }
    std::uniform_int_distribution<int> op(0, 8);
    switch (op(rng)) {
        case 0: return random_tree(rng, depth - 1) + random_tree(rng, depth - 1);
        case 1: return random_tree(rng, depth - 1) - random_tree(rng, depth - 1);
        case 2: return random_tree(rng, depth - 1) * random_tree(rng, depth - 1);
        case 3: return random_tree(rng, depth - 1) / cosh(random_tree(rng, depth - 1));
        case 4: return -random_tree(rng, depth - 1);
        case 5: return sin(random_tree(rng, depth - 1));
        case 6: return cos(random_tree(rng, depth - 1));
        case 7: return sqrt(cosh(random_tree(rng, depth - 1)));
        default: return exp(Expr::constant(cdist(rng)) * sin(random_tree(rng, depth - 1)));
    }
}

}  // namespace

TEST_CASE("parse: grammar basics") {
    CHECK(parse("x")(3.5) == 3.5);
    CHECK(parse("x").params().empty());

    Expr e = parse("C*exp(alpha*x)");
    CHECK(e.params() == std::set<std::string>{"C", "alpha"});
    CHECK(e(0.0, {{"C", 2.0}, {"alpha", 5.0}}) == doctest::Approx(2.0).epsilon(1e-15));

    Expr q = parse("1/(a*x+b)");
    CHECK(q(0.0, {{"a", 1.0}, {"b", 2.0}}) == doctest::Approx(0.5));
}

TEST_CASE("parse: precedence and unary minus") {
    CHECK(parse("2+3*4")(0.0) == 14.0);
    CHECK(parse("-x^2")(3.0) == -9.0);
    CHECK(parse("2^3^x")(1.0) == doctest::Approx(std::pow(2.0, 3.0)));
    CHECK(parse("(2+3)*4")(0.0) == 20.0);
    CHECK(parse("1e-2 + x")(0.0) == doctest::Approx(0.01));
}

TEST_CASE("parse: errors carry byte offsets") {
    CHECK_THROWS_AS(parse(""), ParseError);
    CHECK_THROWS_AS(parse("   "), ParseError);
    try {
        parse("1+*2");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.offset == 2);
    }
    CHECK_THROWS_AS(parse("foo(x)"), ParseError);
    CHECK_THROWS_AS(parse("1+2)"), ParseError);
    CHECK_THROWS_AS(parse("sin(x"), ParseError);
}

TEST_CASE("evaluate: examples and domain errors") {
    CHECK(parse("x^2")(3.0) == 9.0);
    // pole of the reciprocal-linear family
    CHECK_THROWS_AS(parse("1/(a*x+b)")(-2.0, {{"a", 1.0}, {"b", 2.0}}), EvalError);
    CHECK_THROWS_AS(parse("ln(x)")(-1.0), EvalError);
    CHECK_THROWS_AS(parse("a*x")(1.0), EvalError);  // unbound parameter
    try {
        parse("1/(x-1)")(1.0);
        FAIL("expected EvalError");
    } catch (const EvalError& e) {
        CHECK(!e.subexpr.empty());
    }
}

TEST_CASE("differentiate: closed-form rules") {
    ParamEnv env{{"alpha", 0.7}};
    Expr d = parse("exp(alpha*x)").differentiate();
    for (double x : {-1.0, 0.0, 0.5, 2.0})
        CHECK(d(x, env) == doctest::Approx(0.7 * std::exp(0.7 * x)).epsilon(1e-14));

    ParamEnv env2{{"a", 1.3}, {"b", 0.4}};
    Expr d2 = parse("1/(a*x+b)").differentiate();
    for (double x : {0.0, 1.0, 2.0}) {
        double den = 1.3 * x + 0.4;
        CHECK(d2(x, env2) == doctest::Approx(-1.3 / (den * den)).epsilon(1e-14));
    }

    // non-constant exponent rewrites through exp(b ln a)
    Expr dxx = parse("x^x").differentiate();
    double x0 = 1.7;
    double expect = std::pow(x0, x0) * (std::log(x0) + 1.0);
    CHECK(dxx(x0) == doctest::Approx(expect).epsilon(1e-13));

    CHECK_THROWS_AS(parse("x").differentiate(0), Error);
}

TEST_CASE("fold: idempotent, neutral elements collapse") {
    Expr e = parse("0 + x*1 + 0*sin(x) + x^1");
    CHECK(e.str() == parse(e.str()).str());
    CHECK(e.folded().str() == e.str());
    CHECK(e(2.0) == 4.0);

    Expr c = parse("2^3 + exp(0)");
    CHECK(c.is_constant());
    CHECK(c.constant_value() == 9.0);

    std::mt19937 rng(42);
    for (int i = 0; i < 50; ++i) {
        Expr t = random_tree(rng, 4);
        CHECK(t.folded().str() == t.folded().folded().str());
    }
}

TEST_CASE("property: linearity of differentiation") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> xs(-1.0, 1.0);
    for (int trial = 0; trial < 10; ++trial) {
        Expr a = random_tree(rng, 3), b = random_tree(rng, 3);
        Expr dsum = (a + b).differentiate();
        Expr dsep = a.differentiate() + b.differentiate();
        for (int i = 0; i < 100; ++i) {
            double x = xs(rng);
            double u = dsum(x), v = dsep(x);
            double scale = std::max({std::abs(u), std::abs(v), 1e-30});
            CHECK(std::abs(u - v) / scale <= 1e-12);
        }
    }
}

TEST_CASE("property: derivative matches central differences at order >= 1.9") {
    std::mt19937 rng(19);
    std::uniform_real_distribution<double> xs(-1.0, 1.0);
    int measured = 0;
    for (int trial = 0; trial < 40; ++trial) {
        Expr e = random_tree(rng, 4);
        Expr d = e.differentiate();
        for (int i = 0; i < 20; ++i) {
            double x = xs(rng);
            double h = 5e-3;
            auto fd = [&](double hh) { return (e(x + hh) - e(x - hh)) / (2.0 * hh); };
            double exact = d(x);
            double scale = std::max(std::abs(exact), 1.0);
            double e1 = std::abs(fd(h) - exact);
            double e2 = std::abs(fd(h / 2) - exact);
            // order is only measurable between roundoff and the h^4 regime
            if (e1 < 1e-8 * scale) continue;
            CHECK(e2 <= e1 / 3.7 + 1e-11 * scale);
            ++measured;
        }
    }
    CHECK(measured > 100);
}

TEST_CASE("property: parse/print roundtrip") {
    std::mt19937 rng(23);
    std::uniform_real_distribution<double> xs(-1.0, 1.0);
    for (int trial = 0; trial < 40; ++trial) {
        Expr e = random_tree(rng, 4);
        Expr r = parse(e.str());
        for (int i = 0; i < 20; ++i) {
            double x = xs(rng);
            double u = e(x), v = r(x);
            double scale = std::max({std::abs(u), std::abs(v), 1e-30});
            CHECK(std::abs(u - v) / scale <= 1e-14);
        }
    }
}
