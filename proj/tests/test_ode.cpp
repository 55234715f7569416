#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "colehopf/hopf.hpp"
#include "colehopf/linsolve.hpp"
#include "colehopf/ode.hpp"
#include "colehopf/verify.hpp"

using namespace colehopf;

TEST_CASE("forward_derive: the constant-coefficient example") {
    ParamEnv env{{"a", 1.0}};
    OdeProblem p{Expr::constant(1.0), Expr::param("a"), parse("4*a^2"), Expr::constant(0.0),
                 std::nullopt, env, 0.0, 3.0};
    ForwardDerivation fwd = forward_derive(p);
    CHECK(fwd.compatible);
    for (double x : {0.0, 1.5, 3.0}) {
        CHECK(fwd.pair.Q(x, env) == -2.0);
        CHECK(fwd.pair.P(x, env) == -2.0);
    }
    // constraint is identically zero: 4a^2 + 0 - 4a^2
    for (double r : fwd.constraint) CHECK(std::abs(r) <= 1e-14);
    // U-equation collapses to U' + 2aU - 2a^3 = 0
    for (double x : {0.0, 1.0}) {
        CHECK(fwd.u_ode.g(x, env) == doctest::Approx(2.0).epsilon(1e-14));
        CHECK(fwd.u_ode.h(x, env) == doctest::Approx(2.0).epsilon(1e-14));
    }
}

TEST_CASE("forward_derive: V = 0 variant violates the constraint by -4a^2") {
    ParamEnv env{{"a", 1.0}};
    OdeProblem p{Expr::constant(1.0), Expr::param("a"), Expr::constant(0.0), Expr::constant(0.0),
                 std::nullopt, env, 0.0, 3.0};
    ForwardDerivation fwd = forward_derive(p);
    CHECK(!fwd.compatible);
    // relative residual: |0 + 0 - 4a^2| / 4a^2 = 1
    for (double r : fwd.constraint) CHECK(r == doctest::Approx(-1.0).epsilon(1e-14));
}

TEST_CASE("forward_derive: rejects unreduced V1 and vanishing F") {
    OdeProblem with_v1{Expr::constant(1.0), Expr::constant(1.0), Expr::constant(0.0),
                       Expr::constant(0.0), parse("-2/x"), {}, 1.0, 2.0};
    CHECK_THROWS_AS(forward_derive(with_v1), Error);

    OdeProblem f_zero{parse("x - 0.5"), Expr::constant(1.0), Expr::constant(0.0),
                      Expr::constant(0.0), std::nullopt, {}, 0.0, 1.0};
    CHECK_THROWS_AS(forward_derive(f_zero), DegenerateError);
}

TEST_CASE("solve_u_ode: closed forms") {
    Grid1D grid(0.0, 3.0, 601);

    // constant coefficients, U0 = 2: U = e^{-2x} + 1
    UOde eq{Expr::constant(2.0), Expr::constant(2.0)};
    LinearPotential U = solve_u_ode(eq, 2.0, grid);
    for (int i = 0; i < grid.n; ++i) {
        double x = grid.point(i);
        CHECK(std::abs(U(x) - (std::exp(-2.0 * x) + 1.0)) <= 1e-8);
    }

    LinearPotential Uc = solve_u_ode(UOde{Expr::constant(0.0), Expr::constant(0.0)}, 3.0, grid);
    for (int i = 0; i < grid.n; ++i) CHECK(std::abs(Uc(grid.point(i)) - 3.0) <= 1e-12);

    LinearPotential Ue = solve_u_ode(UOde{Expr::constant(1.0), Expr::constant(0.0)}, 1.0, grid);
    for (int i = 0; i < grid.n; ++i)
        CHECK(std::abs(Ue(grid.point(i)) - std::exp(-grid.point(i))) <= 1e-8);
}

TEST_CASE("reverse_synthesize: recovers the example problem") {
    ParamEnv env{{"a", 1.0}, {"C", 1.0}};
    Expr U = parse("C*exp(-2*a*x) + a^2");
    OdeProblem p = reverse_synthesize(U, parse("-2*a"), Expr::constant(-2.0), env, 0.0, 3.0);
    for (double x : {0.0, 1.0, 2.5}) {
        CHECK(p.F(x, env) == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(p.W(x, env) == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(p.V(x, env) == doctest::Approx(4.0).epsilon(1e-14));
        CHECK(std::abs(p.S(x, env)) <= 1e-13);
    }
}

TEST_CASE("reverse_synthesize: trivial cases") {
    OdeProblem p = reverse_synthesize(Expr::constant(0.0), Expr::constant(0.0),
                                      Expr::constant(-2.0), {}, 0.0, 1.0);
    for (double x : {0.0, 1.0}) {
        CHECK(p.F(x, {}) == 1.0);
        CHECK(p.W(x, {}) == 0.0);
        CHECK(p.V(x, {}) == 0.0);
        CHECK(p.S(x, {}) == 0.0);
    }

    // constant potential: S = 2(Q' + P)U = 0 when P = 0
    OdeProblem pk = reverse_synthesize(Expr::param("k"), Expr::constant(0.0),
                                       Expr::constant(-2.0), {{"k", 5.0}}, 0.0, 1.0);
    for (double x : {0.0, 0.5, 1.0}) CHECK(pk.S(x, pk.env) == 0.0);

    CHECK_THROWS_AS(reverse_synthesize(Expr::constant(0.0), Expr::constant(0.0),
                                       parse("x - 0.5"), {}, 0.0, 1.0),
                    DegenerateError);
}

TEST_CASE("property: reverse then forward is the identity") {
    std::mt19937 rng(31);
    std::uniform_real_distribution<double> amp(-0.4, 0.4);
    std::uniform_real_distribution<double> freq(0.5, 2.0);
    Grid1D grid(0.0, 2.0, 101);

    for (int trial = 0; trial < 20; ++trial) {
        ParamEnv env{{"q0", (rng() % 2 ? 2.0 : -2.0)}, {"q1", amp(rng)}, {"q2", freq(rng)},
                     {"p1", amp(rng)},                 {"p2", freq(rng)}, {"u1", amp(rng)},
                     {"u2", freq(rng)}};
        Expr Q = parse("q0 + q1*sin(q2*x)");
        Expr P = parse("p1*cos(p2*x)");
        Expr U = parse("1 + u1*sin(u2*x)");

        OdeProblem p = reverse_synthesize(U, P, Q, env, grid.x0, grid.x1);
        ForwardDerivation fwd = forward_derive(p);
        CHECK(fwd.compatible);
        for (double r : fwd.constraint) CHECK(std::abs(r) <= 1e-8);

        Expr Up = U.differentiate();
        for (int i = 0; i < grid.n; i += 10) {
            double x = grid.point(i);
            CHECK(std::abs(fwd.pair.Q(x, env) - Q(x, env)) <=
                  1e-10 * std::abs(Q(x, env)));
            double pv = P(x, env);
            CHECK(std::abs(fwd.pair.P(x, env) - pv) <= 1e-10 * std::max(1.0, std::abs(pv)));
            // the chosen U satisfies the emitted U-equation
            double resid = Up(x, env) + fwd.u_ode.g(x, env) * U(x, env) - fwd.u_ode.h(x, env);
            CHECK(std::abs(resid) <= 1e-8);
        }
    }
}

TEST_CASE("reduce_v1: identity when V1 absent") {
    OdeProblem p{Expr::constant(1.0), Expr::constant(1.0), parse("4"), Expr::constant(0.0),
                 std::nullopt, {}, 0.0, 1.0};
    V1Reduction red = reduce_v1(p);
    for (double x : {0.0, 0.5, 1.0}) {
        CHECK(red.p(x) == 1.0);
        CHECK(red.f_tilde(x) == 1.0);
        CHECK(red.w_tilde(x) == 1.0);
        CHECK(red.v_tilde(x, {}) == 4.0);
        CHECK(red.s_tilde(x) == 0.0);
    }
}

TEST_CASE("reduce_v1: V1 = -2/x integrates to p = x") {
    OdeProblem p{Expr::constant(1.0), Expr::constant(1.0), parse("4"), Expr::constant(0.0),
                 parse("-2/x"), {}, 1.0, 2.0};
    V1Reduction red = reduce_v1(p);
    for (double x = 1.0; x <= 2.0; x += 0.1) CHECK(red.p(x) == doctest::Approx(x).epsilon(1e-9));
}

TEST_CASE("reduce_v1: reduced problem feeds the pipeline, psi = xi/p solves the original") {
    // Original problem built from the constant-coefficient example scaled by
    // p = x on [1, 2]: F = x, W = x + 1, V = 4, S = 0, V1 = -2/x.
    OdeProblem original{Expr::var(), parse("x + 1"), parse("4"), Expr::constant(0.0),
                        parse("-2/x"), {}, 1.0, 2.0};
    V1Reduction red = reduce_v1(original);

    // the reduction must recover the canonical quadruple
    for (double x = 1.0; x <= 2.0; x += 0.25) {
        CHECK(red.f_tilde(x) == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(red.w_tilde(x) == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(red.v_tilde(x, {}) == doctest::Approx(4.0).epsilon(1e-12));
        CHECK(red.s_tilde(x) == 0.0);
    }

    // solve the reduced (canonical) problem end to end
    Grid1D grid(1.0, 2.0, 4001);
    ParamEnv env{{"a", 1.0}};
    OdeProblem reduced{Expr::constant(1.0), Expr::param("a"), parse("4*a^2"),
                       Expr::constant(0.0), std::nullopt, env, 1.0, 2.0};
    ForwardDerivation fwd = forward_derive(reduced);
    REQUIRE(fwd.compatible);
    LinearPotential U = solve_u_ode(fwd.u_ode, 2.0, grid, env);
    LinearField field = solve_linear_ode2(U, 1.0, 0.0, grid);
    TransformedField xi = apply_transform(fwd.pair, field, env);
    REQUIRE(!xi.degenerate);

    // psi = xi / p satisfies the original equation including the V1 term
    std::vector<double> psi(grid.n);
    for (int i = 0; i < grid.n; ++i) psi[i] = xi.psi[0][i] / red.p(grid.point(i));
    ResidualReport rep = ode_residual(original, psi, grid, 1e-6, xi.mask[0]);
    CHECK(rep.pass);
    CHECK(rep.linf <= 1e-6);
}
