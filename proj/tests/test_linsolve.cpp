#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "colehopf/linsolve.hpp"

using namespace colehopf;

namespace {

constexpr double kPi = std::numbers::pi;

double linf_error_vs(const std::vector<double>& got, auto&& exact, const Grid1D& grid) {
    double e = 0.0;
    for (int i = 0; i < grid.n; ++i) e = std::max(e, std::abs(got[i] - exact(grid.point(i))));
    return e;
}

// Free-space heat kernel convolution by Simpson quadrature; independent of
// the solver's implicit stencil.
double heat_kernel_convolution(double x, double t, auto&& ic) {
    const double half_width = 12.0 * std::sqrt(t);
    const int n = 4000;  // even
    const double a = x - half_width, h = 2.0 * half_width / n;
    auto f = [&](double y) {
        double d = x - y;
        return std::exp(-d * d / (4.0 * t)) / std::sqrt(4.0 * kPi * t) * ic(y);
    };
    double s = f(a) + f(a + n * h);
    for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
    return s * h / 3.0;
}

}  // namespace

TEST_CASE("solve_heat: sin(pi x) decay against separation of variables") {
    Grid1D grid(0.0, 1.0, 257);
    Expr ic = parse("sin(3.14159265358979323846*x)");
    LinearField f = solve_heat(Expr::constant(1.0), ic, grid, {}, 0.1, 1000, 0.5);
    CHECK(f.levels() == 1001);
    double decay = std::exp(-kPi * kPi * 0.1);
    double err = linf_error_vs(f.phi.back(), [&](double x) { return decay * std::sin(kPi * x); },
                               grid);
    CHECK(err <= 1e-4);
    // phi' accuracy at the final level
    double derr = linf_error_vs(
        f.dphi.back(), [&](double x) { return decay * kPi * std::cos(kPi * x); }, grid);
    CHECK(derr <= 1e-4);
}

TEST_CASE("solve_heat: constant solution is preserved to roundoff") {
    Grid1D grid(0.0, 1.0, 65);
    LinearField f = solve_heat(Expr::constant(1.0), Expr::constant(1.0), grid, {}, 0.5, 50, 0.5);
    for (const auto& level : f.phi)
        for (double v : level) CHECK(std::abs(v - 1.0) <= 1e-13);
}

TEST_CASE("solve_heat: Gaussian bump matches heat-kernel convolution") {
    Grid1D grid(0.0, 1.0, 257);
    Expr ic = parse("1 + 0.5*exp(-50*(x-0.5)^2)");
    auto ic_fn = [](double y) { return 1.0 + 0.5 * std::exp(-50.0 * (y - 0.5) * (y - 0.5)); };
    LinearField f = solve_heat(Expr::constant(1.0), ic, grid, {}, 0.01, 1000, 0.5);
    for (int i = 0; i < grid.n; i += 8) {
        double x = grid.point(i);
        if (x < 0.1 || x > 0.9) continue;  // convolution ignores the walls
        double oracle = heat_kernel_convolution(x, 0.01, ic_fn);
        CHECK(std::abs(f.phi.back()[i] - oracle) <= 1e-3);
    }
}

TEST_CASE("solve_heat: spatial convergence order >= 1.9") {
    Expr ic = parse("sin(3.14159265358979323846*x)");
    auto err_at = [&](int n) {
        Grid1D grid(0.0, 1.0, n);
        double dt = 0.1 * grid.dx();
        int nt = static_cast<int>(std::round(0.1 / dt));
        LinearField f = solve_heat(Expr::constant(1.0), ic, grid, {}, 0.1, nt, 0.5);
        double decay = std::exp(-kPi * kPi * 0.1);
        return linf_error_vs(f.phi.back(),
                             [&](double x) { return decay * std::sin(kPi * x); }, grid);
    };
    double e1 = err_at(65), e2 = err_at(129);
    CHECK(e1 / e2 >= 3.6);
}

TEST_CASE("solve_heat: discrete maximum principle at theta = 1") {
    Grid1D grid(0.0, 1.0, 129);
    Expr ic = parse("1 + 0.5*exp(-50*(x-0.5)^2)");
    LinearField f = solve_heat(parse("0.5 + x"), ic, grid, {}, 0.2, 200, 1.0);
    double lo = 1e300, hi = -1e300;
    for (double v : f.phi.front()) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    for (const auto& level : f.phi)
        for (double v : level) {
            CHECK(v >= lo - 1e-12);
            CHECK(v <= hi + 1e-12);
        }
}

TEST_CASE("solve_heat: input validation") {
    Grid1D grid(0.0, 1.0, 65);
    CHECK_THROWS_AS(solve_heat(parse("x - 0.5"), Expr::constant(1.0), grid, {}, 0.1, 10, 0.5),
                    DegenerateError);
    CHECK_THROWS_AS(solve_heat(Expr::constant(1.0), Expr::constant(1.0), grid, {}, 0.1, 0, 0.5),
                    Error);
    CHECK_THROWS_AS(solve_heat(Expr::constant(1.0), Expr::constant(1.0), grid, {}, 0.1, 10, 0.3),
                    Error);
}

TEST_CASE("solve_linear_ode2: U = 0 gives the exact line") {
    Grid1D grid(0.0, 2.0, 201);
    LinearField f = solve_linear_ode2(LinearPotential(Expr::constant(0.0), {}), 1.0, 2.0, grid);
    for (int i = 0; i < grid.n; ++i) {
        CHECK(std::abs(f.phi[0][i] - (1.0 + 2.0 * grid.point(i))) <= 1e-12);
        CHECK(std::abs(f.dphi[0][i] - 2.0) <= 1e-12);
    }
}

TEST_CASE("solve_linear_ode2: U = 1 gives cosh") {
    Grid1D grid(0.0, 2.0, 201);
    LinearField f = solve_linear_ode2(LinearPotential(Expr::constant(1.0), {}), 1.0, 0.0, grid);
    for (int i = 0; i < grid.n; ++i)
        CHECK(std::abs(f.phi[0][i] - std::cosh(grid.point(i))) <= 1e-9);
}

TEST_CASE("solve_linear_ode2: decaying-exponential potential vs fixed-step RK4 oracle") {
    Grid1D grid(0.0, 3.0, 301);
    auto U = [](double x) { return std::exp(-2.0 * x) + 1.0; };
    LinearField f = solve_linear_ode2(LinearPotential(parse("exp(-2*x) + 1"), {}), 1.0, 0.0, grid);

    // independent classical RK4 at 10x the output resolution
    double y0 = 1.0, y1 = 0.0, x = 0.0;
    const double h = grid.dx() / 10.0;
    auto rhs = [&](double xx, double a, double b, double& da, double& db) {
        da = b;
        db = U(xx) * a;
    };
    int idx = 0;
    for (int i = 0; i <= 3000; ++i) {
        if (i % 10 == 0) {
            CHECK(std::abs(f.phi[0][idx] - y0) <= 1e-8 * std::max(1.0, std::abs(y0)));
            ++idx;
        }
        double k1a, k1b, k2a, k2b, k3a, k3b, k4a, k4b;
        rhs(x, y0, y1, k1a, k1b);
        rhs(x + h / 2, y0 + h / 2 * k1a, y1 + h / 2 * k1b, k2a, k2b);
        rhs(x + h / 2, y0 + h / 2 * k2a, y1 + h / 2 * k2b, k3a, k3b);
        rhs(x + h, y0 + h * k3a, y1 + h * k3b, k4a, k4b);
        y0 += h / 6 * (k1a + 2 * k2a + 2 * k3a + k4a);
        y1 += h / 6 * (k1b + 2 * k2b + 2 * k3b + k4b);
        x += h;
    }
    // positivity needed downstream by the transform
    for (double v : f.phi[0]) CHECK(v > 0.0);
}

TEST_CASE("solve_linear_ode2: Wronskian of independent solutions is constant") {
    Grid1D grid(0.0, 2.0, 401);
    LinearPotential U(parse("sin(x) + 2"), {});
    LinearField a = solve_linear_ode2(U, 1.0, 0.0, grid);
    LinearField b = solve_linear_ode2(U, 0.0, 1.0, grid);
    for (int i = 0; i < grid.n; ++i) {
        double w = a.phi[0][i] * b.dphi[0][i] - b.phi[0][i] * a.dphi[0][i];
        CHECK(std::abs(w - 1.0) <= 1e-8);
    }
}
