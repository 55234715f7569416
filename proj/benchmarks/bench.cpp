#include <benchmark/benchmark.h>

#include "colehopf/burgers.hpp"
#include "colehopf/hopf.hpp"
#include "colehopf/linsolve.hpp"
#include "colehopf/ode.hpp"
#include "colehopf/verify.hpp"

using namespace colehopf;

namespace {

void BM_SolveHeat(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    Grid1D grid(0.0, 1.0, n);
    Expr M = Expr::constant(1.0);
    Expr ic = parse("1 + 0.5*exp(-50*(x-0.5)^2)");
    for (auto _ : state) {
        LinearField f = solve_heat(M, ic, grid, {}, 0.1, 200, 0.5);
        benchmark::DoNotOptimize(f.phi.back().data());
    }
    state.SetComplexityN(n);
}
BENCHMARK(BM_SolveHeat)->Arg(129)->Arg(257)->Arg(513)->Complexity();

void BM_DeriveTransform(benchmark::State& state) {
    ParamEnv env{{"C", 1.0}, {"alpha", 1.0}};
    Expr M = parse("1 + x^2");
    Expr H = parse("C*exp(alpha*x)");
    for (auto _ : state) {
        TransformPair pair = derive_transform(M, H, env, 0.0, 1.0);
        benchmark::DoNotOptimize(pair);
    }
}
BENCHMARK(BM_DeriveTransform);

void BM_ApplyTransform(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    Grid1D grid(0.0, 1.0, n);
    Expr M = Expr::constant(1.0);
    Expr ic = parse("1 + 0.5*exp(-50*(x-0.5)^2)");
    LinearField field = solve_heat(M, ic, grid, {}, 0.05, 100, 0.5);
    ParamEnv env{{"C", 1.0}, {"alpha", 1.0}};
    TransformPair pair = derive_transform(M, parse("C*exp(alpha*x)"), env, 0.0, 1.0);
    for (auto _ : state) {
        TransformedField tf = apply_transform(pair, field, env);
        benchmark::DoNotOptimize(tf.psi.back().data());
    }
    state.SetComplexityN(n);
}
BENCHMARK(BM_ApplyTransform)->Arg(129)->Arg(257)->Arg(513)->Complexity();

void BM_OdeResidual(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    ParamEnv env{{"a", 1.0}};
    OdeProblem problem{Expr::constant(1.0), Expr::param("a"), parse("4*a^2"),
                       Expr::constant(0.0), std::nullopt, env, 0.0, 3.0};
    Grid1D grid(0.0, 3.0, n);
    std::vector<double> psi(grid.n, -4.0);
    for (auto _ : state) {
        ResidualReport rep = ode_residual(problem, psi, grid, 1e-6);
        benchmark::DoNotOptimize(rep.linf);
    }
    state.SetComplexityN(n);
}
BENCHMARK(BM_OdeResidual)->Arg(1001)->Arg(4001)->Arg(12001)->Complexity();

}  // namespace

BENCHMARK_MAIN();
