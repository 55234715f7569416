#include "colehopf/ode.hpp"

#include <array>
#include <cmath>

#include "rk45.hpp"

namespace colehopf {

namespace {

void check_nonvanishing(const Expr& e, const ParamEnv& env, double x0, double x1, int n,
                        const char* what) {
    for (int i = 0; i < n; ++i) {
        double x = x0 + (x1 - x0) * i / (n - 1);
        if (e(x, env) == 0.0)
            throw DegenerateError(std::string(what) + " at x = " + std::to_string(x));
    }
}

}  // namespace

ForwardDerivation forward_derive(const OdeProblem& problem, int n_samples, double tol) {
    if (problem.V1)
        throw Error("forward_derive: V1 term present; apply reduce_v1 first");
    const Expr& F = problem.F;
    const Expr& W = problem.W;
    const Expr& V = problem.V;
    const Expr& S = problem.S;
    check_nonvanishing(F, problem.env, problem.x0, problem.x1, n_samples,
                       "forward_derive: F vanishes");

    ForwardDerivation out;
    out.tol = tol;
    out.pair.Q = Expr::constant(-2.0) / F;
    out.pair.P = Expr::constant(-2.0) * W / (F * F);

    Expr Fp = F.differentiate();
    Expr Fpp = F.differentiate(2);
    Expr Wp = W.differentiate();
    Expr Wpp = W.differentiate(2);

    // Zero-order balance collected as U' + g U = h.
    out.u_ode.g = (2.0 * W - 2.0 * Fp) / F;
    out.u_ode.h = -(F * S / 2.0) - (Wpp - V * W) / F -
                  ((2.0 * W - 4.0 * Fp) * Wp - 2.0 * W * Fpp) / (F * F) -
                  2.0 * W * (W * W + 3.0 * Fp * Fp - 2.0 * W * Fp) / (F * F * F);

    // Intrinsic constraint, term-wise for a relative residual.
    Expr c1 = V;
    Expr c2 = (Fpp - 2.0 * Wp) / F;
    Expr c3 = (6.0 * W * Fp - 2.0 * Fp * Fp - 4.0 * W * W) / (F * F);

    out.constraint.reserve(n_samples);
    double max_abs = 0.0;
    for (int i = 0; i < n_samples; ++i) {
        double x = problem.x0 + (problem.x1 - problem.x0) * i / (n_samples - 1);
        double t1 = c1(x, problem.env), t2 = c2(x, problem.env), t3 = c3(x, problem.env);
        double scale = std::max({std::abs(t1), std::abs(t2), std::abs(t3)});
        double r = t1 + t2 + t3;
        if (scale > 0.0) r /= scale;
        out.constraint.push_back(r);
        max_abs = std::max(max_abs, std::abs(r));
    }
    out.compatible = max_abs <= tol;
    return out;
}

LinearPotential solve_u_ode(const UOde& u_ode, double U0, const Grid1D& grid,
                            const ParamEnv& env) {
    auto rhs = [&](double x, const std::array<double, 1>& y, std::array<double, 1>& dy) {
        dy[0] = -u_ode.g(x, env) * y[0] + u_ode.h(x, env);
    };
    detail::Rk45<1, decltype(rhs)> stepper(rhs, 1e-10, 1e-12);

    std::vector<double> values(grid.n);
    std::array<double, 1> y{U0};
    double x = grid.x0;
    for (int i = 0; i < grid.n; ++i) {
        stepper.advance(x, y, grid.point(i));
        values[i] = y[0];
    }
    return LinearPotential(SampledFn(grid, std::move(values)));
}

OdeProblem reverse_synthesize(const Expr& U, const Expr& P, const Expr& Q,
                              ParamEnv env, double x0, double x1, int check_samples) {
    check_nonvanishing(Q, env, x0, x1, check_samples, "reverse_synthesize: Q vanishes");

    Expr Qp = Q.differentiate();
    Expr Qpp = Q.differentiate(2);
    Expr Pp = P.differentiate();
    Expr Ppp = P.differentiate(2);
    Expr Up = U.differentiate();

    OdeProblem out;
    out.F = Expr::constant(-2.0) / Q;
    out.W = Expr::constant(-2.0) * P / (Q * Q);
    out.V = (Q * Qpp + 4.0 * P * P + 2.0 * (Pp * Q + P * Qp)) / (Q * Q);
    out.S = Ppp + Q * Up + 2.0 * (Qp + P) * U - P * Qpp / Q -
            2.0 * P * P * (Qp + P) / (Q * Q);
    out.env = std::move(env);
    out.x0 = x0;
    out.x1 = x1;
    return out;
}

V1Reduction reduce_v1(const OdeProblem& problem, int n_samples) {
    if (!problem.V1) {
        // identity reduction: p = 1
        Grid1D grid(problem.x0, problem.x1, n_samples);
        V1Reduction out;
        out.p = SampledFn(grid, std::vector<double>(n_samples, 1.0));
        out.v_tilde = problem.V;
        const Expr F = problem.F, W = problem.W, S = problem.S;
        const ParamEnv env = problem.env;
        out.f_tilde = [F, env](double x) { return F(x, env); };
        out.w_tilde = [W, env](double x) { return W(x, env); };
        out.s_tilde = [S, env](double x) { return S(x, env); };
        return out;
    }

    const Expr V1 = *problem.V1;
    const ParamEnv env = problem.env;
    Grid1D grid(problem.x0, problem.x1, n_samples);

    // p = exp(-1/2 integral_{x0}^{x} V1), integrated as an ODE so that
    // p stays positive by construction.
    auto rhs = [&](double x, const std::array<double, 1>& y, std::array<double, 1>& dy) {
        dy[0] = -0.5 * V1(x, env) * y[0];
    };
    detail::Rk45<1, decltype(rhs)> stepper(rhs, 1e-12, 1e-14);
    std::vector<double> pv(grid.n);
    std::array<double, 1> y{1.0};
    double x = grid.x0;
    for (int i = 0; i < grid.n; ++i) {
        stepper.advance(x, y, grid.point(i));
        if (!(y[0] > 0.0)) throw NumericError("reduce_v1: p not positive");
        pv[i] = y[0];
    }

    V1Reduction out;
    out.p = SampledFn(grid, std::move(pv));
    // p''/p = V1^2/4 - V1'/2 is closed-form, so v_tilde stays an Expr.
    out.v_tilde = problem.V + V1 * V1 / 4.0 - V1.differentiate() / 2.0;

    const SampledFn p = out.p;
    const Expr F = problem.F, W = problem.W, S = problem.S;
    out.f_tilde = [F, env, p](double x_) { return F(x_, env) / p(x_); };
    // p'/p = -V1/2, so W/p - F p'/p^2 = (W + F V1/2)/p.
    out.w_tilde = [F, W, V1, env, p](double x_) {
        return (W(x_, env) + F(x_, env) * V1(x_, env) / 2.0) / p(x_);
    };
    out.s_tilde = [S, env, p](double x_) { return p(x_) * S(x_, env); };
    return out;
}

}  // namespace colehopf
