#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "colehopf/expr.hpp"
#include "colehopf/grid.hpp"
#include "colehopf/potential.hpp"
#include "colehopf/transform.hpp"

namespace colehopf {

/// Coefficients of the second-order convective ODE
///   psi'' = S + [V + F psi'] psi + W psi^2   (+ V1 psi' when present)
/// on [x0, x1]. F must not vanish on the domain.
struct OdeProblem {
    Expr F, W, V, S;
    std::optional<Expr> V1;
    ParamEnv env;
    double x0 = 0.0, x1 = 1.0;
};

/// First-order linear equation U' + g(x) U = h(x) for the linear potential.
struct UOde {
    Expr g, h;
};

/// Result of the forward derivation from given (F, W, V, S):
/// the transform pair, the U-equation, and the sampled intrinsic
/// constraint whose vanishing is required for the pairing to exist.
struct ForwardDerivation {
    TransformPair pair;
    UOde u_ode;
    std::vector<double> constraint;   // relative residuals on the sample grid
    bool compatible = false;
    double tol = 1e-9;
};

/// Q = -2/F, P = -2W/F^2, the U-equation collected from the zero-order
/// balance, and the intrinsic constraint
///   V + (F'' - 2W')/F + (6WF' - 2(F')^2 - 4W^2)/F^2
/// sampled on `n_samples` uniform points. A constraint violation is
/// reported through `compatible`, not thrown. Problems with a V1 term are
/// rejected: reduce them first.
ForwardDerivation forward_derive(const OdeProblem& problem, int n_samples = 201,
                                 double tol = 1e-9);

/// Integrates U' = -g U + h from (x0, U0) with adaptive 4th/5th-order
/// stepping at local tolerance 1e-10, sampled on `grid`.
LinearPotential solve_u_ode(const UOde& u_ode, double U0, const Grid1D& grid,
                            const ParamEnv& env = {});

/// Reverse synthesis: from chosen (U, P, Q) build the nonlinear problem
///   F = -2/Q, W = -2P/Q^2,
///   V = (Q Q'' + 4P^2 + 2(PQ)')/Q^2,
///   S = P'' + Q U' + 2(Q' + P) U - P Q''/Q - 2P^2 (Q' + P)/Q^2.
/// Q must not vanish on [x0, x1].
OdeProblem reverse_synthesize(const Expr& U, const Expr& P, const Expr& Q,
                              ParamEnv env, double x0, double x1, int check_samples = 201);

/// Result of eliminating the V1 psi' term via xi = p psi with
/// p = exp(-1/2 integral V1 dx), p(x0) = 1. The reduced quadruple obeys the
/// canonical convective form; coefficients that mix the closed-form inputs
/// with the numerically integrated p are returned as callables.
struct V1Reduction {
    SampledFn p;
    Expr v_tilde;                           // V - V1'/2 + V1^2/4, closed form
    std::function<double(double)> f_tilde;  // F/p
    std::function<double(double)> w_tilde;  // W/p - F p'/p^2
    std::function<double(double)> s_tilde;  // p S
};

V1Reduction reduce_v1(const OdeProblem& problem, int n_samples = 2001);

}  // namespace colehopf
