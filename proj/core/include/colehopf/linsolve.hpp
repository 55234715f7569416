#pragma once

#include <optional>
#include <vector>

#include "colehopf/expr.hpp"
#include "colehopf/grid.hpp"
#include "colehopf/potential.hpp"

namespace colehopf {

/// Sampled solution of a linear equation: phi and its spatial derivative on
/// a grid. PDE solutions carry one row per stored time level; ODE solutions
/// carry a single row and no time levels.
struct LinearField {
    Grid1D grid;
    std::vector<double> times;               // empty for the ODE case
    std::vector<std::vector<double>> phi;    // [level][space]
    std::vector<std::vector<double>> dphi;   // same shape

    int levels() const { return static_cast<int>(phi.size()); }
};

/// Dirichlet boundary data as expressions of t. Unset sides default to the
/// initial profile's endpoint value held constant.
struct DirichletBC {
    std::optional<Expr> left;
    std::optional<Expr> right;
};

/// theta-method solver for phi_t = M(x) phi_xx with second-order central
/// differences in space and a tridiagonal solve per step. theta = 0.5 is
/// trapezoidal, theta = 1 implicit Euler. phi' is recovered from phi by
/// 4th-order finite differences (one-sided at the boundaries). All nt+1
/// time levels are returned.
LinearField solve_heat(const Expr& M, const Expr& phi0, const Grid1D& grid,
                       const DirichletBC& bc, double t_end, int nt, double theta,
                       const ParamEnv& env = {});

/// Integrates phi'' = U(x) phi from grid.x0 with initial data (phi0, dphi0)
/// using adaptive 4th/5th-order stepping, local tolerance 1e-10, output on
/// every grid point.
LinearField solve_linear_ode2(const LinearPotential& U, double phi0, double dphi0,
                              const Grid1D& grid);

}  // namespace colehopf
