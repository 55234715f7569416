#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "colehopf/burgers.hpp"
#include "colehopf/hopf.hpp"
#include "colehopf/linsolve.hpp"
#include "colehopf/ode.hpp"

namespace colehopf {

enum class EquationTag { Burgers, ConvectiveOde, ConstraintMH, ConstraintFWVS, HOde };

const char* equation_tag_name(EquationTag tag);

/// Grid-sampled residual norms of a nonlinear equation, computed with
/// centered differences independent of any solver stencil. Norms cover
/// unmasked interior points only; verdict is pass iff Linf <= tolerance.
struct ResidualReport {
    EquationTag equation = EquationTag::Burgers;
    std::string stage;                  // failing pipeline stage, empty otherwise
    int nx = 0;
    int nlevels = 0;
    double dx = 0.0;
    double linf = 0.0;
    double l2 = 0.0;
    double masked_fraction = 0.0;
    double tolerance = 0.0;
    bool pass = false;
    bool degenerate = false;
    std::vector<std::string> notes;
};

/// Residual of the nonlinear Burgers-type equation,
///   r = psi_t - M psi_xx - H psi psi_x - V psi - W psi^2,
/// with 2nd-order centered differences in time and space. Two spatial
/// points are trimmed at each boundary, one level at each temporal end,
/// and the pole mask is dilated by 3 points. `level_begin`/`level_end`
/// select a half-open level range (-1: all levels).
ResidualReport pde_residual(const BurgersProblem& problem, const TransformedField& psi,
                            double tol = 1e-3, int level_begin = -1, int level_end = -1);

/// Residual of the convective ODE,
///   r = psi'' - S - (V + F psi') psi - V1 psi' - W psi^2,
/// with 2nd-order centered differences; two points trimmed at each end,
/// mask dilated by 3.
ResidualReport ode_residual(const OdeProblem& problem, std::span<const double> psi,
                            const Grid1D& grid, double tol = 1e-6,
                            std::span<const uint8_t> mask = {});

/// End-to-end check for the PDE side: compatibility constraint, transform
/// derivation, heat solve, transform application, then pde_residual over
/// the second half of the time window (the initial transient is dominated
/// by stencil truncation on the sharp initial profile). `phi0` defaults to
/// a Gaussian bump above 1 centered in the domain.
ResidualReport roundtrip_burgers(const Expr& M, const Expr& H, const ParamEnv& env,
                                 const std::optional<Expr>& phi0, const Grid1D& grid,
                                 double t_end, int nt, double theta = 0.5,
                                 double tol = 1e-3);

/// End-to-end check for the ODE side: forward derivation (constraint gate),
/// U integration, linear solve, transform, then ode_residual.
ResidualReport roundtrip_ode(const Expr& F, const Expr& W, const Expr& V, const Expr& S,
                             const ParamEnv& env, double U0, double phi0, double dphi0,
                             const Grid1D& grid, double tol = 1e-6);

}  // namespace colehopf
