#pragma once

#include <span>
#include <vector>

#include "colehopf/expr.hpp"
#include "colehopf/transform.hpp"

namespace colehopf {

/// Coefficients of the generalized Burgers equation
///   psi_t - M(x) psi_xx = H(x) psi psi_x + V(x) psi + W(x) psi^2
/// on a closed interval [x0, x1]. Construction validates parabolicity
/// (M > 0) and H != 0 on a sampled grid.
struct BurgersProblem {
    Expr M, H, V, W;
    ParamEnv env;
    double x0 = 0.0, x1 = 1.0;
};

/// Builds a BurgersProblem from (M, H), deriving V and W. Throws
/// DegenerateError if M <= 0 or H == 0 anywhere on the check grid.
BurgersProblem make_burgers_problem(Expr M, Expr H, ParamEnv env, double x0, double x1,
                                    int check_samples = 201);

/// Transform pair for the paired heat equation:
///   Q = 2M/H,   P = 2M H'/H^2 - M'/H.
/// Throws DegenerateError if H vanishes at a sample point of [x0, x1].
TransformPair derive_transform(const Expr& M, const Expr& H, const ParamEnv& env,
                               double x0, double x1, int check_samples = 201);

/// Induced coefficients: W = -H M'/(2M) + H',  V = -M H''/H.
/// Returned as (W, V).
std::pair<Expr, Expr> derive_coefficients(const Expr& M, const Expr& H);

/// Left side of the compatibility constraint between M and H,
///   [H M'/(2M) - H'] P^2 + [M H''/H - H P'] P - M P''
/// with P substituted from the transform formula, evaluated on `grid`.
/// When `relative` each residual is divided by the largest |term| at that
/// point. The pair is compatible iff max |residual| <= tol_sym (1e-9).
std::vector<double> constraint_residual_m_h(const Expr& M, const Expr& H, const ParamEnv& env,
                                            std::span<const double> grid, bool relative = true);

constexpr double kTolSym = 1e-9;

/// The three convective-coefficient families admissible for constant M.
enum class HFamily { ReciprocalLinear, Secant, Exponential };

/// H = 1/(a x + b), B/cos(omega x + beta), or C e^(alpha x). The family
/// parameters must be bound in `params`; degenerate values (a = b = 0,
/// B = 0, C = 0) are rejected.
Expr h_family(HFamily kind, const ParamEnv& params);

/// Residual of the H-equation for constant diffusivity:
///   H^2 H''' - 5 H H' H'' + 4 (H')^3
/// evaluated on `grid`, optionally relative to the largest |term|.
std::vector<double> h_ode_residual(const Expr& H, const ParamEnv& env,
                                   std::span<const double> grid, bool relative = true);

/// Diffusivity family compatible with H = 1: M = (a1 x + b1)^2.
/// (a1, b1) = (0, 0) is rejected.
Expr m_family_linear_sq(double a1, double b1);

/// Residual of the M-equation for H = 1, in the form
///   (M')^3 / (2M) - M' M'' + M M'''
/// evaluated on `grid`. The first term differs from a literal reading of
/// the source relation; see the note attached to verification reports.
std::vector<double> m_ode_residual(const Expr& M, const ParamEnv& env,
                                   std::span<const double> grid, bool relative = true);

/// Provenance note emitted whenever the H = 1 diffusivity check runs.
extern const char* kMOdeCorrectionNote;

/// Diffusivity family for H = 1 with w w'' = c, c != 0, defined implicitly by
///   x = C2 + sign * integral_{w_low}^{w} ds / sqrt(2c ln s - C1 c),
/// where w_low = exp(C1/2 + 1/(2c)) normalizes the integrand to 1 at the
/// lower limit. Samples are produced by adaptive quadrature plus monotone
/// bracketing root-finding; M = w^2.
struct ImplicitMFamily {
    std::vector<double> w;
    std::vector<double> m;
    double w_low = 0.0;
};

ImplicitMFamily m_family_implicit(double c, double C1, double C2,
                                  std::span<const double> xgrid, int sign = +1);

}  // namespace colehopf
