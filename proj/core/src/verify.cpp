#include "colehopf/verify.hpp"

#include <algorithm>
#include <cmath>

namespace colehopf {

const char* equation_tag_name(EquationTag tag) {
    switch (tag) {
        case EquationTag::Burgers: return "burgers";
        case EquationTag::ConvectiveOde: return "convective-ode";
        case EquationTag::ConstraintMH: return "constraint-m-h";
        case EquationTag::ConstraintFWVS: return "constraint-f-w-v-s";
        case EquationTag::HOde: return "h-ode";
    }
    return "?";
}

namespace {

std::vector<uint8_t> dilate(const std::vector<uint8_t>& mask, int radius) {
    const int n = static_cast<int>(mask.size());
    std::vector<uint8_t> out(n, 0);
    for (int i = 0; i < n; ++i) {
        if (!mask[i]) continue;
        for (int j = std::max(0, i - radius); j <= std::min(n - 1, i + radius); ++j) out[j] = 1;
    }
    return out;
}

void accumulate(double r, double& linf, double& sumsq, std::size_t& count) {
    linf = std::max(linf, std::abs(r));
    sumsq += r * r;
    ++count;
}

void finish(ResidualReport& rep, double linf, double sumsq, std::size_t count) {
    if (count == 0) {
        rep.degenerate = true;
        rep.pass = false;
        rep.notes.push_back("all points masked or trimmed; no residual computed");
        return;
    }
    rep.linf = linf;
    rep.l2 = std::sqrt(sumsq / double(count));
    rep.pass = linf <= rep.tolerance;
}

}  // namespace

ResidualReport pde_residual(const BurgersProblem& problem, const TransformedField& psi,
                            double tol, int level_begin, int level_end) {
    const int nl = static_cast<int>(psi.psi.size());
    const int n = psi.grid.n;
    if (nl < 3) throw Error("pde_residual: need at least 3 time levels");
    if (n < 5) throw Error("pde_residual: need at least 5 spatial points");
    if (level_begin < 0) level_begin = 0;
    if (level_end < 0) level_end = nl;

    ResidualReport rep;
    rep.equation = EquationTag::Burgers;
    rep.nx = n;
    rep.nlevels = level_end - level_begin;
    rep.dx = psi.grid.dx();
    rep.tolerance = tol;
    rep.masked_fraction = psi.masked_fraction;
    if (psi.degenerate) {
        rep.degenerate = true;
        rep.notes.push_back("degenerate field: an entire level is pole-masked");
        return rep;
    }

    std::vector<double> m(n), h(n), v(n), w(n);
    for (int i = 0; i < n; ++i) {
        double x = psi.grid.point(i);
        m[i] = problem.M(x, problem.env);
        h[i] = problem.H(x, problem.env);
        v[i] = problem.V(x, problem.env);
        w[i] = problem.W(x, problem.env);
    }

    std::vector<std::vector<uint8_t>> dmask(nl);
    for (int l = 0; l < nl; ++l) dmask[l] = dilate(psi.mask[l], 3);

    const double dx = psi.grid.dx();
    double linf = 0.0, sumsq = 0.0;
    std::size_t count = 0;
    for (int l = std::max(1, level_begin); l < std::min(nl - 1, level_end); ++l) {
        double dt_lo = psi.times[l] - psi.times[l - 1];
        double dt_hi = psi.times[l + 1] - psi.times[l];
        const auto& cur = psi.psi[l];
        for (int i = 2; i < n - 2; ++i) {
            if (dmask[l][i] || dmask[l - 1][i] || dmask[l + 1][i] ||
                dmask[l][i - 1] || dmask[l][i + 1])
                continue;
            double pt = (psi.psi[l + 1][i] - psi.psi[l - 1][i]) / (dt_lo + dt_hi);
            double px = (cur[i + 1] - cur[i - 1]) / (2.0 * dx);
            double pxx = (cur[i + 1] - 2.0 * cur[i] + cur[i - 1]) / (dx * dx);
            double r = pt - m[i] * pxx - h[i] * cur[i] * px - v[i] * cur[i] -
                       w[i] * cur[i] * cur[i];
            accumulate(r, linf, sumsq, count);
        }
    }
    finish(rep, linf, sumsq, count);
    return rep;
}

ResidualReport ode_residual(const OdeProblem& problem, std::span<const double> psi,
                            const Grid1D& grid, double tol, std::span<const uint8_t> mask) {
    const int n = grid.n;
    if (static_cast<int>(psi.size()) != n) throw Error("ode_residual: psi size mismatch");
    if (n < 5) throw Error("ode_residual: need at least 5 points");

    ResidualReport rep;
    rep.equation = EquationTag::ConvectiveOde;
    rep.nx = n;
    rep.nlevels = 1;
    rep.dx = grid.dx();
    rep.tolerance = tol;

    std::vector<uint8_t> dmask(n, 0);
    if (!mask.empty()) {
        std::vector<uint8_t> raw(mask.begin(), mask.end());
        dmask = dilate(raw, 3);
        std::size_t masked = 0;
        for (uint8_t b : raw) masked += b;
        rep.masked_fraction = double(masked) / n;
    }

    const double dx = grid.dx();
    double linf = 0.0, sumsq = 0.0;
    std::size_t count = 0;
    for (int i = 2; i < n - 2; ++i) {
        if (dmask[i] || dmask[i - 1] || dmask[i + 1]) continue;
        double x = grid.point(i);
        double d1 = (psi[i + 1] - psi[i - 1]) / (2.0 * dx);
        double d2 = (psi[i + 1] - 2.0 * psi[i] + psi[i - 1]) / (dx * dx);
        double r = d2 - problem.S(x, problem.env) -
                   (problem.V(x, problem.env) + problem.F(x, problem.env) * d1) * psi[i] -
                   problem.W(x, problem.env) * psi[i] * psi[i];
        if (problem.V1) r -= (*problem.V1)(x, problem.env) * d1;
        accumulate(r, linf, sumsq, count);
    }
    finish(rep, linf, sumsq, count);
    return rep;
}

ResidualReport roundtrip_burgers(const Expr& M, const Expr& H, const ParamEnv& env,
                                 const std::optional<Expr>& phi0, const Grid1D& grid,
                                 double t_end, int nt, double theta, double tol) {
    std::vector<double> cgrid(201);
    for (int i = 0; i < 201; ++i) cgrid[i] = grid.x0 + (grid.x1 - grid.x0) * i / 200.0;
    auto constraint = constraint_residual_m_h(M, H, env, cgrid);
    double cmax = 0.0;
    for (double r : constraint) cmax = std::max(cmax, std::abs(r));
    if (cmax > kTolSym) {
        ResidualReport rep;
        rep.equation = EquationTag::ConstraintMH;
        rep.stage = "constraint";
        rep.nx = 201;
        rep.linf = cmax;
        rep.tolerance = kTolSym;
        rep.pass = false;
        rep.notes.push_back("coefficients incompatible: not linearizable by this ansatz");
        return rep;
    }

    Expr ic = phi0 ? *phi0
                   : 1.0 + 0.5 * exp(-50.0 * pow(Expr::var() - 0.5 * (grid.x0 + grid.x1),
                                                 Expr::constant(2.0)));
    ResidualReport rep;
    try {
        TransformPair pair = derive_transform(M, H, env, grid.x0, grid.x1);
        BurgersProblem problem = make_burgers_problem(M, H, env, grid.x0, grid.x1);
        LinearField field = solve_heat(M, ic, grid, {}, t_end, nt, theta, env);
        TransformedField tf = apply_transform(pair, field, env);
        // skip the initial transient; truncation error there reflects the
        // sharp initial profile, not the transform
        rep = pde_residual(problem, tf, tol, field.levels() / 2, field.levels());
    } catch (const Error& e) {
        rep.equation = EquationTag::Burgers;
        rep.stage = "solve";
        rep.pass = false;
        rep.notes.push_back(e.what());
        return rep;
    }
    if (rep.degenerate) rep.stage = "transform";
    if (H.is_constant()) rep.notes.push_back(kMOdeCorrectionNote);
    return rep;
}

ResidualReport roundtrip_ode(const Expr& F, const Expr& W, const Expr& V, const Expr& S,
                             const ParamEnv& env, double U0, double phi0, double dphi0,
                             const Grid1D& grid, double tol) {
    OdeProblem problem{F, W, V, S, std::nullopt, env, grid.x0, grid.x1};
    ForwardDerivation fwd = forward_derive(problem);
    if (!fwd.compatible) {
        ResidualReport rep;
        rep.equation = EquationTag::ConstraintFWVS;
        rep.stage = "constraint";
        rep.nx = static_cast<int>(fwd.constraint.size());
        for (double r : fwd.constraint) rep.linf = std::max(rep.linf, std::abs(r));
        rep.tolerance = fwd.tol;
        rep.pass = false;
        rep.notes.push_back("coefficients incompatible: not linearizable by this ansatz");
        return rep;
    }

    ResidualReport rep;
    try {
        LinearPotential U = solve_u_ode(fwd.u_ode, U0, grid, env);
        LinearField field = solve_linear_ode2(U, phi0, dphi0, grid);
        TransformedField tf = apply_transform(fwd.pair, field, env);
        if (tf.degenerate) {
            rep.equation = EquationTag::ConvectiveOde;
            rep.stage = "transform";
            rep.degenerate = true;
            rep.pass = false;
            rep.notes.push_back("degenerate field: all points pole-masked");
            return rep;
        }
        rep = ode_residual(problem, tf.psi[0], grid, tol, tf.mask[0]);
        rep.masked_fraction = tf.masked_fraction;
    } catch (const Error& e) {
        rep.equation = EquationTag::ConvectiveOde;
        rep.stage = "solve";
        rep.pass = false;
        rep.notes.push_back(e.what());
    }
    return rep;
}

}  // namespace colehopf
