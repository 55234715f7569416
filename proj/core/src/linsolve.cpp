#include "colehopf/linsolve.hpp"

#include <array>
#include <cmath>

#include "rk45.hpp"

namespace colehopf {

namespace {

// Thomas algorithm; diagonals indexed by row, lo[0] and up[n-1] unused.
void solve_tridiagonal(const std::vector<double>& lo, std::vector<double> di,
                       const std::vector<double>& up, std::vector<double>& rhs) {
    const int n = static_cast<int>(di.size());
    for (int i = 1; i < n; ++i) {
        if (di[i - 1] == 0.0) throw NumericError("tridiagonal solve: zero pivot");
        double m = lo[i] / di[i - 1];
        di[i] -= m * up[i - 1];
        rhs[i] -= m * rhs[i - 1];
    }
    if (di[n - 1] == 0.0) throw NumericError("tridiagonal solve: zero pivot");
    rhs[n - 1] /= di[n - 1];
    for (int i = n - 2; i >= 0; --i) rhs[i] = (rhs[i] - up[i] * rhs[i + 1]) / di[i];
}

// 4th-order first derivative of a sampled row, one-sided at the boundaries.
std::vector<double> derivative_row(const std::vector<double>& f, double h) {
    const int n = static_cast<int>(f.size());
    std::vector<double> d(n);
    for (int i = 2; i < n - 2; ++i)
        d[i] = (f[i - 2] - 8 * f[i - 1] + 8 * f[i + 1] - f[i + 2]) / (12 * h);
    d[0] = (-25 * f[0] + 48 * f[1] - 36 * f[2] + 16 * f[3] - 3 * f[4]) / (12 * h);
    d[1] = (-3 * f[0] - 10 * f[1] + 18 * f[2] - 6 * f[3] + f[4]) / (12 * h);
    d[n - 2] = (3 * f[n - 1] + 10 * f[n - 2] - 18 * f[n - 3] + 6 * f[n - 4] - f[n - 5]) / (12 * h);
    d[n - 1] = (25 * f[n - 1] - 48 * f[n - 2] + 36 * f[n - 3] - 16 * f[n - 4] + 3 * f[n - 5]) / (12 * h);
    return d;
}

}  // namespace

LinearField solve_heat(const Expr& M, const Expr& phi0, const Grid1D& grid,
                       const DirichletBC& bc, double t_end, int nt, double theta,
                       const ParamEnv& env) {
    if (nt < 1) throw Error("solve_heat: nt must be >= 1");
    if (theta != 0.5 && theta != 1.0) throw Error("solve_heat: theta must be 0.5 or 1.0");
    if (grid.n < 5) throw Error("solve_heat: need at least 5 grid points");

    const int n = grid.n;
    const double dx = grid.dx();
    const double dt = t_end / nt;

    std::vector<double> m(n), phi(n);
    for (int i = 0; i < n; ++i) {
        double x = grid.point(i);
        m[i] = M(x, env);
        if (!(m[i] > 0.0)) throw DegenerateError("solve_heat: M <= 0 at x = " + std::to_string(x));
        phi[i] = phi0(x, env);
    }

    auto bc_value = [&](const std::optional<Expr>& side, double hold, double t) {
        return side ? (*side)(t, env) : hold;
    };
    const double hold_left = phi.front(), hold_right = phi.back();

    // Constant-coefficient tridiagonal system for the implicit part.
    std::vector<double> lo(n, 0.0), di(n, 1.0), up(n, 0.0);
    for (int i = 1; i < n - 1; ++i) {
        double r = m[i] * dt / (dx * dx);
        lo[i] = -theta * r;
        di[i] = 1.0 + 2.0 * theta * r;
        up[i] = -theta * r;
    }

    LinearField out;
    out.grid = grid;
    out.times.reserve(nt + 1);
    out.phi.reserve(nt + 1);
    out.dphi.reserve(nt + 1);
    out.times.push_back(0.0);
    out.phi.push_back(phi);
    out.dphi.push_back(derivative_row(phi, dx));

    std::vector<double> rhs(n);
    for (int k = 0; k < nt; ++k) {
        double t_next = (k + 1) * dt;
        for (int i = 1; i < n - 1; ++i) {
            double r = m[i] * dt / (dx * dx);
            rhs[i] = phi[i] + (1.0 - theta) * r * (phi[i + 1] - 2.0 * phi[i] + phi[i - 1]);
        }
        rhs[0] = bc_value(bc.left, hold_left, t_next);
        rhs[n - 1] = bc_value(bc.right, hold_right, t_next);
        solve_tridiagonal(lo, di, up, rhs);
        phi = rhs;
        for (double v : phi)
            if (!std::isfinite(v)) throw NumericError("solve_heat: non-finite value");
        out.times.push_back(t_next);
        out.phi.push_back(phi);
        out.dphi.push_back(derivative_row(phi, dx));
    }
    return out;
}

LinearField solve_linear_ode2(const LinearPotential& U, double phi0, double dphi0,
                              const Grid1D& grid) {
    auto rhs = [&U](double x, const std::array<double, 2>& y, std::array<double, 2>& dy) {
        dy[0] = y[1];
        dy[1] = U(x) * y[0];
    };
    detail::Rk45<2, decltype(rhs)> stepper(rhs, 1e-10, 1e-12);

    LinearField out;
    out.grid = grid;
    out.phi.assign(1, std::vector<double>(grid.n));
    out.dphi.assign(1, std::vector<double>(grid.n));

    std::array<double, 2> y{phi0, dphi0};
    double x = grid.x0;
    for (int i = 0; i < grid.n; ++i) {
        stepper.advance(x, y, grid.point(i));
        if (!std::isfinite(y[0]) || !std::isfinite(y[1]))
            throw NumericError("solve_linear_ode2: non-finite state");
        out.phi[0][i] = y[0];
        out.dphi[0][i] = y[1];
    }
    return out;
}

}  // namespace colehopf
