#include "colehopf/burgers.hpp"

#include <algorithm>
#include <cmath>

#include "rk45.hpp"

namespace colehopf {

const char* kMOdeCorrectionNote =
    "H=1 diffusivity relation evaluated with first term (M')^3/(2M); "
    "a literal reading M'/(2M) is not reduced by M=w^2 to w w''=const";

namespace {

double require_param(const ParamEnv& env, const char* name) {
    auto it = env.find(name);
    if (it == env.end()) throw Error(std::string("h_family: parameter '") + name + "' not bound");
    return it->second;
}

void check_nonvanishing(const Expr& e, const ParamEnv& env, double x0, double x1, int n,
                        const char* what, bool positive) {
    for (int i = 0; i < n; ++i) {
        double x = x0 + (x1 - x0) * i / (n - 1);
        double v = e(x, env);
        if (positive ? !(v > 0.0) : v == 0.0)
            throw DegenerateError(std::string(what) + " at x = " + std::to_string(x));
    }
}

std::vector<double> combine_terms(const std::vector<std::vector<double>>& terms, bool relative) {
    const std::size_t n = terms.front().size();
    std::vector<double> r(n);
    for (std::size_t i = 0; i < n; ++i) {
        double sum = 0.0, scale = 0.0;
        for (const auto& t : terms) {
            sum += t[i];
            scale = std::max(scale, std::abs(t[i]));
        }
        r[i] = relative && scale > 0.0 ? sum / scale : sum;
    }
    return r;
}

}  // namespace

TransformPair derive_transform(const Expr& M, const Expr& H, const ParamEnv& env,
                               double x0, double x1, int check_samples) {
    check_nonvanishing(H, env, x0, x1, check_samples, "degenerate transform: H vanishes", false);
    Expr Hp = H.differentiate();
    Expr Mp = M.differentiate();
    Expr Q = 2.0 * M / H;
    Expr P = 2.0 * M * Hp / (H * H) - Mp / H;
    return {P, Q};
}

std::pair<Expr, Expr> derive_coefficients(const Expr& M, const Expr& H) {
    Expr W = -H * M.differentiate() / (2.0 * M) + H.differentiate();
    Expr V = -M * H.differentiate(2) / H;
    return {W, V};
}

BurgersProblem make_burgers_problem(Expr M, Expr H, ParamEnv env, double x0, double x1,
                                    int check_samples) {
    check_nonvanishing(M, env, x0, x1, check_samples, "parabolicity violated: M <= 0", true);
    check_nonvanishing(H, env, x0, x1, check_samples, "H vanishes", false);
    auto [W, V] = derive_coefficients(M, H);
    return {std::move(M), std::move(H), std::move(V), std::move(W), std::move(env), x0, x1};
}

std::vector<double> constraint_residual_m_h(const Expr& M, const Expr& H, const ParamEnv& env,
                                            std::span<const double> grid, bool relative) {
    Expr Mp = M.differentiate();
    Expr Hp = H.differentiate();
    Expr Hpp = H.differentiate(2);
    Expr P = 2.0 * M * Hp / (H * H) - Mp / H;
    Expr Pp = P.differentiate();
    Expr Ppp = P.differentiate(2);

    Expr t1 = (H * Mp / (2.0 * M) - Hp) * P * P;
    Expr t2 = (M * Hpp / H - H * Pp) * P;
    Expr t3 = -(M * Ppp);

    std::vector<std::vector<double>> terms(3);
    for (double x : grid) {
        terms[0].push_back(t1(x, env));
        terms[1].push_back(t2(x, env));
        terms[2].push_back(t3(x, env));
    }
    return combine_terms(terms, relative);
}

Expr h_family(HFamily kind, const ParamEnv& params) {
    Expr x = Expr::var();
    switch (kind) {
        case HFamily::ReciprocalLinear: {
            double a = require_param(params, "a");
            double b = require_param(params, "b");
            if (a == 0.0 && b == 0.0)
                throw DegenerateError("h_family: a and b both zero");
            return 1.0 / (Expr::param("a") * x + Expr::param("b"));
        }
        case HFamily::Secant: {
            double B = require_param(params, "B");
            require_param(params, "omega");
            require_param(params, "beta");
            if (B == 0.0) throw DegenerateError("h_family: B is zero");
            return Expr::param("B") / cos(Expr::param("omega") * x + Expr::param("beta"));
        }
        case HFamily::Exponential: {
            double C = require_param(params, "C");
            require_param(params, "alpha");
            if (C == 0.0) throw DegenerateError("h_family: C is zero");
            return Expr::param("C") * exp(Expr::param("alpha") * x);
        }
    }
    throw Error("h_family: unknown kind");
}

std::vector<double> h_ode_residual(const Expr& H, const ParamEnv& env,
                                   std::span<const double> grid, bool relative) {
    Expr Hp = H.differentiate();
    Expr Hpp = H.differentiate(2);
    Expr Hppp = H.differentiate(3);
    Expr t1 = H * H * Hppp;
    Expr t2 = -5.0 * H * Hp * Hpp;
    Expr t3 = 4.0 * Hp * Hp * Hp;

    std::vector<std::vector<double>> terms(3);
    for (double x : grid) {
        terms[0].push_back(t1(x, env));
        terms[1].push_back(t2(x, env));
        terms[2].push_back(t3(x, env));
    }
    return combine_terms(terms, relative);
}

Expr m_family_linear_sq(double a1, double b1) {
    if (a1 == 0.0 && b1 == 0.0) throw DegenerateError("m_family_linear_sq: a1 and b1 both zero");
    Expr lin = Expr::constant(a1) * Expr::var() + Expr::constant(b1);
    return pow(lin, Expr::constant(2.0));
}

std::vector<double> m_ode_residual(const Expr& M, const ParamEnv& env,
                                   std::span<const double> grid, bool relative) {
    Expr Mp = M.differentiate();
    Expr Mpp = M.differentiate(2);
    Expr Mppp = M.differentiate(3);
    Expr t1 = Mp * Mp * Mp / (2.0 * M);
    Expr t2 = -(Mp * Mpp);
    Expr t3 = M * Mppp;

    std::vector<std::vector<double>> terms(3);
    for (double x : grid) {
        terms[0].push_back(t1(x, env));
        terms[1].push_back(t2(x, env));
        terms[2].push_back(t3(x, env));
    }
    return combine_terms(terms, relative);
}

ImplicitMFamily m_family_implicit(double c, double C1, double C2,
                                  std::span<const double> xgrid, int sign) {
    if (c == 0.0) throw Error("m_family_implicit: c must be nonzero");
    if (sign != 1 && sign != -1) throw Error("m_family_implicit: sign must be +1 or -1");

    const double s0 = std::exp(C1 / 2.0);            // integrand vanishing-argument point
    const double w_low = std::exp(C1 / 2.0 + 1.0 / (2.0 * c));

    // With u = sqrt(2c ln s - C1 c) the quadrature becomes smooth:
    //   integral_{w_low}^{w} ds/sqrt(...) = integral_{1}^{u(w)} exp(u^2/(2c) + C1/2)/c du.
    auto integrand = [&](double u) { return std::exp(u * u / (2.0 * c) + C1 / 2.0) / c; };
    auto u_of = [&](double w) {
        double arg = 2.0 * c * std::log(w) - C1 * c;
        if (arg < 0.0) throw NumericError("m_family_implicit: integrand non-positive");
        return std::sqrt(arg);
    };
    auto F = [&](double w) {
        double uw = u_of(w);
        if (uw == 1.0) return 0.0;
        return detail::adaptive_simpson(integrand, 1.0, uw, 1e-14);
    };

    // Domain of w on the side of s0 containing w_low.
    const bool above = w_low > s0;
    const double edge = above ? s0 * (1.0 + 1e-13) : s0 * (1.0 - 1e-13);

    ImplicitMFamily out;
    out.w_low = w_low;
    out.w.reserve(xgrid.size());
    out.m.reserve(xgrid.size());

    double w_prev = w_low;
    for (double x : xgrid) {
        double target = sign * (x - C2);
        double w;
        if (target == 0.0) {
            w = w_low;
        } else {
            // F is strictly increasing in w; bracket starting from the
            // previous solution, expanding toward the domain edge.
            double lo, hi;
            if (target > 0.0) {
                lo = w_low;
                hi = std::max(w_prev, w_low);
                double step = std::max(0.5 * std::abs(w_low), 1e-6);
                int it = 0;
                while (true) {
                    if (above) {
                        hi += step;
                        step *= 2.0;
                    } else {
                        hi = 0.5 * (hi + edge);  // approach s0 from below
                    }
                    if (F(hi) >= target) break;
                    if (++it > 200 || (!above && std::abs(hi - edge) < 1e-14 * s0) ||
                        hi > 1e12)
                        throw NumericError("m_family_implicit: x outside reachable range");
                }
            } else {
                hi = w_low;
                lo = std::min(w_prev, w_low);
                int it = 0;
                while (F(lo) > target) {
                    if (above) {
                        lo = 0.5 * (lo + edge);  // approach s0 from above
                        if (std::abs(lo - edge) < 1e-14 * s0)
                            throw NumericError("m_family_implicit: x outside reachable range");
                    } else {
                        lo *= 0.5;
                        if (lo < 1e-300)
                            throw NumericError("m_family_implicit: x outside reachable range");
                    }
                    if (++it > 200)
                        throw NumericError("m_family_implicit: bracketing failure");
                }
            }
            w = detail::brent([&](double s) { return F(s) - target; }, lo, hi, 1e-13);
        }
        out.w.push_back(w);
        out.m.push_back(w * w);
        w_prev = w;
    }
    return out;
}

}  // namespace colehopf
