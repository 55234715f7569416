#pragma once

// Dormand-Prince 5(4) adaptive integrator, internal to the solvers.
// Steps are clamped to land exactly on each requested output point, so no
// dense-output interpolant is needed.

#include <algorithm>
#include <array>
#include <cmath>
#include <span>
#include <vector>

#include "colehopf/errors.hpp"

namespace colehopf::detail {

template <std::size_t N, typename RHS>
class Rk45 {
public:
    using State = std::array<double, N>;

    Rk45(RHS rhs, double rtol = 1e-10, double atol = 1e-12)
        : rhs_(std::move(rhs)), rtol_(rtol), atol_(atol) {}

    // Integrates y from x to x_target, mutating y in place.
    void advance(double& x, State& y, double x_target) {
        double dir = (x_target >= x) ? 1.0 : -1.0;
        double h = h_;
        if (h <= 0) h = std::min(1e-3, std::abs(x_target - x));
        while (dir * (x_target - x) > 0) {
            h = std::min(h, std::abs(x_target - x));
            if (h < 1e-14 * (std::abs(x) + 1.0))
                throw NumericError("rk45: step-size underflow");
            State y5;
            double err = step(x, y, dir * h, y5);
            double scale = 0.0;
            for (std::size_t i = 0; i < N; ++i)
                scale = std::max(scale, std::abs(y[i]) + std::abs(y5[i]));
            double tol = atol_ + rtol_ * scale;
            if (err <= tol) {
                x += dir * h;
                y = y5;
                double grow = (err > 0) ? 0.9 * std::pow(tol / err, 0.2) : 5.0;
                h *= std::clamp(grow, 0.2, 5.0);
            } else {
                h *= std::max(0.2, 0.9 * std::pow(tol / err, 0.2));
            }
        }
        h_ = h;
    }

private:
    // One trial step; returns the embedded error estimate, writes the
    // 5th-order result to y5.
    double step(double x, const State& y, double h, State& y5) {
        constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
        State k1, k2, k3, k4, k5, k6, k7, tmp;
        auto axpy = [&](const auto&... terms) {
            for (std::size_t i = 0; i < N; ++i) {
                double s = y[i];
                ((s += terms.first * terms.second[i]), ...);
                tmp[i] = s;
            }
        };
        rhs_(x, y, k1);
        axpy(std::pair{h * 1.0 / 5, k1});
        rhs_(x + c2 * h, tmp, k2);
        axpy(std::pair{h * 3.0 / 40, k1}, std::pair{h * 9.0 / 40, k2});
        rhs_(x + c3 * h, tmp, k3);
        axpy(std::pair{h * 44.0 / 45, k1}, std::pair{-h * 56.0 / 15, k2},
             std::pair{h * 32.0 / 9, k3});
        rhs_(x + c4 * h, tmp, k4);
        axpy(std::pair{h * 19372.0 / 6561, k1}, std::pair{-h * 25360.0 / 2187, k2},
             std::pair{h * 64448.0 / 6561, k3}, std::pair{-h * 212.0 / 729, k4});
        rhs_(x + c5 * h, tmp, k5);
        axpy(std::pair{h * 9017.0 / 3168, k1}, std::pair{-h * 355.0 / 33, k2},
             std::pair{h * 46732.0 / 5247, k3}, std::pair{h * 49.0 / 176, k4},
             std::pair{-h * 5103.0 / 18656, k5});
        rhs_(x + h, tmp, k6);
        axpy(std::pair{h * 35.0 / 384, k1}, std::pair{h * 500.0 / 1113, k3},
             std::pair{h * 125.0 / 192, k4}, std::pair{-h * 2187.0 / 6784, k5},
             std::pair{h * 11.0 / 84, k6});
        y5 = tmp;
        rhs_(x + h, y5, k7);
        // 4th-order embedded difference
        constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                         e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
        double err = 0.0;
        for (std::size_t i = 0; i < N; ++i) {
            double d = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] +
                            e6 * k6[i] + e7 * k7[i]);
            if (!std::isfinite(d) || !std::isfinite(y5[i]))
                throw NumericError("rk45: non-finite state");
            err = std::max(err, std::abs(d));
        }
        return err;
    }

    RHS rhs_;
    double rtol_, atol_;
    double h_ = 0.0;
};

// Adaptive Simpson quadrature for smooth integrands.
template <typename F>
double adaptive_simpson(F&& f, double a, double b, double tol = 1e-13, int max_depth = 50) {
    auto simpson = [&](double lo, double hi, double flo, double fmid, double fhi) {
        return (hi - lo) / 6.0 * (flo + 4.0 * fmid + fhi);
    };
    struct Frame {
        double a, b, fa, fm, fb, whole;
        int depth;
    };
    double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    std::vector<Frame> stack{{a, b, fa, fm, fb, simpson(a, b, fa, fm, fb), 0}};
    double total = 0.0;
    while (!stack.empty()) {
        Frame fr = stack.back();
        stack.pop_back();
        double m = 0.5 * (fr.a + fr.b);
        double fl = f(0.5 * (fr.a + m)), fr2 = f(0.5 * (m + fr.b));
        double left = simpson(fr.a, m, fr.fa, fl, fr.fm);
        double right = simpson(m, fr.b, fr.fm, fr2, fr.fb);
        double delta = left + right - fr.whole;
        if (fr.depth >= max_depth)
            throw NumericError("adaptive_simpson: max recursion depth");
        if (std::abs(delta) <= 15.0 * tol || fr.depth > 40) {
            total += left + right + delta / 15.0;
        } else {
            stack.push_back({fr.a, m, fr.fa, fl, fr.fm, left, fr.depth + 1});
            stack.push_back({m, fr.b, fr.fm, fr2, fr.fb, right, fr.depth + 1});
        }
    }
    return total;
}

// Brent root finder on [x1, x2]; f(x1) and f(x2) must bracket a root.
template <typename F>
double brent(F&& f, double x1, double x2, double xtol = 1e-14, int max_iter = 200) {
    double a = x1, b = x2, c = x2;
    double fa = f(a), fb = f(b), fc = fb;
    if (fa == 0) return a;
    if (fb == 0) return b;
    if (fa * fb > 0) throw NumericError("brent: root not bracketed");
    double d = 0, e = 0;
    for (int it = 0; it < max_iter; ++it) {
        if ((fb > 0 && fc > 0) || (fb < 0 && fc < 0)) {
            c = a;
            fc = fa;
            e = d = b - a;
        }
        if (std::abs(fc) < std::abs(fb)) {
            a = b; b = c; c = a;
            fa = fb; fb = fc; fc = fa;
        }
        double tol1 = 2.0 * 2.22e-16 * std::abs(b) + 0.5 * xtol;
        double xm = 0.5 * (c - b);
        if (std::abs(xm) <= tol1 || fb == 0.0) return b;
        if (std::abs(e) >= tol1 && std::abs(fa) > std::abs(fb)) {
            double s = fb / fa, p, q;
            if (a == c) {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                double r = fb / fc;
                double t = fa / fc;
                p = s * (2.0 * xm * t * (t - r) - (b - a) * (r - 1.0));
                q = (t - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if (p > 0) q = -q;
            p = std::abs(p);
            if (2.0 * p < std::min(3.0 * xm * q - std::abs(tol1 * q), std::abs(e * q))) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b += (std::abs(d) > tol1) ? d : (xm > 0 ? tol1 : -tol1);
        fb = f(b);
    }
    throw NumericError("brent: no convergence");
}

}  // namespace colehopf::detail
