#include "colehopf/grid.hpp"

#include <algorithm>
#include <cmath>

namespace colehopf {

namespace {

// 4th-order finite-difference slopes on a uniform grid; 5-point one-sided
// stencils at the first/last two points.
std::vector<double> fd_slopes(const std::vector<double>& f, double h) {
    const int n = static_cast<int>(f.size());
    std::vector<double> d(n);
    if (n < 5) {
        // fall back to 2nd order for tiny grids
        d[0] = (f[1] - f[0]) / h;
        d[n - 1] = (f[n - 1] - f[n - 2]) / h;
        for (int i = 1; i < n - 1; ++i) d[i] = (f[i + 1] - f[i - 1]) / (2 * h);
        return d;
    }
    for (int i = 2; i < n - 2; ++i)
        d[i] = (f[i - 2] - 8 * f[i - 1] + 8 * f[i + 1] - f[i + 2]) / (12 * h);
    d[0] = (-25 * f[0] + 48 * f[1] - 36 * f[2] + 16 * f[3] - 3 * f[4]) / (12 * h);
    d[1] = (-3 * f[0] - 10 * f[1] + 18 * f[2] - 6 * f[3] + f[4]) / (12 * h);
    d[n - 2] = (3 * f[n - 1] + 10 * f[n - 2] - 18 * f[n - 3] + 6 * f[n - 4] - f[n - 5]) / (12 * h);
    d[n - 1] = (25 * f[n - 1] - 48 * f[n - 2] + 36 * f[n - 3] - 16 * f[n - 4] + 3 * f[n - 5]) / (12 * h);
    return d;
}

}  // namespace

SampledFn::SampledFn(Grid1D grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
    if (static_cast<int>(values_.size()) != grid_.n)
        throw Error("SampledFn: value count does not match grid");
    slopes_ = fd_slopes(values_, grid_.dx());
}

double SampledFn::operator()(double x) const {
    const double h = grid_.dx();
    double s = (x - grid_.x0) / h;
    int i = static_cast<int>(std::floor(s));
    i = std::clamp(i, 0, grid_.n - 2);
    double t = s - i;
    const double f0 = values_[i], f1 = values_[i + 1];
    const double d0 = slopes_[i] * h, d1 = slopes_[i + 1] * h;
    const double t2 = t * t, t3 = t2 * t;
    return (2 * t3 - 3 * t2 + 1) * f0 + (t3 - 2 * t2 + t) * d0 +
           (-2 * t3 + 3 * t2) * f1 + (t3 - t2) * d1;
}

}  // namespace colehopf
