#pragma once

#include <cstddef>
#include <vector>

#include "colehopf/errors.hpp"

namespace colehopf {

/// Uniform 1-D grid with n points on [x0, x1].
struct Grid1D {
    double x0 = 0.0;
    double x1 = 1.0;
    int n = 3;

    Grid1D() = default;
    Grid1D(double x0_, double x1_, int n_) : x0(x0_), x1(x1_), n(n_) {
        if (n < 3) throw Error("Grid1D: n must be >= 3");
        if (!(x1 > x0)) throw Error("Grid1D: x1 must exceed x0");
    }

    double dx() const { return (x1 - x0) / (n - 1); }
    double point(int i) const { return x0 + i * dx(); }

    std::vector<double> points() const {
        std::vector<double> p(n);
        for (int i = 0; i < n; ++i) p[i] = point(i);
        return p;
    }
};

/// Function sampled on a uniform grid, evaluated anywhere on [x0, x1] by
/// cubic Hermite interpolation with 4th-order finite-difference slopes.
class SampledFn {
public:
    SampledFn() = default;
    SampledFn(Grid1D grid, std::vector<double> values);

    double operator()(double x) const;

    const Grid1D& grid() const { return grid_; }
    const std::vector<double>& values() const { return values_; }

private:
    Grid1D grid_;
    std::vector<double> values_;
    std::vector<double> slopes_;
};

}  // namespace colehopf
