#pragma once

#include <cstdint>
#include <vector>

#include "colehopf/expr.hpp"
#include "colehopf/linsolve.hpp"
#include "colehopf/transform.hpp"

namespace colehopf {

/// psi = P + Q phi'/phi evaluated on a linear field, with near-zeros of phi
/// masked instead of propagating infinities. The mask threshold is relative
/// to max|phi| per time level.
struct TransformedField {
    Grid1D grid;
    std::vector<double> times;
    std::vector<std::vector<double>> psi;      // [level][space]
    std::vector<std::vector<uint8_t>> mask;    // 1 where phi is near zero
    double eps_pole = 1e-8;
    double masked_fraction = 0.0;
    bool degenerate = false;                   // an entire level was masked
};

TransformedField apply_transform(const TransformPair& pair, const LinearField& field,
                                 const ParamEnv& env, double eps_pole = 1e-8);

}  // namespace colehopf
