#pragma once

#include "colehopf/expr.hpp"

namespace colehopf {

/// The pair (P, Q) defining the generalized transformation
/// psi = P(x) + Q(x) * phi'/phi.
struct TransformPair {
    Expr P;
    Expr Q;
};

}  // namespace colehopf
