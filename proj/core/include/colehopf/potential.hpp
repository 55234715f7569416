#pragma once

#include <variant>

#include "colehopf/expr.hpp"
#include "colehopf/grid.hpp"

namespace colehopf {

/// Coefficient U of the linear ODE phi'' = U phi. Either a closed-form
/// expression or a grid-sampled function; both evaluate pointwise.
class LinearPotential {
public:
    LinearPotential() : u_(SampledFn{}) {}
    LinearPotential(Expr e, ParamEnv env) : u_(Closed{std::move(e), std::move(env)}) {}
    explicit LinearPotential(SampledFn s) : u_(std::move(s)) {}

    double operator()(double x) const {
        if (const auto* c = std::get_if<Closed>(&u_)) return c->e(x, c->env);
        return std::get<SampledFn>(u_)(x);
    }

    bool sampled() const { return std::holds_alternative<SampledFn>(u_); }
    const SampledFn& samples() const { return std::get<SampledFn>(u_); }

private:
    struct Closed {
        Expr e;
        ParamEnv env;
    };
    std::variant<Closed, SampledFn> u_;
};

}  // namespace colehopf
