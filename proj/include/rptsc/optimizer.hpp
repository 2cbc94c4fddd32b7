#pragma once

#include "rptsc/layers.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace rptsc {

enum class OptimizerKind : std::uint8_t { Sgd = 0, Adam = 1 };

OptimizerKind parse_optimizer(const std::string& text);
std::string to_string(OptimizerKind kind);

struct OptimizerState {
    OptimizerKind kind = OptimizerKind::Adam;
    double learning_rate = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
    std::uint64_t step = 0;
    /// Adam moments, one array per parameter block; sized on the first step.
    std::vector<std::vector<double>> first_moment;
    std::vector<std::vector<double>> second_moment;

    friend bool operator==(const OptimizerState&, const OptimizerState&) = default;
};

/// Default learning rates: 1e-3 for Adam, 1e-2 for SGD.
OptimizerState make_optimizer(OptimizerKind kind);
OptimizerState make_optimizer(OptimizerKind kind, double learning_rate);

/// p <- p - lr * g
void sgd_step(std::span<const ParamBlock> params, OptimizerState& state);

/// Adam with bias correction; increments state.step once per call.
void adam_step(std::span<const ParamBlock> params, OptimizerState& state);

/// Dispatches on state.kind.
void optimizer_step(std::span<const ParamBlock> params, OptimizerState& state);

} // namespace rptsc
