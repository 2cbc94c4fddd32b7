#include "rptsc/optimizer.hpp"

#include <cmath>
#include <stdexcept>

namespace rptsc {

OptimizerKind parse_optimizer(const std::string& text) {
    if (text == "sgd" || text == "SGD") {
        return OptimizerKind::Sgd;
    }
    if (text == "adam" || text == "Adam") {
        return OptimizerKind::Adam;
    }
    throw std::invalid_argument("unknown optimizer '" + text + "' (expected sgd or adam)");
}

std::string to_string(OptimizerKind kind) {
    return kind == OptimizerKind::Sgd ? "sgd" : "adam";
}

OptimizerState make_optimizer(OptimizerKind kind) {
    return make_optimizer(kind, kind == OptimizerKind::Adam ? 1e-3 : 1e-2);
}

OptimizerState make_optimizer(OptimizerKind kind, double learning_rate) {
    if (!(learning_rate > 0.0)) {
        throw std::invalid_argument("learning rate must be positive");
    }
    OptimizerState s;
    s.kind = kind;
    s.learning_rate = learning_rate;
    return s;
}

void sgd_step(std::span<const ParamBlock> params, OptimizerState& state) {
    for (const auto& block : params) {
        for (std::size_t i = 0; i < block.values.size(); ++i) {
            block.values[i] -= state.learning_rate * block.grads[i];
        }
    }
    ++state.step;
}

void adam_step(std::span<const ParamBlock> params, OptimizerState& state) {
    if (state.first_moment.empty()) {
        for (const auto& block : params) {
            state.first_moment.emplace_back(block.values.size(), 0.0);
            state.second_moment.emplace_back(block.values.size(), 0.0);
        }
    }
    if (state.first_moment.size() != params.size()) {
        throw std::invalid_argument("optimizer state does not match the parameter blocks");
    }
    ++state.step;
    const double t = static_cast<double>(state.step);
    const double correction1 = 1.0 - std::pow(state.beta1, t);
    const double correction2 = 1.0 - std::pow(state.beta2, t);
    for (std::size_t b = 0; b < params.size(); ++b) {
        auto& m = state.first_moment[b];
        auto& v = state.second_moment[b];
        const auto& block = params[b];
        if (m.size() != block.values.size()) {
            throw std::invalid_argument("optimizer moment " + std::to_string(b) + " has the wrong size");
        }
        for (std::size_t i = 0; i < m.size(); ++i) {
            const double g = block.grads[i];
            m[i] = state.beta1 * m[i] + (1.0 - state.beta1) * g;
            v[i] = state.beta2 * v[i] + (1.0 - state.beta2) * g * g;
            const double m_hat = m[i] / correction1;
            const double v_hat = v[i] / correction2;
            block.values[i] -= state.learning_rate * m_hat / (std::sqrt(v_hat) + state.epsilon);
        }
    }
}

void optimizer_step(std::span<const ParamBlock> params, OptimizerState& state) {
    if (state.kind == OptimizerKind::Adam) {
        adam_step(params, state);
    } else {
        sgd_step(params, state);
    }
}

} // namespace rptsc
