#include "rptsc/gradient_check.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace rptsc {

namespace {

// Which side of every non-differentiable point the forward pass landed on:
// the sign of each ReLU input and the selected element of each pooling window.
struct BranchPattern {
    std::vector<bool> relu_active;
    std::vector<std::size_t> pool_argmax;

    bool operator==(const BranchPattern&) const = default;
};

struct Probe {
    double loss = 0.0;
    BranchPattern pattern;
};

Probe probe(const Network& net, const Tensor4& batch, std::span<const std::size_t> labels) {
    Probe p;
    Tensor4 a = batch;
    for (const auto& layer : net.layers()) {
        if (layer->kind() == LayerKind::Relu) {
            for (double v : a.data()) {
                p.pattern.relu_active.push_back(v > 0.0);
            }
        } else if (layer->kind() == LayerKind::MaxPool2) {
            auto pooled = maxpool2_forward(a);
            p.pattern.pool_argmax.insert(p.pattern.pool_argmax.end(), pooled.argmax.begin(), pooled.argmax.end());
            a = std::move(pooled.out);
            continue;
        }
        a = layer->infer(a);
    }
    p.loss = softmax_xent(a, labels).loss;
    return p;
}

} // namespace

GradientCheckResult gradient_check(Network& net, const Tensor4& batch, std::span<const std::size_t> labels,
                                   const GradientCheckOptions& options) {
    Rng rng(options.seed);
    const Tensor4 logits = net.forward(batch, Mode::Eval, rng);
    net.backward(softmax_xent(logits, labels).grad_logits);
    const BranchPattern base = probe(net, batch, labels).pattern;

    auto blocks = net.parameters();
    std::vector<std::vector<double>> analytic;
    analytic.reserve(blocks.size());
    for (const auto& b : blocks) {
        analytic.emplace_back(b.grads.begin(), b.grads.end());
    }

    const std::size_t per_block = std::max<std::size_t>(1, options.max_parameters / std::max<std::size_t>(1, blocks.size()));
    GradientCheckResult result;
    for (std::size_t bi = 0; bi < blocks.size(); ++bi) {
        auto& block = blocks[bi];
        std::vector<std::size_t> picks(block.values.size());
        std::iota(picks.begin(), picks.end(), 0);
        if (picks.size() > per_block) {
            shuffle(std::span(picks), rng);
            picks.resize(per_block);
        }
        for (std::size_t idx : picks) {
            const double saved = block.values[idx];
            double eps = options.epsilon;
            bool smooth = false;
            double numeric = 0.0;
            for (std::size_t attempt = 0; attempt <= options.max_refinements; ++attempt, eps /= 10.0) {
                block.values[idx] = saved + eps;
                const Probe plus = probe(net, batch, labels);
                block.values[idx] = saved - eps;
                const Probe minus = probe(net, batch, labels);
                block.values[idx] = saved;
                numeric = (plus.loss - minus.loss) / (2.0 * eps);
                if (plus.pattern == base && minus.pattern == base) {
                    smooth = true;
                    break;
                }
                ++result.refinements;
            }
            if (!smooth) {
                ++result.skipped;
                continue;
            }
            const double a = analytic[bi][idx];
            const double denom = std::max({std::abs(a), std::abs(numeric), options.floor});
            result.max_relative_error = std::max(result.max_relative_error, std::abs(a - numeric) / denom);
            ++result.checked;
        }
    }
    return result;
}

} // namespace rptsc
