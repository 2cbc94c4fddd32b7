#pragma once

#include "rptsc/random.hpp"
#include "rptsc/tensor.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace rptsc {

enum class Mode { Train, Eval };

/// Kernels laid out (out_channels, in_channels, k, k).
struct ConvWeights {
    std::size_t out_channels = 0;
    std::size_t in_channels = 0;
    std::size_t kernel = 0;
    std::vector<double> kernels;
    std::vector<double> bias;

    ConvWeights() = default;
    ConvWeights(std::size_t out, std::size_t in, std::size_t k)
        : out_channels(out), in_channels(in), kernel(k), kernels(out * in * k * k, 0.0), bias(out, 0.0) {}

    double& at(std::size_t o, std::size_t c, std::size_t u, std::size_t v) {
        return kernels[((o * in_channels + c) * kernel + u) * kernel + v];
    }
    [[nodiscard]] double at(std::size_t o, std::size_t c, std::size_t u, std::size_t v) const {
        return kernels[((o * in_channels + c) * kernel + u) * kernel + v];
    }
};

/// Weights laid out (fan_out, fan_in).
struct DenseWeights {
    std::size_t fan_out = 0;
    std::size_t fan_in = 0;
    std::vector<double> weights;
    std::vector<double> bias;

    DenseWeights() = default;
    DenseWeights(std::size_t out, std::size_t in) : fan_out(out), fan_in(in), weights(out * in, 0.0), bias(out, 0.0) {}
};

// Valid (unpadded), stride-1 cross-correlation:
//   out[b,o,i,j] = bias[o] + sum_{c,u,v} kernels[o,c,u,v] * x[b,c,i+u,j+v]
Tensor4 conv2d_forward(const Tensor4& x, const ConvWeights& layer);

struct ConvGrads {
    Tensor4 grad_x;  ///< empty when not requested
    std::vector<double> grad_kernels;
    std::vector<double> grad_bias;
};

ConvGrads conv2d_backward(const Tensor4& x, const ConvWeights& layer, const Tensor4& grad_out,
                          bool want_grad_x = true);

Tensor4 relu(const Tensor4& x);
Tensor4 relu_backward(const Tensor4& x, const Tensor4& grad_out);

struct PoolResult {
    Tensor4 out;
    /// Flat input index of the selected element for every output element.
    std::vector<std::size_t> argmax;
};

/// 2x2 window, stride 2; a trailing odd row/column is dropped. Ties go to the
/// first element in row-major window order.
PoolResult maxpool2_forward(const Tensor4& x);
Tensor4 maxpool2_backward(const Shape4& input_shape, std::span<const std::size_t> argmax, const Tensor4& grad_out);

struct DropoutResult {
    Tensor4 out;
    /// Per-element multiplier: 0 for dropped, 1/(1-rate) for kept (1 in eval mode).
    std::vector<double> mask;
};

/// Inverted dropout; eval mode is the identity.
DropoutResult dropout(const Tensor4& x, double rate, Rng& rng, Mode mode);
Tensor4 dropout_backward(std::span<const double> mask, const Tensor4& grad_out);

/// x is read as (n, fan_in) regardless of its spatial layout; output is (n, fan_out, 1, 1).
Tensor4 dense_forward(const Tensor4& x, const DenseWeights& layer);

struct DenseGrads {
    Tensor4 grad_x;  ///< same shape as x
    std::vector<double> grad_weights;
    std::vector<double> grad_bias;
};

DenseGrads dense_backward(const Tensor4& x, const DenseWeights& layer, const Tensor4& grad_out);

/// Row-wise softmax of (n, c, 1, 1) logits, max-subtracted.
Tensor4 softmax(const Tensor4& logits);

struct LossResult {
    double loss = 0.0;     ///< mean over the batch of -log p[label]
    Tensor4 grad_logits;   ///< (softmax - onehot) / batch
};

LossResult softmax_xent(const Tensor4& logits, std::span<const std::size_t> labels);

/// Index of the largest logit per sample; the lowest index wins ties.
std::vector<std::size_t> argmax_rows(const Tensor4& logits);

} // namespace rptsc
