#include "rptsc/layers.hpp"

#include <stdexcept>

namespace rptsc {

Conv2dLayer::Conv2dLayer(ConvWeights weights)
    : weights_(std::move(weights)),
      grad_kernels_(weights_.kernels.size(), 0.0),
      grad_bias_(weights_.bias.size(), 0.0) {
    if (weights_.kernel % 2 == 0) {
        throw std::invalid_argument("conv kernel size must be odd");
    }
    if (weights_.kernels.size() != weights_.out_channels * weights_.in_channels * weights_.kernel * weights_.kernel ||
        weights_.bias.size() != weights_.out_channels) {
        throw std::invalid_argument("conv weights do not match their declared shape");
    }
}

Shape4 Conv2dLayer::output_shape(const Shape4& input) const {
    if (input.c != weights_.in_channels || input.h < weights_.kernel || input.w < weights_.kernel) {
        throw std::invalid_argument("conv layer cannot accept input " + to_string(input));
    }
    return {input.n, weights_.out_channels, input.h - weights_.kernel + 1, input.w - weights_.kernel + 1};
}

Tensor4 Conv2dLayer::forward(const Tensor4& x, Mode, Rng&) {
    input_ = x;
    return conv2d_forward(x, weights_);
}

Tensor4 Conv2dLayer::backward(const Tensor4& grad_out) {
    auto g = conv2d_backward(input_, weights_, grad_out, want_grad_x_);
    grad_kernels_ = std::move(g.grad_kernels);
    grad_bias_ = std::move(g.grad_bias);
    return std::move(g.grad_x);
}

Tensor4 Conv2dLayer::infer(const Tensor4& x) const {
    return conv2d_forward(x, weights_);
}

std::vector<ParamBlock> Conv2dLayer::parameters() {
    return {{weights_.kernels, grad_kernels_}, {weights_.bias, grad_bias_}};
}

std::unique_ptr<Layer> Conv2dLayer::clone() const {
    auto copy = std::make_unique<Conv2dLayer>(weights_);
    copy->want_grad_x_ = want_grad_x_;
    return copy;
}

DenseLayer::DenseLayer(DenseWeights weights)
    : weights_(std::move(weights)),
      grad_weights_(weights_.weights.size(), 0.0),
      grad_bias_(weights_.bias.size(), 0.0) {
    if (weights_.weights.size() != weights_.fan_out * weights_.fan_in || weights_.bias.size() != weights_.fan_out) {
        throw std::invalid_argument("dense weights do not match their declared shape");
    }
}

Shape4 DenseLayer::output_shape(const Shape4& input) const {
    if (input.item() != weights_.fan_in) {
        throw std::invalid_argument("dense layer with fan_in " + std::to_string(weights_.fan_in) +
                                    " cannot accept input " + to_string(input));
    }
    return {input.n, weights_.fan_out, 1, 1};
}

Tensor4 DenseLayer::forward(const Tensor4& x, Mode, Rng&) {
    input_ = x;
    return dense_forward(x, weights_);
}

Tensor4 DenseLayer::backward(const Tensor4& grad_out) {
    auto g = dense_backward(input_, weights_, grad_out);
    grad_weights_ = std::move(g.grad_weights);
    grad_bias_ = std::move(g.grad_bias);
    return std::move(g.grad_x);
}

Tensor4 DenseLayer::infer(const Tensor4& x) const {
    return dense_forward(x, weights_);
}

std::vector<ParamBlock> DenseLayer::parameters() {
    return {{weights_.weights, grad_weights_}, {weights_.bias, grad_bias_}};
}

std::unique_ptr<Layer> DenseLayer::clone() const {
    return std::make_unique<DenseLayer>(weights_);
}

Tensor4 ReluLayer::forward(const Tensor4& x, Mode, Rng&) {
    input_ = x;
    return relu(x);
}

Tensor4 ReluLayer::backward(const Tensor4& grad_out) {
    return relu_backward(input_, grad_out);
}

Shape4 MaxPool2Layer::output_shape(const Shape4& input) const {
    if (input.h < 2 || input.w < 2) {
        throw std::invalid_argument("maxpool cannot accept input " + to_string(input));
    }
    return {input.n, input.c, input.h / 2, input.w / 2};
}

Tensor4 MaxPool2Layer::forward(const Tensor4& x, Mode, Rng&) {
    input_shape_ = x.shape();
    auto r = maxpool2_forward(x);
    argmax_ = std::move(r.argmax);
    return std::move(r.out);
}

Tensor4 MaxPool2Layer::backward(const Tensor4& grad_out) {
    return maxpool2_backward(input_shape_, argmax_, grad_out);
}

DropoutLayer::DropoutLayer(double rate) : rate_(rate) {
    if (!(rate >= 0.0 && rate < 1.0)) {
        throw std::invalid_argument("dropout rate must lie in [0, 1)");
    }
}

Tensor4 DropoutLayer::forward(const Tensor4& x, Mode mode, Rng& rng) {
    auto r = dropout(x, rate_, rng, mode);
    mask_ = std::move(r.mask);
    return std::move(r.out);
}

Tensor4 DropoutLayer::backward(const Tensor4& grad_out) {
    return dropout_backward(mask_, grad_out);
}

Shape4 FlattenLayer::output_shape(const Shape4& input) const {
    return {input.n, input.item(), 1, 1};
}

Tensor4 FlattenLayer::forward(const Tensor4& x, Mode, Rng&) {
    input_shape_ = x.shape();
    return infer(x);
}

Tensor4 FlattenLayer::backward(const Tensor4& grad_out) {
    return grad_out.reshaped(input_shape_);
}

Tensor4 FlattenLayer::infer(const Tensor4& x) const {
    return x.reshaped(output_shape(x.shape()));
}

} // namespace rptsc
