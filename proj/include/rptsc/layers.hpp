#pragma once

#include "rptsc/cnn_ops.hpp"

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace rptsc {

/// Checkpoint tag of each layer kind; values are part of the file format.
enum class LayerKind : std::uint8_t {
    Conv2d = 1,
    Dense = 2,
    Relu = 3,
    MaxPool2 = 4,
    Dropout = 5,
    Flatten = 6,
};

/// A trainable parameter array together with its gradient buffer.
struct ParamBlock {
    std::span<double> values;
    std::span<double> grads;
};

/// One stage of the network. forward() caches what backward() needs, so a
/// layer object serves one training step at a time; infer() is const and
/// safe to call concurrently.
class Layer {
public:
    virtual ~Layer() = default;

    [[nodiscard]] virtual LayerKind kind() const = 0;
    [[nodiscard]] virtual Shape4 output_shape(const Shape4& input) const = 0;

    virtual Tensor4 forward(const Tensor4& x, Mode mode, Rng& rng) = 0;
    /// Gradient w.r.t. the input of the last forward(); fills parameter grads.
    virtual Tensor4 backward(const Tensor4& grad_out) = 0;
    [[nodiscard]] virtual Tensor4 infer(const Tensor4& x) const = 0;

    virtual std::vector<ParamBlock> parameters() { return {}; }
    [[nodiscard]] virtual std::unique_ptr<Layer> clone() const = 0;
};

class Conv2dLayer final : public Layer {
public:
    explicit Conv2dLayer(ConvWeights weights);

    [[nodiscard]] LayerKind kind() const override { return LayerKind::Conv2d; }
    [[nodiscard]] Shape4 output_shape(const Shape4& input) const override;
    Tensor4 forward(const Tensor4& x, Mode mode, Rng& rng) override;
    Tensor4 backward(const Tensor4& grad_out) override;
    [[nodiscard]] Tensor4 infer(const Tensor4& x) const override;
    std::vector<ParamBlock> parameters() override;
    [[nodiscard]] std::unique_ptr<Layer> clone() const override;

    [[nodiscard]] const ConvWeights& weights() const { return weights_; }
    ConvWeights& weights() { return weights_; }
    /// Skip the input gradient (first layer of a network).
    void set_input_gradient(bool enabled) { want_grad_x_ = enabled; }

private:
    ConvWeights weights_;
    std::vector<double> grad_kernels_;
    std::vector<double> grad_bias_;
    Tensor4 input_;
    bool want_grad_x_ = true;
};

class DenseLayer final : public Layer {
public:
    explicit DenseLayer(DenseWeights weights);

    [[nodiscard]] LayerKind kind() const override { return LayerKind::Dense; }
    [[nodiscard]] Shape4 output_shape(const Shape4& input) const override;
    Tensor4 forward(const Tensor4& x, Mode mode, Rng& rng) override;
    Tensor4 backward(const Tensor4& grad_out) override;
    [[nodiscard]] Tensor4 infer(const Tensor4& x) const override;
    std::vector<ParamBlock> parameters() override;
    [[nodiscard]] std::unique_ptr<Layer> clone() const override;

    [[nodiscard]] const DenseWeights& weights() const { return weights_; }
    DenseWeights& weights() { return weights_; }

private:
    DenseWeights weights_;
    std::vector<double> grad_weights_;
    std::vector<double> grad_bias_;
    Tensor4 input_;
};

class ReluLayer final : public Layer {
public:
    [[nodiscard]] LayerKind kind() const override { return LayerKind::Relu; }
    [[nodiscard]] Shape4 output_shape(const Shape4& input) const override { return input; }
    Tensor4 forward(const Tensor4& x, Mode mode, Rng& rng) override;
    Tensor4 backward(const Tensor4& grad_out) override;
    [[nodiscard]] Tensor4 infer(const Tensor4& x) const override { return relu(x); }
    [[nodiscard]] std::unique_ptr<Layer> clone() const override { return std::make_unique<ReluLayer>(); }

private:
    Tensor4 input_;
};

class MaxPool2Layer final : public Layer {
public:
    [[nodiscard]] LayerKind kind() const override { return LayerKind::MaxPool2; }
    [[nodiscard]] Shape4 output_shape(const Shape4& input) const override;
    Tensor4 forward(const Tensor4& x, Mode mode, Rng& rng) override;
    Tensor4 backward(const Tensor4& grad_out) override;
    [[nodiscard]] Tensor4 infer(const Tensor4& x) const override { return maxpool2_forward(x).out; }
    [[nodiscard]] std::unique_ptr<Layer> clone() const override { return std::make_unique<MaxPool2Layer>(); }

private:
    Shape4 input_shape_;
    std::vector<std::size_t> argmax_;
};

class DropoutLayer final : public Layer {
public:
    explicit DropoutLayer(double rate);

    [[nodiscard]] LayerKind kind() const override { return LayerKind::Dropout; }
    [[nodiscard]] Shape4 output_shape(const Shape4& input) const override { return input; }
    Tensor4 forward(const Tensor4& x, Mode mode, Rng& rng) override;
    Tensor4 backward(const Tensor4& grad_out) override;
    [[nodiscard]] Tensor4 infer(const Tensor4& x) const override { return x; }
    [[nodiscard]] std::unique_ptr<Layer> clone() const override { return std::make_unique<DropoutLayer>(rate_); }

    [[nodiscard]] double rate() const { return rate_; }

private:
    double rate_;
    std::vector<double> mask_;
};

/// (n, c, h, w) -> (n, c*h*w, 1, 1)
class FlattenLayer final : public Layer {
public:
    [[nodiscard]] LayerKind kind() const override { return LayerKind::Flatten; }
    [[nodiscard]] Shape4 output_shape(const Shape4& input) const override;
    Tensor4 forward(const Tensor4& x, Mode mode, Rng& rng) override;
    Tensor4 backward(const Tensor4& grad_out) override;
    [[nodiscard]] Tensor4 infer(const Tensor4& x) const override;
    [[nodiscard]] std::unique_ptr<Layer> clone() const override { return std::make_unique<FlattenLayer>(); }

private:
    Shape4 input_shape_;
};

} // namespace rptsc
