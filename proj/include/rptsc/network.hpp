#pragma once

#include "rptsc/layers.hpp"

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace rptsc {

/// Hyperparameters of the two-stage recurrence-plot classifier.
struct NetworkConfig {
    std::size_t input_size = 28;   ///< one of 28, 56, 64
    std::size_t filters = 32;      ///< feature maps per convolution stage
    std::size_t kernel = 3;
    std::size_t hidden = 128;
    std::size_t num_classes = 2;
    double conv_dropout = 0.25;
    double dense_dropout = 0.5;
};

/// An ordered layer stack with a fixed per-item input shape.
class Network {
public:
    Network() = default;
    /// input: per-item shape; the batch field is ignored.
    Network(Shape4 input, std::vector<std::unique_ptr<Layer>> layers);

    Network(const Network& other);
    Network& operator=(const Network& other);
    Network(Network&&) noexcept = default;
    Network& operator=(Network&&) noexcept = default;
    ~Network() = default;

    /// conv-relu-pool-dropout x2, flatten, dense-relu-dropout, dense; Glorot-uniform
    /// weights drawn from the seed, zero biases.
    static Network rp_classifier(const NetworkConfig& config, std::uint64_t seed);

    /// Forward pass that records state for backward(). Train mode applies dropout.
    Tensor4 forward(const Tensor4& x, Mode mode, Rng& rng);
    /// Back-propagates d(loss)/d(logits) of the last forward(); returns d(loss)/d(input)
    /// (empty when the first layer skips its input gradient).
    Tensor4 backward(const Tensor4& grad_logits);

    /// Eval-mode logits; read-only and safe for concurrent callers.
    [[nodiscard]] Tensor4 logits(const Tensor4& x) const;
    /// Eval-mode argmax of the logits (lowest index wins ties).
    [[nodiscard]] std::vector<std::size_t> predict(const Tensor4& x) const;

    std::vector<ParamBlock> parameters();
    [[nodiscard]] std::size_t parameter_count() const;

    [[nodiscard]] std::vector<std::vector<double>> snapshot() const;
    void restore(const std::vector<std::vector<double>>& values);
    void fill_parameters(double value);

    /// Template string such as "32(3)-2-32(3)-2-128-2".
    [[nodiscard]] std::string architecture() const;

    [[nodiscard]] const Shape4& input_shape() const { return input_; }
    [[nodiscard]] std::size_t num_classes() const;
    [[nodiscard]] const std::vector<std::unique_ptr<Layer>>& layers() const { return layers_; }

private:
    void check_input(const Tensor4& x) const;

    Shape4 input_;
    std::vector<std::unique_ptr<Layer>> layers_;
};

} // namespace rptsc
