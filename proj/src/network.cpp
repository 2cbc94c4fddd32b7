#include "rptsc/network.hpp"

#include <cmath>
#include <stdexcept>

namespace rptsc {
namespace {

void glorot_uniform(std::vector<double>& values, std::size_t fan_in, std::size_t fan_out, Rng& rng) {
    const double limit = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
    for (double& v : values) {
        v = uniform(rng, -limit, limit);
    }
}

} // namespace

Network::Network(Shape4 input, std::vector<std::unique_ptr<Layer>> layers)
    : input_{1, input.c, input.h, input.w}, layers_(std::move(layers)) {
    if (layers_.empty()) {
        throw std::invalid_argument("network needs at least one layer");
    }
    Shape4 s = input_;
    for (const auto& layer : layers_) {
        s = layer->output_shape(s);
    }
    if (s.h != 1 || s.w != 1) {
        throw std::invalid_argument("network output must be (n, classes, 1, 1), got " + to_string(s));
    }
}

Network::Network(const Network& other) : input_(other.input_) {
    layers_.reserve(other.layers_.size());
    for (const auto& layer : other.layers_) {
        layers_.push_back(layer->clone());
    }
}

Network& Network::operator=(const Network& other) {
    if (this != &other) {
        Network copy(other);
        *this = std::move(copy);
    }
    return *this;
}

Network Network::rp_classifier(const NetworkConfig& config, std::uint64_t seed) {
    if (config.input_size != 28 && config.input_size != 56 && config.input_size != 64) {
        throw std::invalid_argument("input size must be 28, 56 or 64, got " + std::to_string(config.input_size));
    }
    if (config.num_classes < 2) {
        throw std::invalid_argument("classifier needs at least 2 classes");
    }
    Rng rng(seed);
    const std::size_t k = config.kernel;
    const std::size_t f = config.filters;

    ConvWeights conv1(f, 1, k);
    glorot_uniform(conv1.kernels, k * k, f * k * k, rng);
    ConvWeights conv2(f, f, k);
    glorot_uniform(conv2.kernels, f * k * k, f * k * k, rng);

    // Spatial size after each valid conv + floor pooling.
    std::size_t side = config.input_size;
    for (int stage = 0; stage < 2; ++stage) {
        if (side < k + 1) {
            throw std::invalid_argument("input size too small for the kernel size");
        }
        side = (side - k + 1) / 2;
    }
    const std::size_t flat = f * side * side;
    DenseWeights hidden(config.hidden, flat);
    glorot_uniform(hidden.weights, flat, config.hidden, rng);
    DenseWeights output(config.num_classes, config.hidden);
    glorot_uniform(output.weights, config.hidden, config.num_classes, rng);

    std::vector<std::unique_ptr<Layer>> layers;
    auto first = std::make_unique<Conv2dLayer>(std::move(conv1));
    first->set_input_gradient(false);
    layers.push_back(std::move(first));
    layers.push_back(std::make_unique<ReluLayer>());
    layers.push_back(std::make_unique<MaxPool2Layer>());
    layers.push_back(std::make_unique<DropoutLayer>(config.conv_dropout));
    layers.push_back(std::make_unique<Conv2dLayer>(std::move(conv2)));
    layers.push_back(std::make_unique<ReluLayer>());
    layers.push_back(std::make_unique<MaxPool2Layer>());
    layers.push_back(std::make_unique<DropoutLayer>(config.conv_dropout));
    layers.push_back(std::make_unique<FlattenLayer>());
    layers.push_back(std::make_unique<DenseLayer>(std::move(hidden)));
    layers.push_back(std::make_unique<ReluLayer>());
    layers.push_back(std::make_unique<DropoutLayer>(config.dense_dropout));
    layers.push_back(std::make_unique<DenseLayer>(std::move(output)));
    return Network(Shape4{1, 1, config.input_size, config.input_size}, std::move(layers));
}

void Network::check_input(const Tensor4& x) const {
    const Shape4& s = x.shape();
    if (s.c != input_.c || s.h != input_.h || s.w != input_.w) {
        throw std::invalid_argument("wrong input size " + to_string(s) + ", network expects (n," +
                                    std::to_string(input_.c) + "," + std::to_string(input_.h) + "," +
                                    std::to_string(input_.w) + ")");
    }
}

Tensor4 Network::forward(const Tensor4& x, Mode mode, Rng& rng) {
    check_input(x);
    Tensor4 a = layers_.front()->forward(x, mode, rng);
    for (std::size_t i = 1; i < layers_.size(); ++i) {
        a = layers_[i]->forward(a, mode, rng);
    }
    return a;
}

Tensor4 Network::backward(const Tensor4& grad_logits) {
    Tensor4 g = grad_logits;
    for (auto it = layers_.rbegin(); it != layers_.rend(); ++it) {
        g = (*it)->backward(g);
    }
    return g;
}

Tensor4 Network::logits(const Tensor4& x) const {
    check_input(x);
    Tensor4 a = layers_.front()->infer(x);
    for (std::size_t i = 1; i < layers_.size(); ++i) {
        a = layers_[i]->infer(a);
    }
    return a;
}

std::vector<std::size_t> Network::predict(const Tensor4& x) const {
    return argmax_rows(logits(x));
}

std::vector<ParamBlock> Network::parameters() {
    std::vector<ParamBlock> blocks;
    for (auto& layer : layers_) {
        for (auto& b : layer->parameters()) {
            blocks.push_back(b);
        }
    }
    return blocks;
}

std::size_t Network::parameter_count() const {
    std::size_t total = 0;
    for (const auto& v : snapshot()) {
        total += v.size();
    }
    return total;
}

std::vector<std::vector<double>> Network::snapshot() const {
    // parameters() hands out mutable spans; only reads happen here.
    auto blocks = const_cast<Network*>(this)->parameters();
    std::vector<std::vector<double>> values;
    values.reserve(blocks.size());
    for (const auto& b : blocks) {
        values.emplace_back(b.values.begin(), b.values.end());
    }
    return values;
}

void Network::restore(const std::vector<std::vector<double>>& values) {
    auto blocks = parameters();
    if (blocks.size() != values.size()) {
        throw std::invalid_argument("snapshot has a different number of parameter blocks");
    }
    for (std::size_t i = 0; i < blocks.size(); ++i) {
        if (blocks[i].values.size() != values[i].size()) {
            throw std::invalid_argument("snapshot block " + std::to_string(i) + " has the wrong size");
        }
        std::copy(values[i].begin(), values[i].end(), blocks[i].values.begin());
    }
}

void Network::fill_parameters(double value) {
    for (auto& b : parameters()) {
        std::fill(b.values.begin(), b.values.end(), value);
    }
}

std::string Network::architecture() const {
    std::string out;
    auto append = [&](const std::string& part) {
        if (!out.empty()) {
            out += '-';
        }
        out += part;
    };
    for (const auto& layer : layers_) {
        switch (layer->kind()) {
        case LayerKind::Conv2d: {
            const auto& w = static_cast<const Conv2dLayer&>(*layer).weights();
            append(std::to_string(w.out_channels) + "(" + std::to_string(w.kernel) + ")");
            break;
        }
        case LayerKind::MaxPool2: append("2"); break;
        case LayerKind::Dense:
            append(std::to_string(static_cast<const DenseLayer&>(*layer).weights().fan_out));
            break;
        default: break;
        }
    }
    return out;
}

std::size_t Network::num_classes() const {
    Shape4 s = input_;
    for (const auto& layer : layers_) {
        s = layer->output_shape(s);
    }
    return s.c;
}

} // namespace rptsc
