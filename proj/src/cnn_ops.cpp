#include "rptsc/cnn_ops.hpp"

#include "rptsc/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace rptsc {
namespace {

void check_conv_input(const Tensor4& x, const ConvWeights& layer) {
    const Shape4& s = x.shape();
    if (s.c != layer.in_channels) {
        throw std::invalid_argument("conv input has " + std::to_string(s.c) + " channels, layer expects " +
                                    std::to_string(layer.in_channels));
    }
    if (s.h < layer.kernel || s.w < layer.kernel) {
        throw std::invalid_argument("conv input " + to_string(s) + " is smaller than the " +
                                    std::to_string(layer.kernel) + "x" + std::to_string(layer.kernel) + " kernel");
    }
}

// Unfolds one batch item into a (C*k*k) x (Ho*Wo) patch matrix.
void im2col(const double* x, std::size_t channels, std::size_t h, std::size_t w, std::size_t k, double* col) {
    const std::size_t ho = h - k + 1;
    const std::size_t wo = w - k + 1;
    for (std::size_t c = 0; c < channels; ++c) {
        for (std::size_t u = 0; u < k; ++u) {
            for (std::size_t v = 0; v < k; ++v) {
                double* row = col + ((c * k + u) * k + v) * ho * wo;
                for (std::size_t i = 0; i < ho; ++i) {
                    const double* src = x + (c * h + i + u) * w + v;
                    std::copy(src, src + wo, row + i * wo);
                }
            }
        }
    }
}

// Scatter-adds a patch-matrix gradient back onto the image layout.
void col2im(const double* col, std::size_t channels, std::size_t h, std::size_t w, std::size_t k, double* x) {
    const std::size_t ho = h - k + 1;
    const std::size_t wo = w - k + 1;
    for (std::size_t c = 0; c < channels; ++c) {
        for (std::size_t u = 0; u < k; ++u) {
            for (std::size_t v = 0; v < k; ++v) {
                const double* row = col + ((c * k + u) * k + v) * ho * wo;
                for (std::size_t i = 0; i < ho; ++i) {
                    double* dst = x + (c * h + i + u) * w + v;
                    const double* src = row + i * wo;
                    for (std::size_t j = 0; j < wo; ++j) {
                        dst[j] += src[j];
                    }
                }
            }
        }
    }
}

void sum_in_order(const std::vector<std::vector<double>>& parts, std::vector<double>& total) {
    std::fill(total.begin(), total.end(), 0.0);
    for (const auto& part : parts) {
        for (std::size_t i = 0; i < total.size(); ++i) {
            total[i] += part[i];
        }
    }
}

} // namespace

Tensor4 conv2d_forward(const Tensor4& x, const ConvWeights& layer) {
    check_conv_input(x, layer);
    const Shape4& s = x.shape();
    const std::size_t k = layer.kernel;
    const std::size_t ho = s.h - k + 1;
    const std::size_t wo = s.w - k + 1;
    const std::size_t patch = s.c * k * k;
    const std::size_t pixels = ho * wo;

    Tensor4 out(Shape4{s.n, layer.out_channels, ho, wo});
    parallel_for(s.n, [&](std::size_t b) {
        std::vector<double> col(patch * pixels);
        im2col(x.item(b), s.c, s.h, s.w, k, col.data());
        double* dst = out.item(b);
        for (std::size_t o = 0; o < layer.out_channels; ++o) {
            double* plane = dst + o * pixels;
            std::fill(plane, plane + pixels, layer.bias[o]);
            const double* wrow = layer.kernels.data() + o * patch;
            for (std::size_t q = 0; q < patch; ++q) {
                const double wq = wrow[q];
                const double* crow = col.data() + q * pixels;
                for (std::size_t p = 0; p < pixels; ++p) {
                    plane[p] += wq * crow[p];
                }
            }
        }
    });
    return out;
}

ConvGrads conv2d_backward(const Tensor4& x, const ConvWeights& layer, const Tensor4& grad_out, bool want_grad_x) {
    check_conv_input(x, layer);
    const Shape4& s = x.shape();
    const std::size_t k = layer.kernel;
    const std::size_t ho = s.h - k + 1;
    const std::size_t wo = s.w - k + 1;
    if (grad_out.shape() != Shape4{s.n, layer.out_channels, ho, wo}) {
        throw std::invalid_argument("conv grad_out shape " + to_string(grad_out.shape()) +
                                    " does not match forward output");
    }
    const std::size_t patch = s.c * k * k;
    const std::size_t pixels = ho * wo;
    const std::size_t outs = layer.out_channels;

    ConvGrads g;
    g.grad_kernels.assign(layer.kernels.size(), 0.0);
    g.grad_bias.assign(outs, 0.0);
    if (want_grad_x) {
        g.grad_x = Tensor4(s);
    }

    // Per-item partial sums reduced in batch order keep the result independent
    // of the worker count.
    std::vector<std::vector<double>> kernel_parts(s.n);
    std::vector<std::vector<double>> bias_parts(s.n);
    parallel_for(s.n, [&](std::size_t b) {
        std::vector<double> col(patch * pixels);
        im2col(x.item(b), s.c, s.h, s.w, k, col.data());
        const double* go = grad_out.item(b);

        auto& gk = kernel_parts[b];
        auto& gb = bias_parts[b];
        gk.assign(layer.kernels.size(), 0.0);
        gb.assign(outs, 0.0);
        for (std::size_t o = 0; o < outs; ++o) {
            const double* gplane = go + o * pixels;
            double bsum = 0.0;
            for (std::size_t p = 0; p < pixels; ++p) {
                bsum += gplane[p];
            }
            gb[o] = bsum;
            double* gkrow = gk.data() + o * patch;
            for (std::size_t q = 0; q < patch; ++q) {
                const double* crow = col.data() + q * pixels;
                double acc = 0.0;
                for (std::size_t p = 0; p < pixels; ++p) {
                    acc += gplane[p] * crow[p];
                }
                gkrow[q] = acc;
            }
        }

        if (want_grad_x) {
            std::vector<double> gcol(patch * pixels, 0.0);
            for (std::size_t o = 0; o < outs; ++o) {
                const double* gplane = go + o * pixels;
                const double* wrow = layer.kernels.data() + o * patch;
                for (std::size_t q = 0; q < patch; ++q) {
                    const double wq = wrow[q];
                    double* grow = gcol.data() + q * pixels;
                    for (std::size_t p = 0; p < pixels; ++p) {
                        grow[p] += wq * gplane[p];
                    }
                }
            }
            col2im(gcol.data(), s.c, s.h, s.w, k, g.grad_x.item(b));
        }
    });
    sum_in_order(kernel_parts, g.grad_kernels);
    sum_in_order(bias_parts, g.grad_bias);
    return g;
}

Tensor4 relu(const Tensor4& x) {
    Tensor4 out = x;
    for (double& v : out.data()) {
        v = v > 0.0 ? v : 0.0;
    }
    return out;
}

Tensor4 relu_backward(const Tensor4& x, const Tensor4& grad_out) {
    if (x.shape() != grad_out.shape()) {
        throw std::invalid_argument("relu_backward shape mismatch");
    }
    Tensor4 g(x.shape());
    for (std::size_t i = 0; i < x.size(); ++i) {
        g.data()[i] = x.data()[i] > 0.0 ? grad_out.data()[i] : 0.0;
    }
    return g;
}

PoolResult maxpool2_forward(const Tensor4& x) {
    const Shape4& s = x.shape();
    if (s.h < 2 || s.w < 2) {
        throw std::invalid_argument("maxpool input " + to_string(s) + " is smaller than 2x2");
    }
    const Shape4 os{s.n, s.c, s.h / 2, s.w / 2};
    PoolResult r{Tensor4(os), std::vector<std::size_t>(os.count())};
    std::size_t out_idx = 0;
    for (std::size_t b = 0; b < s.n; ++b) {
        for (std::size_t c = 0; c < s.c; ++c) {
            const std::size_t plane = (b * s.c + c) * s.h * s.w;
            for (std::size_t i = 0; i < os.h; ++i) {
                for (std::size_t j = 0; j < os.w; ++j, ++out_idx) {
                    std::size_t best = plane + (2 * i) * s.w + 2 * j;
                    for (std::size_t du = 0; du < 2; ++du) {
                        for (std::size_t dv = 0; dv < 2; ++dv) {
                            const std::size_t idx = plane + (2 * i + du) * s.w + 2 * j + dv;
                            if (x.data()[idx] > x.data()[best]) {
                                best = idx;
                            }
                        }
                    }
                    r.out.data()[out_idx] = x.data()[best];
                    r.argmax[out_idx] = best;
                }
            }
        }
    }
    return r;
}

Tensor4 maxpool2_backward(const Shape4& input_shape, std::span<const std::size_t> argmax, const Tensor4& grad_out) {
    if (argmax.size() != grad_out.size()) {
        throw std::invalid_argument("maxpool_backward: argmax record does not match grad_out");
    }
    Tensor4 g(input_shape);
    for (std::size_t i = 0; i < argmax.size(); ++i) {
        g.data().at(argmax[i]) += grad_out.data()[i];
    }
    return g;
}

DropoutResult dropout(const Tensor4& x, double rate, Rng& rng, Mode mode) {
    if (!(rate >= 0.0 && rate < 1.0)) {
        throw std::invalid_argument("dropout rate must lie in [0, 1)");
    }
    DropoutResult r{x, std::vector<double>(x.size(), 1.0)};
    if (mode == Mode::Eval || rate == 0.0) {
        return r;
    }
    const double keep_scale = 1.0 / (1.0 - rate);
    for (std::size_t i = 0; i < x.size(); ++i) {
        r.mask[i] = uniform01(rng) < rate ? 0.0 : keep_scale;
        r.out.data()[i] *= r.mask[i];
    }
    return r;
}

Tensor4 dropout_backward(std::span<const double> mask, const Tensor4& grad_out) {
    if (mask.size() != grad_out.size()) {
        throw std::invalid_argument("dropout_backward: mask does not match grad_out");
    }
    Tensor4 g = grad_out;
    for (std::size_t i = 0; i < mask.size(); ++i) {
        g.data()[i] *= mask[i];
    }
    return g;
}

Tensor4 dense_forward(const Tensor4& x, const DenseWeights& layer) {
    const std::size_t n = x.shape().n;
    if (x.shape().item() != layer.fan_in) {
        throw std::invalid_argument("dense input has " + std::to_string(x.shape().item()) +
                                    " features, layer expects " + std::to_string(layer.fan_in));
    }
    Tensor4 out(Shape4{n, layer.fan_out, 1, 1});
    for (std::size_t b = 0; b < n; ++b) {
        const double* xi = x.item(b);
        double* yo = out.item(b);
        for (std::size_t o = 0; o < layer.fan_out; ++o) {
            const double* wrow = layer.weights.data() + o * layer.fan_in;
            double acc = 0.0;
            for (std::size_t i = 0; i < layer.fan_in; ++i) {
                acc += wrow[i] * xi[i];
            }
            yo[o] = layer.bias[o] + acc;
        }
    }
    return out;
}

DenseGrads dense_backward(const Tensor4& x, const DenseWeights& layer, const Tensor4& grad_out) {
    const std::size_t n = x.shape().n;
    if (x.shape().item() != layer.fan_in) {
        throw std::invalid_argument("dense_backward: input does not match fan_in");
    }
    if (grad_out.shape().n != n || grad_out.shape().item() != layer.fan_out) {
        throw std::invalid_argument("dense_backward: grad_out shape " + to_string(grad_out.shape()) +
                                    " does not match layer output");
    }
    DenseGrads g{Tensor4(x.shape()), std::vector<double>(layer.weights.size(), 0.0),
                 std::vector<double>(layer.fan_out, 0.0)};
    for (std::size_t b = 0; b < n; ++b) {
        const double* xi = x.item(b);
        const double* go = grad_out.item(b);
        double* gx = g.grad_x.item(b);
        for (std::size_t o = 0; o < layer.fan_out; ++o) {
            const double d = go[o];
            g.grad_bias[o] += d;
            double* gw = g.grad_weights.data() + o * layer.fan_in;
            const double* wrow = layer.weights.data() + o * layer.fan_in;
            for (std::size_t i = 0; i < layer.fan_in; ++i) {
                gw[i] += d * xi[i];
                gx[i] += d * wrow[i];
            }
        }
    }
    return g;
}

Tensor4 softmax(const Tensor4& logits) {
    const std::size_t n = logits.shape().n;
    const std::size_t c = logits.shape().item();
    Tensor4 p(logits.shape());
    for (std::size_t b = 0; b < n; ++b) {
        const double* z = logits.item(b);
        double* out = p.item(b);
        const double zmax = *std::max_element(z, z + c);
        double sum = 0.0;
        for (std::size_t j = 0; j < c; ++j) {
            out[j] = std::exp(z[j] - zmax);
            sum += out[j];
        }
        for (std::size_t j = 0; j < c; ++j) {
            out[j] /= sum;
        }
    }
    return p;
}

LossResult softmax_xent(const Tensor4& logits, std::span<const std::size_t> labels) {
    const std::size_t n = logits.shape().n;
    const std::size_t c = logits.shape().item();
    if (labels.size() != n) {
        throw std::invalid_argument("softmax_xent: " + std::to_string(labels.size()) + " labels for batch of " +
                                    std::to_string(n));
    }
    if (c < 2) {
        throw std::invalid_argument("softmax_xent needs at least 2 classes");
    }
    LossResult r{0.0, Tensor4(logits.shape())};
    const double inv_n = 1.0 / static_cast<double>(n);
    for (std::size_t b = 0; b < n; ++b) {
        if (labels[b] >= c) {
            throw std::invalid_argument("label " + std::to_string(labels[b]) + " out of range");
        }
        const double* z = logits.item(b);
        const double zmax = *std::max_element(z, z + c);
        double sum = 0.0;
        for (std::size_t j = 0; j < c; ++j) {
            sum += std::exp(z[j] - zmax);
        }
        const double log_sum = std::log(sum);
        // -log softmax[label] = log(sum exp(z - zmax)) - (z[label] - zmax)
        r.loss += log_sum - (z[labels[b]] - zmax);
        double* g = r.grad_logits.item(b);
        for (std::size_t j = 0; j < c; ++j) {
            const double p = std::exp(z[j] - zmax - log_sum);
            g[j] = (p - (j == labels[b] ? 1.0 : 0.0)) * inv_n;
        }
    }
    r.loss *= inv_n;
    return r;
}

std::vector<std::size_t> argmax_rows(const Tensor4& logits) {
    const std::size_t n = logits.shape().n;
    const std::size_t c = logits.shape().item();
    std::vector<std::size_t> out(n);
    for (std::size_t b = 0; b < n; ++b) {
        const double* z = logits.item(b);
        out[b] = static_cast<std::size_t>(std::max_element(z, z + c) - z);
    }
    return out;
}

} // namespace rptsc
