#include "rptsc/cnn_ops.hpp"

#include "../oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

using namespace rptsc;

namespace {

Tensor4 random_tensor(Rng& rng, Shape4 s) {
    return Tensor4(s, oracle::random_vector(rng, s.count()));
}

ConvWeights random_conv(Rng& rng, std::size_t out, std::size_t in, std::size_t k) {
    ConvWeights w(out, in, k);
    w.kernels = oracle::random_vector(rng, w.kernels.size());
    w.bias = oracle::random_vector(rng, out);
    return w;
}

// Loss used for gradient checks: weighted sum of outputs with fixed weights.
double weighted_sum(const Tensor4& y, const std::vector<double>& g) {
    return std::inner_product(y.data().begin(), y.data().end(), g.begin(), 0.0);
}

} // namespace

TEST(Conv, DeltaKernelCropsCenter) {
    Rng rng(1);
    const auto x = random_tensor(rng, {1, 1, 5, 5});
    ConvWeights w(1, 1, 3);
    w.at(0, 0, 1, 1) = 1.0;
    const auto y = conv2d_forward(x, w);
    ASSERT_EQ(y.shape(), (Shape4{1, 1, 3, 3}));
    for (std::size_t i = 0; i < 3; ++i) {
        for (std::size_t j = 0; j < 3; ++j) {
            EXPECT_EQ(y(0, 0, i, j), x(0, 0, i + 1, j + 1));
        }
    }
}

TEST(Conv, OnesKernelWithBias) {
    ConvWeights w(1, 1, 3);
    std::fill(w.kernels.begin(), w.kernels.end(), 1.0);
    w.bias[0] = 0.5;
    const auto y = conv2d_forward(Tensor4({1, 1, 3, 3}, 1.0), w);
    ASSERT_EQ(y.size(), 1u);
    EXPECT_EQ(y.data()[0], 9.5);
}

TEST(Conv, MatchesNaiveOracle) {
    Rng rng(2);
    const auto x = random_tensor(rng, {1, 2, 6, 6});
    const auto w = random_conv(rng, 4, 2, 3);
    const auto y = conv2d_forward(x, w);
    const auto want = oracle::conv(x.data(), 1, 2, 6, 6, w.kernels, w.bias, 4, 3);
    ASSERT_EQ(y.size(), want.size());
    for (std::size_t i = 0; i < want.size(); ++i) {
        EXPECT_NEAR(y.data()[i], want[i], 1e-12);
    }
}

TEST(Conv, RejectsTooSmallInputAndChannelMismatch) {
    Rng rng(3);
    EXPECT_THROW(conv2d_forward(Tensor4({1, 1, 2, 2}), ConvWeights(1, 1, 3)), std::invalid_argument);
    EXPECT_THROW(conv2d_forward(Tensor4({1, 2, 5, 5}), ConvWeights(1, 1, 3)), std::invalid_argument);
}

TEST(ConvBackward, ZeroUpstreamGivesZeroGradients) {
    Rng rng(4);
    const auto x = random_tensor(rng, {2, 2, 5, 5});
    const auto w = random_conv(rng, 3, 2, 3);
    const auto g = conv2d_backward(x, w, Tensor4({2, 3, 3, 3}));
    for (double v : g.grad_x.data()) {
        EXPECT_EQ(v, 0.0);
    }
    for (double v : g.grad_kernels) {
        EXPECT_EQ(v, 0.0);
    }
    for (double v : g.grad_bias) {
        EXPECT_EQ(v, 0.0);
    }
}

TEST(ConvBackward, SinglePixelUpstreamRecoversPatch) {
    Rng rng(5);
    const auto x = random_tensor(rng, {1, 1, 6, 6});
    const auto w = random_conv(rng, 1, 1, 3);
    Tensor4 up({1, 1, 4, 4});
    up(0, 0, 2, 1) = 1.0;
    const auto g = conv2d_backward(x, w, up);
    for (std::size_t u = 0; u < 3; ++u) {
        for (std::size_t v = 0; v < 3; ++v) {
            EXPECT_EQ(g.grad_kernels[u * 3 + v], x(0, 0, 2 + u, 1 + v));
        }
    }
    EXPECT_EQ(g.grad_bias[0], 1.0);
}

TEST(ConvBackward, MatchesFiniteDifferences) {
    Rng rng(6);
    const auto x = random_tensor(rng, {2, 2, 5, 5});
    const auto w = random_conv(rng, 3, 2, 3);
    const auto up = oracle::random_vector(rng, 2 * 3 * 3 * 3);
    const auto g = conv2d_backward(x, w, Tensor4({2, 3, 3, 3}, up));

    auto loss_x = [&](const std::vector<double>& xv) {
        return weighted_sum(conv2d_forward(Tensor4(x.shape(), xv), w), up);
    };
    auto loss_k = [&](const std::vector<double>& kv) {
        ConvWeights w2 = w;
        w2.kernels = kv;
        return weighted_sum(conv2d_forward(x, w2), up);
    };
    auto loss_b = [&](const std::vector<double>& bv) {
        ConvWeights w2 = w;
        w2.bias = bv;
        return weighted_sum(conv2d_forward(x, w2), up);
    };
    for (std::size_t i = 0; i < x.size(); ++i) {
        EXPECT_LT(oracle::relative_error(g.grad_x.data()[i], oracle::central_difference(loss_x, x.data(), i)), 1e-6);
    }
    for (std::size_t i = 0; i < w.kernels.size(); ++i) {
        EXPECT_LT(oracle::relative_error(g.grad_kernels[i], oracle::central_difference(loss_k, w.kernels, i)), 1e-6);
    }
    for (std::size_t i = 0; i < w.bias.size(); ++i) {
        EXPECT_LT(oracle::relative_error(g.grad_bias[i], oracle::central_difference(loss_b, w.bias, i)), 1e-6);
    }
}

TEST(ConvBackward, InputGradientCanBeSkipped) {
    Rng rng(7);
    const auto x = random_tensor(rng, {1, 1, 5, 5});
    const auto w = random_conv(rng, 2, 1, 3);
    const auto g = conv2d_backward(x, w, Tensor4({1, 2, 3, 3}, 1.0), false);
    EXPECT_EQ(g.grad_x.size(), 0u);
    EXPECT_EQ(g.grad_bias[0], 9.0);
}

TEST(Relu, ForwardAndBackward) {
    const Tensor4 x({1, 1, 1, 3}, {-1, 0, 2});
    EXPECT_EQ(relu(x).data(), (std::vector<double>{0, 0, 2}));
    EXPECT_EQ(relu_backward(x, Tensor4({1, 1, 1, 3}, 5.0)).data(), (std::vector<double>{0, 0, 5}));
    const Tensor4 neg({1, 1, 2, 2}, -1.0);
    const auto y = relu(neg);
    for (double v : y.data()) {
        EXPECT_EQ(v, 0.0);
    }
    const auto g = relu_backward(neg, Tensor4({1, 1, 2, 2}, 1.0));
    for (double v : g.data()) {
        EXPECT_EQ(v, 0.0);
    }
}

TEST(Relu, FiniteDifferencesAwayFromKink) {
    Rng rng(8);
    auto xv = oracle::random_vector(rng, 40);
    for (auto& v : xv) {
        if (std::abs(v) < 0.05) {
            v = 0.5;
        }
    }
    const Tensor4 x({1, 1, 5, 8}, xv);
    const auto up = oracle::random_vector(rng, 40);
    const auto g = relu_backward(x, Tensor4(x.shape(), up));
    auto loss = [&](const std::vector<double>& v) { return weighted_sum(relu(Tensor4(x.shape(), v)), up); };
    for (std::size_t i = 0; i < 40; ++i) {
        EXPECT_LT(oracle::relative_error(g.data()[i], oracle::central_difference(loss, xv, i)), 1e-6);
    }
}

TEST(MaxPool, SmallCases) {
    const auto r = maxpool2_forward(Tensor4({1, 1, 2, 2}, {1, 2, 3, 4}));
    EXPECT_EQ(r.out.data(), (std::vector<double>{4}));
    EXPECT_EQ(r.argmax, (std::vector<std::size_t>{3}));
    EXPECT_EQ(maxpool2_forward(Tensor4({1, 1, 5, 5})).out.shape(), (Shape4{1, 1, 2, 2}));
    EXPECT_THROW(maxpool2_forward(Tensor4({1, 1, 1, 4})), std::invalid_argument);
}

TEST(MaxPool, TiesRouteToFirstElement) {
    const auto r = maxpool2_forward(Tensor4({1, 1, 2, 2}, 7.0));
    EXPECT_EQ(r.argmax[0], 0u);
    const auto g = maxpool2_backward({1, 1, 2, 2}, r.argmax, Tensor4({1, 1, 1, 1}, 3.0));
    EXPECT_EQ(g.data(), (std::vector<double>{3, 0, 0, 0}));
}

TEST(MaxPool, MatchesWindowOracleAndRoutesGradient) {
    Rng rng(9);
    const auto x = random_tensor(rng, {2, 3, 8, 8});
    const auto r = maxpool2_forward(x);
    EXPECT_EQ(r.out.data(), oracle::maxpool(x.data(), 6, 8, 8));
    const auto up = oracle::random_vector(rng, r.out.size());
    const auto g = maxpool2_backward(x.shape(), r.argmax, Tensor4(r.out.shape(), up));
    auto loss = [&](const std::vector<double>& v) {
        return weighted_sum(maxpool2_forward(Tensor4(x.shape(), v)).out, up);
    };
    for (std::size_t i = 0; i < x.size(); ++i) {
        EXPECT_LT(oracle::relative_error(g.data()[i], oracle::central_difference(loss, x.data(), i)), 1e-6);
    }
}

TEST(Dropout, RateZeroAndEvalAreIdentity) {
    Rng rng(10);
    const auto x = random_tensor(rng, {2, 2, 3, 3});
    EXPECT_EQ(dropout(x, 0.0, rng, Mode::Train).out, x);
    EXPECT_EQ(dropout(x, 0.0, rng, Mode::Eval).out, x);
    EXPECT_EQ(dropout(x, 0.5, rng, Mode::Eval).out, x);
}

TEST(Dropout, StatisticsAtQuarterRate) {
    Rng rng(11);
    const Tensor4 x({1, 1, 1, 100000}, 1.0);
    const auto r = dropout(x, 0.25, rng, Mode::Train);
    const auto zeros = std::count(r.out.data().begin(), r.out.data().end(), 0.0);
    EXPECT_NEAR(static_cast<double>(zeros) / 1e5, 0.25, 0.01);
    const double mean = std::accumulate(r.out.data().begin(), r.out.data().end(), 0.0) / 1e5;
    EXPECT_NEAR(mean, 1.0, 0.02);
    const auto g = dropout_backward(r.mask, Tensor4(x.shape(), 1.0));
    EXPECT_EQ(g.data(), r.out.data());
}

TEST(Dropout, RejectsBadRate) {
    Rng rng(12);
    EXPECT_THROW(dropout(Tensor4({1, 1, 1, 1}), 1.0, rng, Mode::Train), std::invalid_argument);
    EXPECT_THROW(dropout(Tensor4({1, 1, 1, 1}), -0.1, rng, Mode::Train), std::invalid_argument);
}

TEST(Dense, IdentityAndBias) {
    Rng rng(13);
    DenseWeights w(3, 3);
    for (std::size_t i = 0; i < 3; ++i) {
        w.weights[i * 3 + i] = 1.0;
    }
    const auto x = random_tensor(rng, {2, 3, 1, 1});
    EXPECT_EQ(dense_forward(x, w).data(), x.data());
    w.bias = {1, 2, 3};
    const auto y = dense_forward(Tensor4({1, 3, 1, 1}), w);
    EXPECT_EQ(y.data(), w.bias);
    EXPECT_THROW(dense_forward(Tensor4({1, 4, 1, 1}), w), std::invalid_argument);
}

TEST(Dense, FiniteDifferences) {
    Rng rng(14);
    DenseWeights w(4, 6);
    w.weights = oracle::random_vector(rng, 24);
    w.bias = oracle::random_vector(rng, 4);
    const auto x = random_tensor(rng, {3, 6, 1, 1});
    const auto up = oracle::random_vector(rng, 12);
    const auto g = dense_backward(x, w, Tensor4({3, 4, 1, 1}, up));
    auto loss_x = [&](const std::vector<double>& v) { return weighted_sum(dense_forward(Tensor4(x.shape(), v), w), up); };
    auto loss_w = [&](const std::vector<double>& v) {
        DenseWeights w2 = w;
        w2.weights = v;
        return weighted_sum(dense_forward(x, w2), up);
    };
    auto loss_b = [&](const std::vector<double>& v) {
        DenseWeights w2 = w;
        w2.bias = v;
        return weighted_sum(dense_forward(x, w2), up);
    };
    for (std::size_t i = 0; i < x.size(); ++i) {
        EXPECT_LT(oracle::relative_error(g.grad_x.data()[i], oracle::central_difference(loss_x, x.data(), i)), 1e-6);
    }
    for (std::size_t i = 0; i < 24; ++i) {
        EXPECT_LT(oracle::relative_error(g.grad_weights[i], oracle::central_difference(loss_w, w.weights, i)), 1e-6);
    }
    for (std::size_t i = 0; i < 4; ++i) {
        EXPECT_LT(oracle::relative_error(g.grad_bias[i], oracle::central_difference(loss_b, w.bias, i)), 1e-6);
    }
}

TEST(SoftmaxXent, UniformLogitsGiveLogC) {
    for (std::size_t c : {2, 3, 10}) {
        const std::vector<std::size_t> labels{0, c - 1};
        const auto r = softmax_xent(Tensor4({2, c, 1, 1}, 0.7), labels);
        EXPECT_NEAR(r.loss, std::log(static_cast<double>(c)), 1e-15);
    }
}

TEST(SoftmaxXent, SaturatedLogitIsStable) {
    Tensor4 logits({1, 3, 1, 1});
    logits(0, 1, 0, 0) = 1000.0;
    const std::vector<std::size_t> labels{1};
    const auto r = softmax_xent(logits, labels);
    EXPECT_LT(r.loss, 1e-9);
    EXPECT_TRUE(r.grad_logits.all_finite());
    Tensor4 wrong({1, 3, 1, 1});
    wrong(0, 0, 0, 0) = 1000.0;
    const auto w = softmax_xent(wrong, labels);
    EXPECT_NEAR(w.loss, 1000.0, 1e-9);
}

TEST(SoftmaxXent, GradientMatchesFiniteDifferences) {
    Rng rng(15);
    const auto logits = random_tensor(rng, {4, 5, 1, 1});
    const std::vector<std::size_t> labels{0, 3, 4, 1};
    const auto r = softmax_xent(logits, labels);
    auto loss = [&](const std::vector<double>& v) { return softmax_xent(Tensor4(logits.shape(), v), labels).loss; };
    for (std::size_t i = 0; i < logits.size(); ++i) {
        EXPECT_LT(oracle::relative_error(r.grad_logits.data()[i], oracle::central_difference(loss, logits.data(), i)),
                  1e-6);
    }
}

TEST(Softmax, RowsSumToOneAndLossNonNegative) {
    Rng rng(16);
    for (int t = 0; t < 20; ++t) {
        const auto logits = Tensor4({3, 4, 1, 1}, oracle::random_vector(rng, 12, -50, 50));
        const auto p = softmax(logits);
        for (std::size_t b = 0; b < 3; ++b) {
            double s = 0.0;
            for (std::size_t c = 0; c < 4; ++c) {
                s += p(b, c, 0, 0);
            }
            EXPECT_NEAR(s, 1.0, 1e-12);
        }
        const std::vector<std::size_t> labels{0, 1, 2};
        EXPECT_GE(softmax_xent(logits, labels).loss, 0.0);
    }
}

TEST(Argmax, LowestIndexWinsAndShiftInvariant) {
    const Tensor4 logits({2, 3, 1, 1}, {1, 5, 5, 2, 2, 2});
    EXPECT_EQ(argmax_rows(logits), (std::vector<std::size_t>{1, 0}));
    Rng rng(17);
    auto l = random_tensor(rng, {5, 4, 1, 1});
    const auto before = argmax_rows(l);
    for (std::size_t b = 0; b < 5; ++b) {
        for (std::size_t c = 0; c < 4; ++c) {
            l(b, c, 0, 0) += 3.0 * static_cast<double>(b);
        }
    }
    EXPECT_EQ(argmax_rows(l), before);
}
