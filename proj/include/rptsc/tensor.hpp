#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

namespace rptsc {

/// (batch, channels, height, width)
struct Shape4 {
    std::size_t n = 0;
    std::size_t c = 0;
    std::size_t h = 0;
    std::size_t w = 0;

    [[nodiscard]] std::size_t count() const { return n * c * h * w; }
    /// Elements per batch item.
    [[nodiscard]] std::size_t item() const { return c * h * w; }

    friend bool operator==(const Shape4&, const Shape4&) = default;
};

std::string to_string(const Shape4& s);

/// Row-major 4-D tensor of doubles.
class Tensor4 {
public:
    Tensor4() = default;
    explicit Tensor4(Shape4 shape, double fill = 0.0) : shape_(shape), data_(shape.count(), fill) {}
    Tensor4(Shape4 shape, std::vector<double> data);

    [[nodiscard]] const Shape4& shape() const { return shape_; }
    [[nodiscard]] std::size_t size() const { return data_.size(); }

    [[nodiscard]] std::vector<double>& data() { return data_; }
    [[nodiscard]] const std::vector<double>& data() const { return data_; }

    double& operator()(std::size_t b, std::size_t ch, std::size_t i, std::size_t j) {
        return data_[((b * shape_.c + ch) * shape_.h + i) * shape_.w + j];
    }
    double operator()(std::size_t b, std::size_t ch, std::size_t i, std::size_t j) const {
        return data_[((b * shape_.c + ch) * shape_.h + i) * shape_.w + j];
    }

    double* item(std::size_t b) { return data_.data() + b * shape_.item(); }
    [[nodiscard]] const double* item(std::size_t b) const { return data_.data() + b * shape_.item(); }

    /// Same data viewed under a new shape with equal element count.
    [[nodiscard]] Tensor4 reshaped(Shape4 shape) const;

    [[nodiscard]] bool all_finite() const;

    friend bool operator==(const Tensor4&, const Tensor4&) = default;

private:
    Shape4 shape_;
    std::vector<double> data_;
};

} // namespace rptsc
