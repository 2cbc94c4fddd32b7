#include "rptsc/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rptsc {

std::string to_string(const Shape4& s) {
    return "(" + std::to_string(s.n) + "," + std::to_string(s.c) + "," + std::to_string(s.h) + "," +
           std::to_string(s.w) + ")";
}

Tensor4::Tensor4(Shape4 shape, std::vector<double> data) : shape_(shape), data_(std::move(data)) {
    if (data_.size() != shape_.count()) {
        throw std::invalid_argument("tensor data length " + std::to_string(data_.size()) +
                                    " does not match shape " + to_string(shape_));
    }
}

Tensor4 Tensor4::reshaped(Shape4 shape) const {
    return Tensor4(shape, data_);
}

bool Tensor4::all_finite() const {
    return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

} // namespace rptsc
