#pragma once

#include "rptsc/network.hpp"

#include <cstdint>
#include <span>

namespace rptsc {

struct GradientCheckOptions {
    double epsilon = 1e-5;
    /// Upper bound on checked parameters, spread evenly over parameter blocks.
    std::size_t max_parameters = 256;
    std::uint64_t seed = 0;
    /// Denominator floor so gradients at round-off level are compared absolutely.
    double floor = 1e-6;
    /// Times the step is divided by 10 when a perturbation crosses a ReLU or
    /// pooling switch before the parameter is skipped.
    std::size_t max_refinements = 3;
};

struct GradientCheckResult {
    double max_relative_error = 0.0;
    std::size_t checked = 0;
    std::size_t refinements = 0;  ///< step reductions forced by branch crossings
    std::size_t skipped = 0;      ///< parameters still crossing at the smallest step
};

/// Compares back-propagated gradients of the mean softmax cross-entropy with
/// central finite differences on a random parameter subsample. Dropout is
/// disabled (eval-mode forward). A difference quotient is only trusted when
/// both perturbed passes keep every ReLU sign and pooling choice of the
/// unperturbed pass; otherwise the step shrinks. The decision never looks at
/// the analytic gradient. Large epsilon values inflate the error through
/// truncation; that is expected diagnostic behavior, not a failure.
GradientCheckResult gradient_check(Network& net, const Tensor4& batch, std::span<const std::size_t> labels,
                                   const GradientCheckOptions& options = {});

} // namespace rptsc
