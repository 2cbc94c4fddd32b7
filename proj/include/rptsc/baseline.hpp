#pragma once

#include "rptsc/ucr_data.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <string>

namespace rptsc {

struct DtwParams {
    /// Sakoe-Chiba half-width in samples; nullopt means unconstrained.
    std::optional<std::size_t> window;
};

enum class Metric { Euclidean, Dtw };

Metric parse_metric(const std::string& text);
std::string to_string(Metric metric);

/// Sum of squared differences. Throws std::invalid_argument on length mismatch.
double squared_euclidean(std::span<const double> a, std::span<const double> b);
double euclidean_distance(std::span<const double> a, std::span<const double> b);

/// Cumulative squared-difference cost of the cheapest warping path, without a
/// final square root. O(min(n, m)) memory.
double dtw_distance(std::span<const double> a, std::span<const double> b, const DtwParams& params = {});

struct NearestNeighbor {
    Metric metric = Metric::Dtw;
    DtwParams dtw;
    /// Euclidean only: rank by the squared distance (same neighbor, no sqrt).
    bool squared = false;

    [[nodiscard]] double distance(std::span<const double> a, std::span<const double> b) const;
};

/// Label of the closest training series; ties go to the lowest training index.
std::size_t one_nn_classify(const Dataset& train, std::span<const double> query, const NearestNeighbor& nn);

/// Misclassified fraction of test; queries are evaluated in parallel.
double one_nn_error(const Dataset& train, const Dataset& test, const NearestNeighbor& nn);

} // namespace rptsc
