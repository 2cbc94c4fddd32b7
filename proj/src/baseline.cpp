#include "rptsc/baseline.hpp"

#include "rptsc/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace rptsc {

Metric parse_metric(const std::string& text) {
    if (text == "euclidean" || text == "ed") {
        return Metric::Euclidean;
    }
    if (text == "dtw") {
        return Metric::Dtw;
    }
    throw std::invalid_argument("unknown metric '" + text + "' (expected euclidean or dtw)");
}

std::string to_string(Metric metric) {
    return metric == Metric::Euclidean ? "euclidean" : "dtw";
}

double squared_euclidean(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) {
        throw std::invalid_argument("euclidean distance needs equal lengths (" + std::to_string(a.size()) + " vs " +
                                    std::to_string(b.size()) + ")");
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        sum += d * d;
    }
    return sum;
}

double euclidean_distance(std::span<const double> a, std::span<const double> b) {
    return std::sqrt(squared_euclidean(a, b));
}

double dtw_distance(std::span<const double> a, std::span<const double> b, const DtwParams& params) {
    if (a.empty() || b.empty()) {
        throw std::invalid_argument("dtw needs non-empty series");
    }
    // Rows walk the longer series so the buffers hold the shorter one.
    if (b.size() > a.size()) {
        std::swap(a, b);
    }
    const std::size_t n = a.size();
    const std::size_t m = b.size();
    const std::size_t w = params.window.value_or(std::max(n, m));
    if (n - m > w) {
        throw std::invalid_argument("dtw window " + std::to_string(w) + " cannot bridge lengths " + std::to_string(n) +
                                    " and " + std::to_string(m));
    }

    constexpr double inf = std::numeric_limits<double>::infinity();
    std::vector<double> prev(m + 1, inf);
    std::vector<double> cur(m + 1, inf);
    prev[0] = 0.0;
    for (std::size_t i = 1; i <= n; ++i) {
        std::fill(cur.begin(), cur.end(), inf);
        const std::size_t lo = i > w ? i - w : 1;
        const std::size_t hi = std::min(m, i + w);
        for (std::size_t j = lo; j <= hi; ++j) {
            const double d = a[i - 1] - b[j - 1];
            cur[j] = d * d + std::min({prev[j - 1], prev[j], cur[j - 1]});
        }
        std::swap(prev, cur);
    }
    return prev[m];
}

double NearestNeighbor::distance(std::span<const double> a, std::span<const double> b) const {
    if (metric == Metric::Dtw) {
        return dtw_distance(a, b, dtw);
    }
    return squared ? squared_euclidean(a, b) : euclidean_distance(a, b);
}

std::size_t one_nn_classify(const Dataset& train, std::span<const double> query, const NearestNeighbor& nn) {
    if (train.empty()) {
        throw std::invalid_argument("1-NN needs a non-empty training set");
    }
    std::size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < train.size(); ++i) {
        const double d = nn.distance(query, train.series[i].values);
        if (d < best_d) {
            best_d = d;
            best = i;
        }
    }
    return train.series[best].label;
}

double one_nn_error(const Dataset& train, const Dataset& test, const NearestNeighbor& nn) {
    if (test.empty()) {
        throw std::invalid_argument("1-NN error needs a non-empty test set");
    }
    std::vector<char> wrong(test.size(), 0);
    parallel_for(test.size(), [&](std::size_t q) {
        const auto& s = test.series[q];
        wrong[q] = one_nn_classify(train, s.values, nn) != s.label ? 1 : 0;
    });
    const auto errors = std::count(wrong.begin(), wrong.end(), 1);
    return static_cast<double>(errors) / static_cast<double>(test.size());
}

} // namespace rptsc
