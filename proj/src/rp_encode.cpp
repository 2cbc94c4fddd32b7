#include "rptsc/rp_encode.hpp"

#include "rptsc/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace rptsc {

Norm parse_norm(const std::string& text) {
    if (text == "l1" || text == "L1") {
        return Norm::L1;
    }
    if (text == "l2" || text == "L2") {
        return Norm::L2;
    }
    if (text == "linf" || text == "Linf" || text == "LINF") {
        return Norm::Linf;
    }
    throw std::invalid_argument("unknown norm '" + text + "' (expected l1, l2 or linf)");
}

std::string to_string(Norm norm) {
    switch (norm) {
    case Norm::L1: return "l1";
    case Norm::L2: return "l2";
    case Norm::Linf: return "linf";
    }
    return "?";
}

Trajectory embed(std::span<const double> series, EmbeddingParams params) {
    if (params.m < 1 || params.tau < 1) {
        throw EncodeError("embedding requires m >= 1 and tau >= 1");
    }
    if (series.size() < params.min_length()) {
        throw EncodeError("series of length " + std::to_string(series.size()) +
                          " is too short for m=" + std::to_string(params.m) +
                          ", tau=" + std::to_string(params.tau) + " (needs at least " +
                          std::to_string(params.min_length()) + ")");
    }
    const std::size_t k = params.num_states(series.size());
    Trajectory traj{Grid(k, params.m)};
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t d = 0; d < params.m; ++d) {
            traj.states(i, d) = series[i + d * params.tau];
        }
    }
    return traj;
}

Trajectory embed(const TimeSeries& series, EmbeddingParams params) {
    return embed(std::span<const double>(series.values), params);
}

RecurrenceMatrix recurrence_matrix(const Trajectory& trajectory, Norm norm) {
    const Grid& s = trajectory.states;
    const std::size_t k = s.rows;
    const std::size_t m = s.cols;
    if (k < 2) {
        throw EncodeError("recurrence matrix needs at least 2 states");
    }
    RecurrenceMatrix r{Grid(k, k, 0.0)};
    for (std::size_t i = 0; i < k; ++i) {
        const double* si = &s.data[i * m];
        for (std::size_t j = i + 1; j < k; ++j) {
            const double* sj = &s.data[j * m];
            double acc = 0.0;
            for (std::size_t d = 0; d < m; ++d) {
                const double diff = std::abs(si[d] - sj[d]);
                switch (norm) {
                case Norm::L1: acc += diff; break;
                case Norm::L2: acc += diff * diff; break;
                case Norm::Linf: acc = std::max(acc, diff); break;
                }
            }
            const double dist = norm == Norm::L2 ? std::sqrt(acc) : acc;
            // Written once and mirrored so symmetry is exact.
            r.values(i, j) = dist;
            r.values(j, i) = dist;
        }
    }
    return r;
}

RecurrenceMatrix threshold(const RecurrenceMatrix& r, double epsilon) {
    if (!(epsilon >= 0.0)) {
        throw std::invalid_argument("threshold epsilon must be non-negative");
    }
    RecurrenceMatrix out{Grid(r.values.rows, r.values.cols)};
    for (std::size_t i = 0; i < r.values.data.size(); ++i) {
        out.values.data[i] = r.values.data[i] <= epsilon ? 1.0 : 0.0;
    }
    return out;
}

GrayImage to_gray_image(const RecurrenceMatrix& r) {
    const auto [lo, hi] = std::minmax_element(r.values.data.begin(), r.values.data.end());
    if (lo == r.values.data.end()) {
        return GrayImage{Grid(r.values.rows, r.values.cols)};
    }
    return to_gray_image(r, *lo, *hi);
}

GrayImage to_gray_image(const RecurrenceMatrix& r, double lo, double hi) {
    GrayImage img{Grid(r.values.rows, r.values.cols, 0.0)};
    const double range = hi - lo;
    if (!(range > 0.0)) {
        return img;
    }
    for (std::size_t i = 0; i < r.values.data.size(); ++i) {
        img.pixels.data[i] = std::clamp((r.values.data[i] - lo) / range, 0.0, 1.0);
    }
    return img;
}

GrayImage invert(const GrayImage& img) {
    GrayImage out = img;
    for (double& p : out.pixels.data) {
        p = 1.0 - p;
    }
    return out;
}

namespace {

struct Tap {
    std::size_t lo;
    std::size_t hi;
    double frac;
};

std::vector<Tap> resize_taps(std::size_t src, std::size_t dst) {
    std::vector<Tap> taps(dst);
    const double scale = static_cast<double>(src) / static_cast<double>(dst);
    for (std::size_t o = 0; o < dst; ++o) {
        double x = (static_cast<double>(o) + 0.5) * scale - 0.5;
        x = std::clamp(x, 0.0, static_cast<double>(src - 1));
        const auto lo = static_cast<std::size_t>(std::floor(x));
        taps[o] = {lo, std::min(lo + 1, src - 1), x - static_cast<double>(lo)};
    }
    return taps;
}

} // namespace

GrayImage resize(const GrayImage& img, std::size_t target) {
    if (target < 1) {
        throw std::invalid_argument("resize target must be at least 1");
    }
    if (img.height() < 1 || img.width() < 1) {
        throw std::invalid_argument("cannot resize an empty image");
    }
    const auto rows = resize_taps(img.height(), target);
    const auto cols = resize_taps(img.width(), target);

    // Horizontal pass, then vertical; a + w * (b - a) keeps equal neighbors exact.
    Grid tmp(img.height(), target);
    for (std::size_t r = 0; r < img.height(); ++r) {
        for (std::size_t c = 0; c < target; ++c) {
            const double a = img.pixels(r, cols[c].lo);
            const double b = img.pixels(r, cols[c].hi);
            tmp(r, c) = a + cols[c].frac * (b - a);
        }
    }
    GrayImage out{Grid(target, target)};
    for (std::size_t r = 0; r < target; ++r) {
        for (std::size_t c = 0; c < target; ++c) {
            const double a = tmp(rows[r].lo, c);
            const double b = tmp(rows[r].hi, c);
            out.pixels(r, c) = a + rows[r].frac * (b - a);
        }
    }
    return out;
}

namespace {

RecurrenceMatrix series_plot(const TimeSeries& series, const EncodeOptions& options) {
    const TimeSeries prepared = options.znormalize ? znormalize(series) : series;
    return recurrence_matrix(embed(prepared, options.embedding), options.norm);
}

GrayImage finish(const RecurrenceMatrix& r, const EncodeOptions& options,
                 std::optional<std::pair<double, double>> range) {
    GrayImage img;
    if (options.threshold) {
        img.pixels = threshold(r, *options.threshold).values;
    } else if (range) {
        img = to_gray_image(r, range->first, range->second);
    } else {
        img = to_gray_image(r);
    }
    if (options.invert) {
        img = invert(img);
    }
    if (options.image_size == 0 || img.height() == options.image_size) {
        return img;
    }
    return resize(img, options.image_size);
}

std::string series_failure(std::size_t index, const std::exception& e) {
    return "series " + std::to_string(index) + ": " + e.what();
}

} // namespace

GrayImage encode_series(const TimeSeries& series, const EncodeOptions& options) {
    return finish(series_plot(series, options), options, std::nullopt);
}

std::vector<GrayImage> encode_dataset(const Dataset& dataset, const EncodeOptions& options) {
    const std::size_t n = dataset.series.size();
    std::optional<std::pair<double, double>> range;
    if (options.global_range && !options.threshold) {
        std::vector<double> lows(n);
        std::vector<double> highs(n);
        parallel_for(n, [&](std::size_t i) {
            try {
                const auto r = series_plot(dataset.series[i], options);
                const auto [lo, hi] = std::minmax_element(r.values.data.begin(), r.values.data.end());
                lows[i] = *lo;
                highs[i] = *hi;
            } catch (const std::exception& e) {
                throw EncodeError(series_failure(i, e));
            }
        });
        range = std::pair{*std::min_element(lows.begin(), lows.end()),
                          *std::max_element(highs.begin(), highs.end())};
    }

    std::vector<GrayImage> images(n);
    parallel_for(n, [&](std::size_t i) {
        try {
            images[i] = finish(series_plot(dataset.series[i], options), options, range);
        } catch (const std::exception& e) {
            throw EncodeError(series_failure(i, e));
        }
    });
    return images;
}

} // namespace rptsc
