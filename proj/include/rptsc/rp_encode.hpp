#pragma once

#include "rptsc/ucr_data.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace rptsc {

/// Dense row-major matrix of doubles.
struct Grid {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;

    Grid() = default;
    Grid(std::size_t r, std::size_t c, double fill = 0.0) : rows(r), cols(c), data(r * c, fill) {}

    double& operator()(std::size_t r, std::size_t c) { return data[r * cols + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data[r * cols + c]; }

    friend bool operator==(const Grid&, const Grid&) = default;
};

struct EmbeddingParams {
    std::size_t m = 3;    ///< phase-space dimension
    std::size_t tau = 4;  ///< delay in samples

    /// Shortest series that still yields two states.
    [[nodiscard]] std::size_t min_length() const { return (m - 1) * tau + 2; }
    /// Number of embedded states for a series of the given length.
    [[nodiscard]] std::size_t num_states(std::size_t length) const { return length - (m - 1) * tau; }

    friend bool operator==(const EmbeddingParams&, const EmbeddingParams&) = default;
};

enum class Norm { L1, L2, Linf };

Norm parse_norm(const std::string& text);
std::string to_string(Norm norm);

/// K x m matrix; row i is (x_i, x_{i+tau}, ..., x_{i+(m-1)tau}).
struct Trajectory {
    Grid states;
};

/// K x K pairwise state distances (or {0,1} after thresholding).
struct RecurrenceMatrix {
    Grid values;
};

/// Pixels in [0, 1], row-major.
struct GrayImage {
    Grid pixels;

    [[nodiscard]] std::size_t height() const { return pixels.rows; }
    [[nodiscard]] std::size_t width() const { return pixels.cols; }
};

class EncodeError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

Trajectory embed(std::span<const double> series, EmbeddingParams params);
Trajectory embed(const TimeSeries& series, EmbeddingParams params);

RecurrenceMatrix recurrence_matrix(const Trajectory& trajectory, Norm norm = Norm::L2);

/// Heaviside thresholding with theta(0) = 1: entry is 1 where distance <= epsilon.
RecurrenceMatrix threshold(const RecurrenceMatrix& r, double epsilon);

/// Per-plot min-max scaling; a constant matrix maps to an all-zero image.
GrayImage to_gray_image(const RecurrenceMatrix& r);

/// Scaling with an externally supplied range (dataset-global normalization);
/// results are clamped to [0, 1].
GrayImage to_gray_image(const RecurrenceMatrix& r, double lo, double hi);

/// 1 - p for every pixel (bright = recurrent instead of bright = far).
GrayImage invert(const GrayImage& img);

/// Bilinear resampling with half-pixel-centered coordinates to target x target.
GrayImage resize(const GrayImage& img, std::size_t target);

struct EncodeOptions {
    EmbeddingParams embedding;
    Norm norm = Norm::L2;
    std::size_t image_size = 28;  ///< 0 keeps the native K x K plot
    bool invert = false;
    /// When set, the Heaviside-thresholded binary plot is used instead of gray levels.
    std::optional<double> threshold;
    bool znormalize = false;
    /// Normalize with the min/max over the whole dataset instead of per plot.
    bool global_range = false;

    friend bool operator==(const EncodeOptions&, const EncodeOptions&) = default;
};

/// Full pipeline for one series: embed, distances, gray levels, resize.
GrayImage encode_series(const TimeSeries& series, const EncodeOptions& options);

/// Encodes every series. Failures name the offending series index.
std::vector<GrayImage> encode_dataset(const Dataset& dataset, const EncodeOptions& options);

/// 8-bit value for a pixel: round-half-up of 255 * value, clamped.
std::uint8_t to_byte(double value);

/// Complete PNG file (8-bit grayscale, no interlace) for the image.
std::vector<std::uint8_t> encode_png(const GrayImage& img);

/// Writes encode_png(img) to path; I/O failures throw with the path in the message.
void write_png(const GrayImage& img, const std::string& path);

} // namespace rptsc
