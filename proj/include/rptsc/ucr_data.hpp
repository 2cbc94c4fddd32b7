#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace rptsc {

/// One labeled univariate series.
struct TimeSeries {
    std::vector<double> values;
    std::size_t label = 0;   ///< class index in [0, num_classes)
    std::string raw_label;   ///< label token exactly as read from the file
};

/// A collection of equal-length labeled series with labels remapped onto
/// 0..num_classes-1 in ascending numeric order of the raw labels.
struct Dataset {
    std::string name;
    std::vector<TimeSeries> series;
    std::size_t num_classes = 0;
    /// Numeric value of each class's raw label, indexed by class; strictly increasing.
    std::vector<double> class_values;

    [[nodiscard]] std::size_t size() const { return series.size(); }
    [[nodiscard]] bool empty() const { return series.empty(); }
    [[nodiscard]] std::size_t series_length() const {
        return series.empty() ? 0 : series.front().values.size();
    }
};

class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

    /// 1-based line number of the offending record; 0 when not tied to a line.
    [[nodiscard]] std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

/// Parses UCR text (comma- or whitespace-delimited, label first).
Dataset parse_ucr_file(std::string_view content, std::string name);

/// Parses a file whose labels must be mapped with reference's label table
/// (a TEST file paired with its TRAIN file). Unknown labels are an error.
Dataset parse_ucr_file(std::string_view content, std::string name, const Dataset& reference);

Dataset load_ucr_file(const std::filesystem::path& path);
Dataset load_ucr_file(const std::filesystem::path& path, const Dataset& reference);

struct UcrSplit {
    Dataset train;
    Dataset test;
};

/// Locates <dir>/<name>_TRAIN.{tsv,txt,csv} and the matching TEST file, also
/// looking inside <dir>/<name>/.
UcrSplit load_ucr_pair(const std::filesystem::path& dir, const std::string& name);

/// Comma-delimited text with raw labels preserved; parse_ucr_file inverts it.
std::string serialize_ucr(const Dataset& dataset);

/// Checks the Dataset invariants; throws std::invalid_argument on violation.
void validate(const Dataset& dataset);

std::vector<std::size_t> class_counts(const Dataset& dataset);

/// Mean 0, population standard deviation 1; near-constant input maps to zeros.
TimeSeries znormalize(const TimeSeries& series);
Dataset znormalize(const Dataset& dataset);

struct ValidationSplit {
    Dataset train;
    Dataset validation;
    /// Classes that could not contribute a validation sample (single member).
    std::vector<std::size_t> classes_without_validation;
};

/// Stratified split: per class, ceil(fraction * count) series go to validation,
/// capped at count - 1. Both halves keep the input's original series order.
ValidationSplit split_validation(const Dataset& dataset, double fraction, std::uint64_t seed);

/// Series with the given indices, in the given order.
Dataset subset(const Dataset& dataset, const std::vector<std::size_t>& indices);

} // namespace rptsc
