#include "rptsc/ucr_data.hpp"

#include "rptsc/random.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>

namespace rptsc {
namespace {

struct Record {
    std::size_t line;
    std::string label_token;
    double label_value;
    std::vector<double> values;
};

bool is_space(char c) {
    return c == ' ' || c == '\t' || c == '\r' || c == '\v' || c == '\f';
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && is_space(s.front())) {
        s.remove_prefix(1);
    }
    while (!s.empty() && is_space(s.back())) {
        s.remove_suffix(1);
    }
    return s;
}

std::vector<std::string_view> split_fields(std::string_view line, bool comma) {
    std::vector<std::string_view> fields;
    if (comma) {
        std::size_t start = 0;
        while (true) {
            const std::size_t pos = line.find(',', start);
            fields.push_back(trim(line.substr(start, pos == std::string_view::npos ? pos : pos - start)));
            if (pos == std::string_view::npos) {
                break;
            }
            start = pos + 1;
        }
        return fields;
    }
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && is_space(line[i])) {
            ++i;
        }
        const std::size_t begin = i;
        while (i < line.size() && !is_space(line[i])) {
            ++i;
        }
        if (i > begin) {
            fields.push_back(line.substr(begin, i - begin));
        }
    }
    return fields;
}

bool parse_double(std::string_view token, double& out) {
    if (!token.empty() && token.front() == '+') {
        token.remove_prefix(1);
    }
    if (token.empty()) {
        return false;
    }
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), out);
    return ec == std::errc{} && ptr == token.data() + token.size();
}

std::vector<Record> parse_records(std::string_view content) {
    std::vector<Record> records;
    std::optional<bool> comma;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= content.size()) {
        const std::size_t end = content.find('\n', pos);
        const std::string_view raw =
            content.substr(pos, end == std::string_view::npos ? std::string_view::npos : end - pos);
        pos = end == std::string_view::npos ? content.size() + 1 : end + 1;
        ++line_no;

        const std::string_view line = trim(raw);
        if (line.empty()) {
            continue;
        }
        if (!comma) {
            comma = line.find(',') != std::string_view::npos;
        }
        const auto fields = split_fields(line, *comma);
        if (fields.size() < 2) {
            throw ParseError(line_no, "record has no samples after the label");
        }

        Record rec{line_no, std::string(fields[0]), 0.0, {}};
        if (!parse_double(fields[0], rec.label_value) || !std::isfinite(rec.label_value)) {
            throw ParseError(line_no, "non-numeric label '" + rec.label_token + "'");
        }
        rec.values.reserve(fields.size() - 1);
        for (std::size_t f = 1; f < fields.size(); ++f) {
            double v = 0.0;
            if (!parse_double(fields[f], v)) {
                throw ParseError(line_no, "non-numeric field " + std::to_string(f + 1) + " '" +
                                              std::string(fields[f]) + "'");
            }
            if (!std::isfinite(v)) {
                throw ParseError(line_no, "non-finite sample in field " + std::to_string(f + 1));
            }
            rec.values.push_back(v);
        }
        if (!records.empty() && rec.values.size() != records.front().values.size()) {
            throw ParseError(line_no, "record has " + std::to_string(rec.values.size()) +
                                          " samples, expected " +
                                          std::to_string(records.front().values.size()));
        }
        records.push_back(std::move(rec));
    }
    if (records.empty()) {
        throw ParseError(0, "empty input");
    }
    return records;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

} // namespace

Dataset parse_ucr_file(std::string_view content, std::string name) {
    auto records = parse_records(content);

    std::vector<double> values;
    values.reserve(records.size());
    for (const auto& r : records) {
        values.push_back(r.label_value);
    }
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());
    if (values.size() < 2) {
        throw ParseError(records.front().line, "fewer than 2 distinct class labels");
    }

    Dataset ds;
    ds.name = std::move(name);
    ds.num_classes = values.size();
    ds.class_values = std::move(values);
    ds.series.reserve(records.size());
    for (auto& r : records) {
        const auto it = std::lower_bound(ds.class_values.begin(), ds.class_values.end(), r.label_value);
        ds.series.push_back({std::move(r.values),
                             static_cast<std::size_t>(it - ds.class_values.begin()),
                             std::move(r.label_token)});
    }
    return ds;
}

Dataset parse_ucr_file(std::string_view content, std::string name, const Dataset& reference) {
    auto records = parse_records(content);

    Dataset ds;
    ds.name = std::move(name);
    ds.num_classes = reference.num_classes;
    ds.class_values = reference.class_values;
    ds.series.reserve(records.size());
    for (auto& r : records) {
        const auto it = std::lower_bound(ds.class_values.begin(), ds.class_values.end(), r.label_value);
        if (it == ds.class_values.end() || *it != r.label_value) {
            throw ParseError(r.line, "label '" + r.label_token + "' does not occur in " + reference.name);
        }
        ds.series.push_back({std::move(r.values),
                             static_cast<std::size_t>(it - ds.class_values.begin()),
                             std::move(r.label_token)});
    }
    return ds;
}

Dataset load_ucr_file(const std::filesystem::path& path) {
    try {
        return parse_ucr_file(read_file(path), path.stem().string());
    } catch (const ParseError& e) {
        throw ParseError(e.line(), path.string() + ": " + e.what());
    }
}

Dataset load_ucr_file(const std::filesystem::path& path, const Dataset& reference) {
    try {
        return parse_ucr_file(read_file(path), path.stem().string(), reference);
    } catch (const ParseError& e) {
        throw ParseError(e.line(), path.string() + ": " + e.what());
    }
}

UcrSplit load_ucr_pair(const std::filesystem::path& dir, const std::string& name) {
    auto find = [&](const std::string& part) -> std::filesystem::path {
        for (const auto& base : {dir / name, dir}) {
            for (const char* ext : {".tsv", ".txt", ".csv", ""}) {
                auto p = base / (name + "_" + part + ext);
                if (std::filesystem::is_regular_file(p)) {
                    return p;
                }
            }
        }
        throw std::runtime_error("no " + part + " file for dataset " + name + " under " + dir.string());
    };
    UcrSplit split;
    split.train = load_ucr_file(find("TRAIN"));
    split.test = load_ucr_file(find("TEST"), split.train);
    split.train.name = name;
    split.test.name = name;
    return split;
}

std::string serialize_ucr(const Dataset& dataset) {
    std::string out;
    char buf[64];
    for (const auto& s : dataset.series) {
        out += s.raw_label;
        for (double v : s.values) {
            const auto res = std::to_chars(buf, buf + sizeof buf, v);
            out += ',';
            out.append(buf, res.ptr);
        }
        out += '\n';
    }
    return out;
}

void validate(const Dataset& dataset) {
    if (dataset.series.empty()) {
        throw std::invalid_argument("dataset " + dataset.name + " is empty");
    }
    if (dataset.num_classes < 2) {
        throw std::invalid_argument("dataset " + dataset.name + " has fewer than 2 classes");
    }
    const std::size_t len = dataset.series_length();
    std::vector<bool> seen(dataset.num_classes, false);
    for (std::size_t i = 0; i < dataset.series.size(); ++i) {
        const auto& s = dataset.series[i];
        if (s.values.size() != len || len == 0) {
            throw std::invalid_argument("series " + std::to_string(i) + " has length " +
                                        std::to_string(s.values.size()) + ", expected " +
                                        std::to_string(len));
        }
        if (s.label >= dataset.num_classes) {
            throw std::invalid_argument("series " + std::to_string(i) + " has label out of range");
        }
        for (double v : s.values) {
            if (!std::isfinite(v)) {
                throw std::invalid_argument("series " + std::to_string(i) + " has a non-finite sample");
            }
        }
        seen[s.label] = true;
    }
    for (std::size_t c = 0; c < seen.size(); ++c) {
        if (!seen[c]) {
            throw std::invalid_argument("class " + std::to_string(c) + " has no series");
        }
    }
}

std::vector<std::size_t> class_counts(const Dataset& dataset) {
    std::vector<std::size_t> counts(dataset.num_classes, 0);
    for (const auto& s : dataset.series) {
        ++counts.at(s.label);
    }
    return counts;
}

TimeSeries znormalize(const TimeSeries& series) {
    if (series.values.size() < 2) {
        throw std::invalid_argument("znormalize needs at least 2 samples");
    }
    const double n = static_cast<double>(series.values.size());
    double mean = 0.0;
    for (double v : series.values) {
        mean += v;
    }
    mean /= n;
    double var = 0.0;
    for (double v : series.values) {
        var += (v - mean) * (v - mean);
    }
    const double sd = std::sqrt(var / n);

    TimeSeries out = series;
    for (double& v : out.values) {
        v = sd < 1e-12 ? 0.0 : (v - mean) / sd;
    }
    return out;
}

Dataset znormalize(const Dataset& dataset) {
    Dataset out = dataset;
    for (auto& s : out.series) {
        s = znormalize(s);
    }
    return out;
}

Dataset subset(const Dataset& dataset, const std::vector<std::size_t>& indices) {
    Dataset out;
    out.name = dataset.name;
    out.num_classes = dataset.num_classes;
    out.class_values = dataset.class_values;
    out.series.reserve(indices.size());
    for (std::size_t i : indices) {
        out.series.push_back(dataset.series.at(i));
    }
    return out;
}

ValidationSplit split_validation(const Dataset& dataset, double fraction, std::uint64_t seed) {
    if (!(fraction > 0.0 && fraction < 0.5)) {
        throw std::invalid_argument("validation fraction must lie in (0, 0.5)");
    }
    std::vector<std::vector<std::size_t>> by_class(dataset.num_classes);
    for (std::size_t i = 0; i < dataset.series.size(); ++i) {
        by_class.at(dataset.series[i].label).push_back(i);
    }

    Rng rng(seed);
    std::vector<bool> to_validation(dataset.series.size(), false);
    ValidationSplit split;
    for (std::size_t c = 0; c < by_class.size(); ++c) {
        auto& members = by_class[c];
        if (members.size() <= 1) {
            split.classes_without_validation.push_back(c);
            continue;
        }
        // The small slack keeps exact products such as 0.2 * 5 from rounding up.
        auto want = static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(members.size()) - 1e-9));
        want = std::min(want, members.size() - 1);
        shuffle(std::span(members), rng);
        for (std::size_t k = 0; k < want; ++k) {
            to_validation[members[k]] = true;
        }
    }

    std::vector<std::size_t> train_idx;
    std::vector<std::size_t> val_idx;
    for (std::size_t i = 0; i < dataset.series.size(); ++i) {
        (to_validation[i] ? val_idx : train_idx).push_back(i);
    }
    split.train = subset(dataset, train_idx);
    split.validation = subset(dataset, val_idx);
    return split;
}

} // namespace rptsc
