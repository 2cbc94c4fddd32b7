#include "rptsc/cli.hpp"

#include "rptsc/baseline.hpp"
#include "rptsc/checkpoint.hpp"
#include "rptsc/rank.hpp"
#include "rptsc/train.hpp"
#include "rptsc/ucr_data.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#ifndef RPTSC_VERSION
#define RPTSC_VERSION "unknown"
#endif

namespace rptsc::cli {
namespace fs = std::filesystem;

namespace {

std::string num(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string fixed4(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4f", v);
    return buf;
}

std::string read_text(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open " + path.string());
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
    if (!out.flush()) {
        throw std::runtime_error("cannot write " + path.string());
    }
}

void ensure_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) {
        throw std::runtime_error("cannot create directory " + dir.string() + ": " + ec.message());
    }
}

/// Ordered key = value lines, the same syntax parse_config reads back.
class Manifest {
public:
    void set(const std::string& key, const std::string& value) { lines_.emplace_back(key, value); }
    [[nodiscard]] std::string text() const {
        std::string out;
        for (const auto& [k, v] : lines_) {
            out += k + " = " + v + '\n';
        }
        return out;
    }

private:
    std::vector<std::pair<std::string, std::string>> lines_;
};

// Keys a manifest carries that are not flags; ignored when a manifest is
// reused as a config file.
bool informational_key(const std::string& key) {
    return key == "command" || key == "tool_version" || key == "config_file" || key == "num_classes" ||
           key == "train_size" || key == "test_size" || key == "series_length";
}

/// Applies config-file values to options the command line left unset.
void apply_config(CLI::App& app, const std::string& path) {
    if (path.empty()) {
        return;
    }
    for (const auto& [key, value] : parse_config(read_text(path))) {
        if (informational_key(key) || key == "config" || value.empty()) {
            continue;
        }
        CLI::Option* opt = app.get_option_no_throw("--" + key);
        if (opt == nullptr) {
            throw std::invalid_argument(path + ": unknown key '" + key + "'");
        }
        if (opt->count() == 0) {
            opt->add_result(value);
            opt->run_callback();
        }
    }
}

struct DataArgs {
    std::string train_file;
    std::string test_file;
    std::string data_dir;
    std::string dataset;

    void add(CLI::App& app, bool with_test) {
        app.add_option("--train", train_file, "Training file in UCR format");
        if (with_test) {
            app.add_option("--test", test_file, "Test file in UCR format");
        }
        app.add_option("--data-dir", data_dir, "Directory with <name>_TRAIN / <name>_TEST files");
        app.add_option("--dataset", dataset, "Dataset name inside --data-dir");
    }

    [[nodiscard]] UcrSplit load(bool need_test) const {
        if (!data_dir.empty() || !dataset.empty()) {
            if (data_dir.empty() || dataset.empty()) {
                throw std::invalid_argument("--data-dir and --dataset go together");
            }
            return load_ucr_pair(data_dir, dataset);
        }
        if (train_file.empty()) {
            throw std::invalid_argument("give --train (and --test) or --data-dir with --dataset");
        }
        UcrSplit s;
        s.train = load_ucr_file(train_file);
        if (need_test) {
            if (test_file.empty()) {
                throw std::invalid_argument("--test is required");
            }
            s.test = load_ucr_file(test_file, s.train);
        }
        return s;
    }

    void record(Manifest& m) const {
        m.set("train", train_file);
        m.set("test", test_file);
        m.set("data-dir", data_dir);
        m.set("dataset", dataset);
    }
};

struct EncodeArgs {
    std::size_t m = 3;
    std::size_t tau = 4;
    std::string norm = "l2";
    bool invert = false;
    double threshold = 0.0;
    CLI::Option* threshold_opt = nullptr;
    bool znorm = false;
    bool global_range = false;

    void add(CLI::App& app) {
        app.add_option("--m", m, "Embedding dimension")->check(CLI::PositiveNumber);
        app.add_option("--tau", tau, "Embedding delay")->check(CLI::PositiveNumber);
        app.add_option("--norm", norm, "State distance: l1, l2 or linf");
        app.add_flag("--invert", invert, "Bright pixels mark close states");
        threshold_opt = app.add_option("--threshold", threshold, "Binary plot with this distance threshold");
        app.add_flag("--znorm", znorm, "z-normalize each series first");
        app.add_flag("--global-range", global_range, "Gray levels from the dataset-wide distance range");
    }

    [[nodiscard]] EncodeOptions options(std::size_t size) const {
        EncodeOptions o;
        o.embedding = {m, tau};
        o.norm = parse_norm(norm);
        o.image_size = size;
        o.invert = invert;
        if (threshold_opt->count() > 0) {
            o.threshold = threshold;
        }
        o.znormalize = znorm;
        o.global_range = global_range;
        return o;
    }

    static void record(Manifest& mf, const EncodeOptions& o) {
        mf.set("m", std::to_string(o.embedding.m));
        mf.set("tau", std::to_string(o.embedding.tau));
        mf.set("norm", to_string(o.norm));
        mf.set("size", std::to_string(o.image_size));
        mf.set("invert", o.invert ? "true" : "false");
        if (o.threshold) {
            mf.set("threshold", num(*o.threshold));
        }
        mf.set("znorm", o.znormalize ? "true" : "false");
        mf.set("global-range", o.global_range ? "true" : "false");
    }
};

void record_dataset(Manifest& mf, const UcrSplit& data, bool with_test) {
    mf.set("num_classes", std::to_string(data.train.num_classes));
    mf.set("series_length", std::to_string(data.train.series_length()));
    mf.set("train_size", std::to_string(data.train.size()));
    if (with_test) {
        mf.set("test_size", std::to_string(data.test.size()));
    }
}

Manifest manifest_head(const std::string& command, const std::string& config, const std::string& out_dir) {
    Manifest mf;
    mf.set("command", command);
    mf.set("tool_version", RPTSC_VERSION);
    mf.set("config_file", config.empty() ? "none" : config);
    mf.set("out", out_dir);
    return mf;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

// ---------------------------------------------------------------- encode

struct EncodeCommand {
    std::string config;
    DataArgs data;
    EncodeArgs enc;
    std::size_t size = 28;
    std::string split = "train";
    std::string out_dir;

    void add(CLI::App& app) {
        app.add_option("--config", config, "key = value file; command-line flags win");
        data.add(app, true);
        enc.add(app);
        app.add_option("--size", size, "Output image side (0 keeps the native K x K plot)");
        app.add_option("--split", split, "Which file to encode with --data-dir: train or test")
            ->check(CLI::IsMember({"train", "test"}));
        app.add_option("--out", out_dir, "Output directory");
    }

    int execute(std::ostream& out) const {
        if (out_dir.empty()) {
            throw std::invalid_argument("--out is required");
        }
        const bool want_test = split == "test";
        const UcrSplit pair = data.load(want_test);
        const Dataset& ds = want_test ? pair.test : pair.train;
        const EncodeOptions options = enc.options(size);

        const auto started = std::chrono::steady_clock::now();
        const auto images = encode_dataset(ds, options);

        const fs::path root(out_dir);
        ensure_dir(root / "images");
        std::string index = "series_id,label,raw_label,path\n";
        for (std::size_t i = 0; i < images.size(); ++i) {
            char name[32];
            std::snprintf(name, sizeof name, "series_%05zu.png", i);
            const fs::path rel = fs::path("images") / name;
            write_png(images[i], (root / rel).string());
            index += std::to_string(i) + ',' + std::to_string(ds.series[i].label) + ',' + ds.series[i].raw_label +
                     ',' + rel.generic_string() + '\n';
        }
        write_text(root / "index.csv", index);

        Manifest mf = manifest_head("encode", config, out_dir);
        data.record(mf);
        mf.set("split", split);
        EncodeArgs::record(mf, options);
        record_dataset(mf, pair, want_test);
        write_text(root / "manifest.txt", mf.text());

        out << "encoded " << images.size() << " series from " << ds.name << " into " << (root / "images").string()
            << " (" << fixed4(seconds_since(started)) << " s)\n";
        return 0;
    }
};

// ---------------------------------------------------------------- train

struct TrainCommand {
    std::string config;
    DataArgs data;
    EncodeArgs enc;
    TrainConfig tc;
    std::string optimizer = "adam";
    double learning_rate = 0.0;
    CLI::Option* lr_opt = nullptr;
    bool grid = false;
    std::string out_dir;

    void add(CLI::App& app) {
        app.add_option("--config", config, "key = value file; command-line flags win");
        data.add(app, true);
        enc.add(app);
        app.add_option("--size", tc.input_size, "Network input side: 28, 56 or 64");
        app.add_option("--batch", tc.batch_size, "Mini-batch size")->check(CLI::PositiveNumber);
        app.add_option("--epochs", tc.epochs, "Training epochs")->check(CLI::PositiveNumber);
        app.add_option("--optimizer", optimizer, "adam or sgd");
        lr_opt = app.add_option("--lr", learning_rate, "Learning rate (default 1e-3 for adam, 1e-2 for sgd)");
        app.add_option("--kernel", tc.kernel_size, "Convolution kernel side (odd)");
        app.add_option("--filters", tc.filters, "Feature maps per convolution stage");
        app.add_option("--hidden", tc.hidden, "Hidden dense units");
        app.add_option("--conv-dropout", tc.conv_dropout, "Dropout rate after each pooling stage");
        app.add_option("--dense-dropout", tc.dense_dropout, "Dropout rate after the hidden layer");
        app.add_option("--seed", tc.seed, "Random seed");
        app.add_option("--val-fraction", tc.validation_fraction, "Validation share per class (0 disables)");
        app.add_flag("--grid", grid, "Select batch and epochs from {5,20} x {50,250,1000,2000}");
        app.add_option("--out", out_dir, "Output directory");
    }

    [[nodiscard]] TrainConfig resolved() const {
        TrainConfig c = tc;
        c.optimizer = parse_optimizer(optimizer);
        c.learning_rate = lr_opt->count() > 0 ? learning_rate : make_optimizer(c.optimizer).learning_rate;
        c.encoding = enc.options(c.input_size);
        validate(c);
        return c;
    }

    static void record(Manifest& mf, const TrainConfig& c) {
        mf.set("batch", std::to_string(c.batch_size));
        mf.set("epochs", std::to_string(c.epochs));
        mf.set("optimizer", to_string(c.optimizer));
        mf.set("lr", num(c.learning_rate));
        mf.set("kernel", std::to_string(c.kernel_size));
        mf.set("filters", std::to_string(c.filters));
        mf.set("hidden", std::to_string(c.hidden));
        mf.set("conv-dropout", num(c.conv_dropout));
        mf.set("dense-dropout", num(c.dense_dropout));
        mf.set("seed", std::to_string(c.seed));
        mf.set("val-fraction", num(c.validation_fraction));
        EncodeArgs::record(mf, c.encoding);
    }

    int execute(std::ostream& out) const {
        if (out_dir.empty()) {
            throw std::invalid_argument("--out is required");
        }
        const TrainConfig base = resolved();
        const UcrSplit pair = data.load(true);
        const auto started = std::chrono::steady_clock::now();

        TrainedModel model;
        std::string grid_csv;
        if (grid) {
            GridResult g = grid_select(pair.train, default_grid(base));
            grid_csv = "batch,epochs,ok,validation_error,validation_loss,best_epoch,selected,failure\n";
            for (std::size_t i = 0; i < g.cells.size(); ++i) {
                const auto& cell = g.cells[i];
                grid_csv += std::to_string(cell.config.batch_size) + ',' + std::to_string(cell.config.epochs) + ',' +
                            (cell.ok ? "1" : "0") + ',' + num(cell.validation_error) + ',' +
                            num(cell.validation_loss) + ',' + std::to_string(cell.best_epoch) + ',' +
                            (i == g.selected ? "1" : "0") + ',' + cell.failure + '\n';
                out << "grid batch=" << cell.config.batch_size << " epochs=" << cell.config.epochs;
                if (cell.ok) {
                    out << " validation_error=" << fixed4(cell.validation_error)
                        << " validation_loss=" << fixed4(cell.validation_loss) << '\n';
                } else {
                    out << " failed: " << cell.failure << '\n';
                }
            }
            out << "selected batch=" << g.selected_config().batch_size << " epochs=" << g.selected_config().epochs
                << '\n';
            model = std::move(g.model);
        } else {
            model = train_model(pair.train, base);
        }

        const double error = evaluate(model.network, pair.test, model.report.config);
        model.report.test_error = error;

        const fs::path root(out_dir);
        ensure_dir(root);
        save_checkpoint(root / "model.ckpt", model.network, model.optimizer);
        write_text(root / "report.csv", report_csv(model.report));
        if (grid) {
            write_text(root / "grid.csv", grid_csv);
        }

        Manifest mf = manifest_head("train", config, out_dir);
        data.record(mf);
        record(mf, model.report.config);
        mf.set("grid", grid ? "true" : "false");
        record_dataset(mf, pair, true);
        write_text(root / "manifest.txt", mf.text());

        out << "architecture " << model.network.architecture() << '\n';
        out << "best epoch " << model.report.best_epoch << " of " << model.report.config.epochs << '\n';
        out << "test error " << fixed4(error) << '\n';
        out << "wall time " << fixed4(seconds_since(started)) << " s\n";
        return 0;
    }
};

// ---------------------------------------------------------------- baseline

struct BaselineCommand {
    std::string config;
    DataArgs data;
    std::string metric = "dtw";
    std::size_t window = 0;
    CLI::Option* window_opt = nullptr;
    std::string results;

    void add(CLI::App& app) {
        app.add_option("--config", config, "key = value file; command-line flags win");
        data.add(app, true);
        app.add_option("--metric", metric, "euclidean, dtw or both")
            ->check(CLI::IsMember({"euclidean", "ed", "dtw", "both"}));
        window_opt = app.add_option("--window", window, "Sakoe-Chiba half-width for dtw (default: unconstrained)");
        app.add_option("--results", results, "CSV file to append results to");
    }

    int execute(std::ostream& out) const {
        const UcrSplit pair = data.load(true);
        std::vector<Metric> metrics;
        if (metric == "both") {
            metrics = {Metric::Euclidean, Metric::Dtw};
        } else {
            metrics = {parse_metric(metric)};
        }
        std::string rows;
        for (Metric mt : metrics) {
            NearestNeighbor nn;
            nn.metric = mt;
            if (mt == Metric::Dtw && window_opt->count() > 0) {
                nn.dtw.window = window;
            }
            const auto started = std::chrono::steady_clock::now();
            const double error = one_nn_error(pair.train, pair.test, nn);
            const std::string window_text =
                mt == Metric::Dtw ? (nn.dtw.window ? std::to_string(*nn.dtw.window) : "none") : "-";
            out << pair.train.name << ' ' << to_string(mt) << " window=" << window_text << " error " << fixed4(error)
                << " (" << fixed4(seconds_since(started)) << " s)\n";
            rows += pair.train.name + ',' + to_string(mt) + ',' + window_text + ',' + num(error) + '\n';
        }
        if (!results.empty()) {
            const bool fresh = !fs::exists(results) || fs::file_size(results) == 0;
            std::ofstream f(results, std::ios::app | std::ios::binary);
            if (fresh) {
                f << "dataset,metric,window,error_rate\n";
            }
            f << rows;
            if (!f.flush()) {
                throw std::runtime_error("cannot write " + results);
            }
        }
        return 0;
    }
};

// ---------------------------------------------------------------- inspect

struct InspectCommand {
    std::string config;
    std::string checkpoint;
    std::size_t scale = 8;
    std::string out_dir;

    void add(CLI::App& app) {
        app.add_option("--config", config, "key = value file; command-line flags win");
        app.add_option("--checkpoint", checkpoint, "model.ckpt written by train");
        app.add_option("--scale", scale, "Pixels per kernel weight")->check(CLI::PositiveNumber);
        app.add_option("--out", out_dir, "Output directory");
    }

    int execute(std::ostream& out) const {
        if (checkpoint.empty() || out_dir.empty()) {
            throw std::invalid_argument("--checkpoint and --out are required");
        }
        const Checkpoint ck = load_checkpoint(checkpoint);
        const fs::path root(out_dir);
        std::size_t conv_index = 0;
        std::size_t written = 0;
        for (const auto& layer : ck.network.layers()) {
            const auto* conv = dynamic_cast<const Conv2dLayer*>(layer.get());
            if (conv == nullptr) {
                continue;
            }
            ++conv_index;
            const std::string name = "conv" + std::to_string(conv_index);
            ensure_dir(root / "images" / name);
            std::vector<GrayImage> tiles;
            for (std::size_t o = 0; o < conv->weights().out_channels; ++o) {
                tiles.push_back(kernel_tile(conv->weights(), o, scale));
                char file[32];
                std::snprintf(file, sizeof file, "kernel_%03zu.png", o);
                write_png(tiles.back(), (root / "images" / name / file).string());
                ++written;
            }
            write_png(contact_sheet(tiles), (root / "images" / (name + "_sheet.png")).string());
            out << name << ": " << tiles.size() << " kernels, " << conv->weights().in_channels << " input channels, "
                << conv->weights().kernel << "x" << conv->weights().kernel << '\n';
        }
        Manifest mf = manifest_head("inspect", config, out_dir);
        mf.set("checkpoint", checkpoint);
        mf.set("scale", std::to_string(scale));
        write_text(root / "manifest.txt", mf.text());
        out << "wrote " << written << " kernel tiles and " << conv_index << " contact sheets\n";
        return 0;
    }
};

// ---------------------------------------------------------------- rank

struct RankCommand {
    std::string config;
    std::string input;
    std::string tie = "dense";
    std::string output;

    void add(CLI::App& app) {
        app.add_option("--config", config, "key = value file; command-line flags win");
        app.add_option("--input", input, "CSV: dataset column then one error column per algorithm");
        app.add_option("--tie", tie, "Tie policy: dense, average or min")
            ->check(CLI::IsMember({"dense", "average", "min"}));
        app.add_option("--output", output, "Write the summary CSV here instead of stdout");
    }

    int execute(std::ostream& out) const {
        if (input.empty()) {
            throw std::invalid_argument("--input is required");
        }
        const ResultTable table = parse_result_csv(read_text(input));
        const std::string csv = rank_csv(table, rank_table(table, parse_tie_policy(tie)));
        if (output.empty()) {
            out << csv;
        } else {
            write_text(output, csv);
        }
        return 0;
    }
};

} // namespace

std::vector<std::pair<std::string, std::string>> parse_config(std::string_view text) {
    std::vector<std::pair<std::string, std::string>> entries;
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t line_no = 0;
    const auto trim = [](std::string s) {
        const auto a = s.find_first_not_of(" \t\r");
        if (a == std::string::npos) {
            return std::string();
        }
        return s.substr(a, s.find_last_not_of(" \t\r") - a + 1);
    };
    while (std::getline(in, line)) {
        ++line_no;
        const std::string t = trim(line);
        if (t.empty() || t.front() == '#') {
            continue;
        }
        const auto eq = t.find('=');
        if (eq == std::string::npos) {
            throw std::invalid_argument("config line " + std::to_string(line_no) + ": expected key = value");
        }
        std::string key = trim(t.substr(0, eq));
        if (key.empty()) {
            throw std::invalid_argument("config line " + std::to_string(line_no) + ": empty key");
        }
        entries.emplace_back(std::move(key), trim(t.substr(eq + 1)));
    }
    return entries;
}

GrayImage kernel_tile(const ConvWeights& weights, std::size_t o, std::size_t scale) {
    if (o >= weights.out_channels || scale == 0) {
        throw std::invalid_argument("kernel index out of range or zero scale");
    }
    const std::size_t k = weights.kernel;
    const std::size_t in = weights.in_channels;
    const auto cols = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(in))));
    const std::size_t rows = (in + cols - 1) / cols;
    const std::size_t cell = k * scale;

    const auto first = weights.kernels.begin() + static_cast<std::ptrdiff_t>(o * in * k * k);
    const auto [lo_it, hi_it] = std::minmax_element(first, first + static_cast<std::ptrdiff_t>(in * k * k));
    const double lo = *lo_it;
    const double range = *hi_it - lo;

    GrayImage img{Grid(rows * cell + (rows - 1), cols * cell + (cols - 1), 1.0)};
    for (std::size_t c = 0; c < in; ++c) {
        const std::size_t r0 = (c / cols) * (cell + 1);
        const std::size_t c0 = (c % cols) * (cell + 1);
        for (std::size_t y = 0; y < cell; ++y) {
            for (std::size_t x = 0; x < cell; ++x) {
                const double w = weights.at(o, c, y / scale, x / scale);
                img.pixels(r0 + y, c0 + x) = range > 0.0 ? (w - lo) / range : 0.0;
            }
        }
    }
    return img;
}

GrayImage contact_sheet(const std::vector<GrayImage>& tiles) {
    if (tiles.empty()) {
        throw std::invalid_argument("contact sheet needs at least one tile");
    }
    const std::size_t th = tiles.front().height();
    const std::size_t tw = tiles.front().width();
    const auto cols = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(tiles.size()))));
    const std::size_t rows = (tiles.size() + cols - 1) / cols;
    GrayImage sheet{Grid(rows * th + (rows + 1), cols * tw + (cols + 1), 1.0)};
    for (std::size_t t = 0; t < tiles.size(); ++t) {
        if (tiles[t].height() != th || tiles[t].width() != tw) {
            throw std::invalid_argument("contact sheet tiles must share one size");
        }
        const std::size_t r0 = 1 + (t / cols) * (th + 1);
        const std::size_t c0 = 1 + (t % cols) * (tw + 1);
        for (std::size_t y = 0; y < th; ++y) {
            for (std::size_t x = 0; x < tw; ++x) {
                sheet.pixels(r0 + y, c0 + x) = tiles[t].pixels(y, x);
            }
        }
    }
    return sheet;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Recurrence-plot CNN time-series classification", "rptsc"};
    app.set_version_flag("--version", RPTSC_VERSION);
    app.require_subcommand(1);

    EncodeCommand encode;
    TrainCommand train;
    BaselineCommand baseline;
    InspectCommand inspect;
    RankCommand rank;
    auto* encode_app = app.add_subcommand("encode", "Write recurrence-plot PNGs for a dataset file");
    auto* train_app = app.add_subcommand("train", "Train the CNN and report the test error");
    auto* baseline_app = app.add_subcommand("baseline", "1-NN Euclidean / DTW test error");
    auto* inspect_app = app.add_subcommand("inspect", "Export convolution kernels of a checkpoint as PNG tiles");
    auto* rank_app = app.add_subcommand("rank", "Wins and average ranks from an error-rate table");
    encode.add(*encode_app);
    train.add(*train_app);
    baseline.add(*baseline_app);
    inspect.add(*inspect_app);
    rank.add(*rank_app);

    // CLI11 expects argv order with the program name removed, reversed.
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err);
    }

    try {
        if (encode_app->parsed()) {
            apply_config(*encode_app, encode.config);
            return encode.execute(out);
        }
        if (train_app->parsed()) {
            apply_config(*train_app, train.config);
            return train.execute(out);
        }
        if (baseline_app->parsed()) {
            apply_config(*baseline_app, baseline.config);
            return baseline.execute(out);
        }
        if (inspect_app->parsed()) {
            apply_config(*inspect_app, inspect.config);
            return inspect.execute(out);
        }
        if (rank_app->parsed()) {
            apply_config(*rank_app, rank.config);
            return rank.execute(out);
        }
    } catch (const CLI::ParseError& e) {
        err << "rptsc: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "rptsc: " << e.what() << '\n';
        return 1;
    }
    return 1;
}

int run(int argc, char** argv) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) {
        args.emplace_back(argv[i]);
    }
    return run(args, std::cout, std::cerr);
}

} // namespace rptsc::cli
