#include "rptsc/train.hpp"

#include "rptsc/random.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <stdexcept>

namespace rptsc {
namespace {

// Independent RNG streams derived from the run seed.
constexpr std::uint64_t kInitStream = 0;
constexpr std::uint64_t kShuffleStream = 1;
constexpr std::uint64_t kDropoutStream = 2;

Tensor4 make_batch(const std::vector<GrayImage>& images, std::span<const std::size_t> indices, std::size_t side) {
    Tensor4 batch(Shape4{indices.size(), 1, side, side});
    for (std::size_t b = 0; b < indices.size(); ++b) {
        const auto& px = images[indices[b]].pixels;
        if (px.rows != side || px.cols != side) {
            throw std::invalid_argument("encoded image does not match the network input size");
        }
        std::copy(px.data.begin(), px.data.end(), batch.item(b));
    }
    return batch;
}

std::vector<std::size_t> labels_of(const Dataset& ds) {
    std::vector<std::size_t> labels;
    labels.reserve(ds.size());
    for (const auto& s : ds.series) {
        labels.push_back(s.label);
    }
    return labels;
}

std::vector<GrayImage> encode_checked(const Dataset& ds, const TrainConfig& config) {
    try {
        return encode_dataset(ds, encoding_for(config));
    } catch (const EncodeError& e) {
        throw EncodeError("encoding " + ds.name + " failed at " + e.what());
    }
}

struct EncodedSplit {
    std::vector<GrayImage> train_images;
    std::vector<std::size_t> train_labels;
    std::vector<GrayImage> val_images;
    std::vector<std::size_t> val_labels;
    std::size_t num_classes = 0;
};

EncodedSplit prepare(const Dataset& train_set, const TrainConfig& config) {
    validate(train_set);
    validate(config);
    EncodedSplit split;
    split.num_classes = train_set.num_classes;
    if (config.validation_fraction > 0.0) {
        auto parts = split_validation(train_set, config.validation_fraction, config.seed);
        split.train_images = encode_checked(parts.train, config);
        split.train_labels = labels_of(parts.train);
        split.val_images = encode_checked(parts.validation, config);
        split.val_labels = labels_of(parts.validation);
    } else {
        split.train_images = encode_checked(train_set, config);
        split.train_labels = labels_of(train_set);
    }
    return split;
}

// Runs one training trajectory and captures the best snapshot as seen at each
// requested epoch count.
std::vector<TrainedModel> run_training(const EncodedSplit& data, const TrainConfig& config,
                                       const std::vector<std::size_t>& epoch_counts) {
    if (epoch_counts.empty() || !std::is_sorted(epoch_counts.begin(), epoch_counts.end()) ||
        epoch_counts.front() < 1 ||
        std::adjacent_find(epoch_counts.begin(), epoch_counts.end()) != epoch_counts.end()) {
        throw std::invalid_argument("epoch counts must be strictly increasing and positive");
    }
    const auto started = std::chrono::steady_clock::now();

    Network net = Network::rp_classifier(network_config_for(config, data.num_classes),
                                         derive_seed(config.seed, kInitStream));
    OptimizerState opt = make_optimizer(config.optimizer, config.learning_rate);
    Rng shuffle_rng(derive_seed(config.seed, kShuffleStream));
    Rng dropout_rng(derive_seed(config.seed, kDropoutStream));

    const std::size_t n = data.train_images.size();
    const std::size_t side = config.input_size;
    const bool has_validation = !data.val_images.empty();

    RunReport base;
    base.config = config;
    base.train_size = n;
    base.validation_size = data.val_images.size();

    Network best_net = net;
    OptimizerState best_opt = opt;
    std::size_t best_epoch = 0;
    std::optional<double> best_val;

    std::vector<TrainedModel> results;
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::vector<std::size_t> batch_labels;

    std::size_t next = 0;
    for (std::size_t epoch = 1; epoch <= epoch_counts.back(); ++epoch) {
        shuffle(std::span(order), shuffle_rng);
        double loss_sum = 0.0;
        std::size_t correct = 0;
        for (std::size_t start = 0; start < n; start += config.batch_size) {
            const std::size_t stop = std::min(n, start + config.batch_size);
            const std::span<const std::size_t> idx(order.data() + start, stop - start);
            const Tensor4 batch = make_batch(data.train_images, idx, side);
            batch_labels.clear();
            for (std::size_t i : idx) {
                batch_labels.push_back(data.train_labels[i]);
            }

            const Tensor4 logits = net.forward(batch, Mode::Train, dropout_rng);
            const auto loss = softmax_xent(logits, batch_labels);
            net.backward(loss.grad_logits);
            optimizer_step(net.parameters(), opt);

            loss_sum += loss.loss * static_cast<double>(idx.size());
            const auto predicted = argmax_rows(logits);
            for (std::size_t b = 0; b < predicted.size(); ++b) {
                correct += predicted[b] == batch_labels[b] ? 1 : 0;
            }
        }

        EpochRecord rec;
        rec.epoch = epoch;
        rec.train_loss = loss_sum / static_cast<double>(n);
        rec.train_accuracy = static_cast<double>(correct) / static_cast<double>(n);
        if (has_validation) {
            const auto ev = evaluate_images(net, data.val_images, data.val_labels);
            rec.validation_loss = ev.loss;
            rec.validation_accuracy = 1.0 - ev.error_rate;
            if (!best_val || ev.loss < *best_val) {
                best_val = ev.loss;
                best_net = net;
                best_opt = opt;
                best_epoch = epoch;
            }
        }
        base.history.push_back(rec);

        if (epoch == epoch_counts[next]) {
            TrainedModel model;
            model.report = base;
            model.report.config.epochs = epoch;
            if (has_validation) {
                model.network = best_net;
                model.optimizer = best_opt;
                model.report.best_epoch = best_epoch;
                model.report.best_validation_loss = best_val;
            } else {
                model.network = net;
                model.optimizer = opt;
                model.report.best_epoch = epoch;
            }
            model.report.optimizer_steps = static_cast<std::size_t>(model.optimizer.step);
            model.report.wall_seconds =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
            results.push_back(std::move(model));
            ++next;
        }
    }
    return results;
}

void append_number(std::string& out, double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    out.append(buf, res.ptr);
}

} // namespace

void validate(const TrainConfig& config) {
    if (config.batch_size < 1) {
        throw std::invalid_argument("batch size must be at least 1");
    }
    if (config.epochs < 1) {
        throw std::invalid_argument("epochs must be at least 1");
    }
    if (config.input_size != 28 && config.input_size != 56 && config.input_size != 64) {
        throw std::invalid_argument("input size must be 28, 56 or 64");
    }
    if (config.kernel_size % 2 == 0 || config.kernel_size < 1) {
        throw std::invalid_argument("kernel size must be odd");
    }
    if (!(config.learning_rate > 0.0)) {
        throw std::invalid_argument("learning rate must be positive");
    }
    if (config.validation_fraction != 0.0 &&
        !(config.validation_fraction > 0.0 && config.validation_fraction < 0.5)) {
        throw std::invalid_argument("validation fraction must be 0 or lie in (0, 0.5)");
    }
    if (config.encoding.embedding.m < 1 || config.encoding.embedding.tau < 1) {
        throw std::invalid_argument("embedding needs m >= 1 and tau >= 1");
    }
}

EncodeOptions encoding_for(const TrainConfig& config) {
    EncodeOptions e = config.encoding;
    e.image_size = config.input_size;
    return e;
}

NetworkConfig network_config_for(const TrainConfig& config, std::size_t num_classes) {
    NetworkConfig nc;
    nc.input_size = config.input_size;
    nc.filters = config.filters;
    nc.kernel = config.kernel_size;
    nc.hidden = config.hidden;
    nc.num_classes = num_classes;
    nc.conv_dropout = config.conv_dropout;
    nc.dense_dropout = config.dense_dropout;
    return nc;
}

TrainedModel train_model(const Dataset& train_set, const TrainConfig& config) {
    return std::move(train_model_at(train_set, config, {config.epochs}).front());
}

std::vector<TrainedModel> train_model_at(const Dataset& train_set, const TrainConfig& config,
                                         const std::vector<std::size_t>& epoch_counts) {
    const auto data = prepare(train_set, config);
    return run_training(data, config, epoch_counts);
}

Evaluation evaluate_images(const Network& net, const std::vector<GrayImage>& images,
                           const std::vector<std::size_t>& labels) {
    if (images.size() != labels.size()) {
        throw std::invalid_argument("image and label counts differ");
    }
    if (images.empty()) {
        return {};
    }
    constexpr std::size_t kChunk = 64;
    const std::size_t side = net.input_shape().h;
    std::size_t wrong = 0;
    double loss_sum = 0.0;
    std::vector<std::size_t> idx;
    for (std::size_t start = 0; start < images.size(); start += kChunk) {
        const std::size_t stop = std::min(images.size(), start + kChunk);
        idx.resize(stop - start);
        std::iota(idx.begin(), idx.end(), start);
        const Tensor4 logits = net.logits(make_batch(images, idx, side));
        const std::span<const std::size_t> chunk_labels(labels.data() + start, stop - start);
        loss_sum += softmax_xent(logits, chunk_labels).loss * static_cast<double>(idx.size());
        const auto predicted = argmax_rows(logits);
        for (std::size_t b = 0; b < predicted.size(); ++b) {
            wrong += predicted[b] != chunk_labels[b] ? 1 : 0;
        }
    }
    const double n = static_cast<double>(images.size());
    return {static_cast<double>(wrong) / n, loss_sum / n};
}

double evaluate(const Network& net, const Dataset& test_set, const TrainConfig& config) {
    if (net.input_shape().h != config.input_size) {
        throw std::invalid_argument("network input size does not match the configuration");
    }
    return evaluate_images(net, encode_checked(test_set, config), labels_of(test_set)).error_rate;
}

std::vector<TrainConfig> default_grid(const TrainConfig& base) {
    std::vector<TrainConfig> grid;
    for (std::size_t batch : {5, 20}) {
        for (std::size_t epochs : {50, 250, 1000, 2000}) {
            TrainConfig c = base;
            c.batch_size = batch;
            c.epochs = epochs;
            grid.push_back(c);
        }
    }
    return grid;
}

bool grid_cell_better(const GridCell& a, const GridCell& b) {
    const auto key = [](const GridCell& g) {
        return std::tuple(g.validation_error, g.validation_loss, g.config.epochs, g.config.batch_size);
    };
    return key(a) < key(b);
}

GridResult grid_select(const Dataset& train_set, const std::vector<TrainConfig>& grid) {
    if (grid.empty()) {
        throw std::invalid_argument("grid is empty");
    }
    GridResult result;
    result.cells.resize(grid.size());
    std::vector<std::optional<TrainedModel>> models(grid.size());

    // Cells that differ only in their epoch count share one trajectory.
    std::vector<bool> done(grid.size(), false);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (done[i]) {
            continue;
        }
        std::vector<std::size_t> members;
        for (std::size_t j = i; j < grid.size(); ++j) {
            TrainConfig a = grid[i];
            TrainConfig b = grid[j];
            a.epochs = b.epochs = 0;
            if (!done[j] && a == b) {
                members.push_back(j);
                done[j] = true;
            }
        }
        std::vector<std::size_t> counts;
        for (std::size_t j : members) {
            counts.push_back(grid[j].epochs);
        }
        std::sort(counts.begin(), counts.end());
        counts.erase(std::unique(counts.begin(), counts.end()), counts.end());

        try {
            const auto data = prepare(train_set, grid[i]);
            auto trained = run_training(data, grid[i], counts);
            for (std::size_t j : members) {
                const auto at = static_cast<std::size_t>(
                    std::lower_bound(counts.begin(), counts.end(), grid[j].epochs) - counts.begin());
                const TrainedModel& model = trained[at];
                GridCell& cell = result.cells[j];
                cell.config = grid[j];
                cell.ok = true;
                cell.best_epoch = model.report.best_epoch;
                const bool has_val = !data.val_images.empty();
                const auto ev = has_val ? evaluate_images(model.network, data.val_images, data.val_labels)
                                        : evaluate_images(model.network, data.train_images, data.train_labels);
                cell.validation_error = ev.error_rate;
                cell.validation_loss = ev.loss;
                models[j] = model;
                models[j]->report.config = grid[j];
            }
        } catch (const std::exception& e) {
            for (std::size_t j : members) {
                result.cells[j].config = grid[j];
                result.cells[j].ok = false;
                result.cells[j].failure = e.what();
            }
        }
    }

    std::optional<std::size_t> best;
    for (std::size_t j = 0; j < grid.size(); ++j) {
        const auto& c = result.cells[j];
        if (!c.ok) {
            continue;
        }
        if (!best) {
            best = j;
            continue;
        }
        if (grid_cell_better(c, result.cells[*best])) {
            best = j;
        }
    }
    if (!best) {
        throw std::runtime_error("every grid cell failed; first failure: " + result.cells.front().failure);
    }
    result.selected = *best;
    result.model = std::move(*models[*best]);
    return result;
}

std::string report_csv(const RunReport& report) {
    std::string out = "epoch,train_loss,train_accuracy,validation_loss,validation_accuracy\n";
    for (const auto& r : report.history) {
        out += std::to_string(r.epoch);
        out += ',';
        append_number(out, r.train_loss);
        out += ',';
        append_number(out, r.train_accuracy);
        out += ',';
        if (r.validation_loss) {
            append_number(out, *r.validation_loss);
        }
        out += ',';
        if (r.validation_accuracy) {
            append_number(out, *r.validation_accuracy);
        }
        out += '\n';
    }
    out += "# summary: best_epoch=" + std::to_string(report.best_epoch);
    out += " best_validation_loss=";
    if (report.best_validation_loss) {
        append_number(out, *report.best_validation_loss);
    } else {
        out += "none";
    }
    out += " optimizer_steps=" + std::to_string(report.optimizer_steps);
    out += " test_error=";
    if (report.test_error) {
        append_number(out, *report.test_error);
    } else {
        out += "none";
    }
    out += " seed=" + std::to_string(report.config.seed);
    out += '\n';
    return out;
}

} // namespace rptsc
