#pragma once

#include "rptsc/network.hpp"
#include "rptsc/optimizer.hpp"
#include "rptsc/rp_encode.hpp"
#include "rptsc/ucr_data.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace rptsc {

struct TrainConfig {
    std::size_t batch_size = 20;
    std::size_t epochs = 250;
    OptimizerKind optimizer = OptimizerKind::Adam;
    double learning_rate = 1e-3;
    std::size_t input_size = 28;
    std::size_t kernel_size = 3;
    std::size_t filters = 32;
    std::size_t hidden = 128;
    double conv_dropout = 0.25;
    double dense_dropout = 0.5;
    std::uint64_t seed = 0;
    /// 0 disables the validation split.
    double validation_fraction = 0.2;
    /// image_size is taken from input_size.
    EncodeOptions encoding;

    friend bool operator==(const TrainConfig&, const TrainConfig&) = default;
};

/// Throws std::invalid_argument when the configuration is inconsistent.
void validate(const TrainConfig& config);

/// Encoding options with image_size synchronized to input_size.
EncodeOptions encoding_for(const TrainConfig& config);

NetworkConfig network_config_for(const TrainConfig& config, std::size_t num_classes);

struct EpochRecord {
    std::size_t epoch = 0;  ///< 1-based
    double train_loss = 0.0;
    double train_accuracy = 0.0;
    std::optional<double> validation_loss;
    std::optional<double> validation_accuracy;
};

struct RunReport {
    TrainConfig config;
    std::vector<EpochRecord> history;
    std::size_t best_epoch = 0;
    std::optional<double> best_validation_loss;
    std::size_t optimizer_steps = 0;  ///< steps taken up to best_epoch's snapshot
    std::size_t train_size = 0;
    std::size_t validation_size = 0;
    std::optional<double> test_error;
    double wall_seconds = 0.0;
};

struct TrainedModel {
    Network network;
    OptimizerState optimizer;
    RunReport report;
};

/// Encodes the series once, trains with seeded shuffling for config.epochs,
/// and returns the parameters with the lowest validation loss (the final
/// parameters when there is no validation split).
TrainedModel train_model(const Dataset& train_set, const TrainConfig& config);

/// Same training run observed at several epoch counts: element i equals
/// train_model with epochs = epoch_counts[i]. The counts must be increasing.
std::vector<TrainedModel> train_model_at(const Dataset& train_set, const TrainConfig& config,
                                         const std::vector<std::size_t>& epoch_counts);

/// Misclassified fraction under eval-mode prediction.
double evaluate(const Network& net, const Dataset& test_set, const TrainConfig& config);

/// Eval-mode error rate and mean cross-entropy on pre-encoded images.
struct Evaluation {
    double error_rate = 0.0;
    double loss = 0.0;
};
Evaluation evaluate_images(const Network& net, const std::vector<GrayImage>& images,
                           const std::vector<std::size_t>& labels);

struct GridCell {
    TrainConfig config;
    bool ok = false;
    std::string failure;
    double validation_error = 1.0;  ///< training error when there is no validation split
    double validation_loss = 0.0;
    std::size_t best_epoch = 0;
};

struct GridResult {
    std::vector<GridCell> cells;
    std::size_t selected = 0;
    TrainedModel model;  ///< the selected cell's trained network

    [[nodiscard]] const TrainConfig& selected_config() const { return cells.at(selected).config; }
};

/// The batch x epochs grid {5, 20} x {50, 250, 1000, 2000} around base.
std::vector<TrainConfig> default_grid(const TrainConfig& base);

/// Selection order over successfully trained cells: lower validation error,
/// then lower validation loss (small validation sets often tie at zero error),
/// then fewer epochs, then the smaller batch.
bool grid_cell_better(const GridCell& a, const GridCell& b);

/// Trains every cell and selects the best by grid_cell_better; remaining ties
/// go to grid order. Failing cells are skipped; throws only when every cell fails.
GridResult grid_select(const Dataset& train_set, const std::vector<TrainConfig>& grid);

/// Per-epoch CSV with a header row and a trailing "# summary" line. Contains no
/// timing so identical runs produce identical files.
std::string report_csv(const RunReport& report);

} // namespace rptsc
