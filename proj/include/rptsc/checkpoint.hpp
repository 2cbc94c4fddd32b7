#pragma once

#include "rptsc/network.hpp"
#include "rptsc/optimizer.hpp"

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <vector>

namespace rptsc {

// Binary layout, all integers and reals little-endian:
//
//   "RPTS"                      magic
//   u16 version                 currently 1
//   u32 channels, height, width per-item input shape
//   u32 layer_count
//   layer_count x {
//     u8  kind tag              LayerKind value
//     u32 dim_count, u32 dims[dim_count]
//     u32 value_count, f64 values[value_count]
//   }
//   optimizer {
//     u8  kind tag              OptimizerKind value
//     f64 learning_rate, beta1, beta2, epsilon
//     u64 step
//     u32 block_count
//     block_count x { u32 dim_count(=1), u32 length,
//                     u32 value_count(=2*length), f64 first[length], f64 second[length] }
//   }
//
// Layer dims/values: Conv2d [out, in, k, k] kernels then bias; Dense
// [fan_out, fan_in] weights then bias; MaxPool2 [2, 2]; Dropout [] with the
// rate as its single value; Relu and Flatten carry nothing.

inline constexpr std::uint16_t kCheckpointVersion = 1;

class CheckpointError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Checkpoint {
    Network network;
    OptimizerState optimizer;
};

std::vector<std::uint8_t> serialize_checkpoint(const Network& network, const OptimizerState& optimizer);
Checkpoint deserialize_checkpoint(const std::vector<std::uint8_t>& bytes);

void save_checkpoint(const std::filesystem::path& path, const Network& network, const OptimizerState& optimizer);
Checkpoint load_checkpoint(const std::filesystem::path& path);

} // namespace rptsc
