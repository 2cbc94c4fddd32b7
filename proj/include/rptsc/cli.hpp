#pragma once

#include "rptsc/cnn_ops.hpp"
#include "rptsc/rp_encode.hpp"

#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace rptsc::cli {

/// Entry point of the rptsc tool: encode, train, baseline, inspect, rank.
int run(int argc, char** argv);
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Flat "key = value" text; '#' starts a comment line. Keys are long flag
/// names without the leading dashes. Throws std::invalid_argument with the
/// line number on malformed lines.
std::vector<std::pair<std::string, std::string>> parse_config(std::string_view text);

/// Output kernel o of a convolution as one image: its input-channel slices laid
/// out in a near-square grid, min-max normalized over the whole kernel (a
/// constant kernel gives an all-zero tile), each cell upscaled by scale.
GrayImage kernel_tile(const ConvWeights& weights, std::size_t o, std::size_t scale);

/// Tiles in a near-square grid separated by one-pixel white lines.
GrayImage contact_sheet(const std::vector<GrayImage>& tiles);

} // namespace rptsc::cli
