#include "rptsc/rp_encode.hpp"

#include <zlib.h>

#include <algorithm>
#include <cmath>
#include <fstream>

namespace rptsc {
namespace {

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
    out.push_back(static_cast<std::uint8_t>(v >> 24));
    out.push_back(static_cast<std::uint8_t>(v >> 16));
    out.push_back(static_cast<std::uint8_t>(v >> 8));
    out.push_back(static_cast<std::uint8_t>(v));
}

void put_chunk(std::vector<std::uint8_t>& out, const char (&type)[5], const std::vector<std::uint8_t>& body) {
    put_u32(out, static_cast<std::uint32_t>(body.size()));
    const std::size_t type_at = out.size();
    out.insert(out.end(), type, type + 4);
    out.insert(out.end(), body.begin(), body.end());
    const uLong crc = crc32(0L, out.data() + type_at, static_cast<uInt>(4 + body.size()));
    put_u32(out, static_cast<std::uint32_t>(crc));
}

} // namespace

std::uint8_t to_byte(double value) {
    const double scaled = std::floor(255.0 * std::clamp(value, 0.0, 1.0) + 0.5);
    return static_cast<std::uint8_t>(scaled);
}

std::vector<std::uint8_t> encode_png(const GrayImage& img) {
    const std::size_t h = img.height();
    const std::size_t w = img.width();
    if (h == 0 || w == 0) {
        throw std::invalid_argument("cannot encode an empty image as PNG");
    }

    // Each scanline is prefixed with filter type 0 (None).
    std::vector<std::uint8_t> raw;
    raw.reserve(h * (w + 1));
    for (std::size_t r = 0; r < h; ++r) {
        raw.push_back(0);
        for (std::size_t c = 0; c < w; ++c) {
            raw.push_back(to_byte(img.pixels(r, c)));
        }
    }
    uLongf packed_size = compressBound(static_cast<uLong>(raw.size()));
    std::vector<std::uint8_t> packed(packed_size);
    if (compress2(packed.data(), &packed_size, raw.data(), static_cast<uLong>(raw.size()), 9) != Z_OK) {
        throw std::runtime_error("zlib compression failed");
    }
    packed.resize(packed_size);

    std::vector<std::uint8_t> ihdr;
    put_u32(ihdr, static_cast<std::uint32_t>(w));
    put_u32(ihdr, static_cast<std::uint32_t>(h));
    ihdr.insert(ihdr.end(), {8, 0, 0, 0, 0}); // bit depth 8, grayscale, deflate, filter 0, no interlace

    std::vector<std::uint8_t> out = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};
    put_chunk(out, "IHDR", ihdr);
    put_chunk(out, "IDAT", packed);
    put_chunk(out, "IEND", {});
    return out;
}

void write_png(const GrayImage& img, const std::string& path) {
    const auto bytes = encode_png(img);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw std::runtime_error("cannot open " + path + " for writing");
    }
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) {
        throw std::runtime_error("failed writing " + path);
    }
}

} // namespace rptsc
