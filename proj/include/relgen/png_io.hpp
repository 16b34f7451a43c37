#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "relgen/raster.hpp"

namespace relgen {

// Encodes 8-bit RGB, non-interlaced, all-zero scanline filters, one IDAT,
// pinned deflate settings — so a given image always produces the same bytes,
// which the manifest checksums and rebuild-equality checks rely on.
std::vector<std::uint8_t> encode_png(const Image& img);

// Decodes the encoder's subset (8-bit RGB, non-interlaced) but accepts any
// of the five scanline filters. Throws IoFailure on malformed input.
Image decode_png(const std::vector<std::uint8_t>& bytes);

void write_bytes(const std::filesystem::path& path,
                 const std::vector<std::uint8_t>& bytes);
std::vector<std::uint8_t> read_bytes(const std::filesystem::path& path);

}  // namespace relgen
