#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <vector>

#include "lungsynth/image.hpp"

namespace lungsynth::io {

enum class BitDepth { Eight = 8, Sixteen = 16 };

/// Reads an 8- or 16-bit grayscale PNG or PGM (P2/P5), chosen by extension.
/// Values are scaled to [0,1] by the file's maximum code value. Alpha
/// channels are dropped; colour images are rejected. Throws IoError.
GrayImage load_image(const std::filesystem::path& path);

/// Loads any grayscale file and sets bits where intensity >= 0.5.
BinaryMask load_mask(const std::filesystem::path& path);

/// Writes PNG or PGM (by extension), quantizing with round(v * max_code).
void save_image(const std::filesystem::path& path, const GrayImage& image,
                BitDepth depth = BitDepth::Eight);

/// Writes an 8-bit PNG/PGM with values {0, 255}.
void save_mask(const std::filesystem::path& path, const BinaryMask& mask);

struct RgbImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> data;  // interleaved RGB, row-major
};

void save_png_rgb(const std::filesystem::path& path, const RgbImage& image);

/// Grayscale preview with the 4-connected boundary of `mask` drawn in `color`.
RgbImage overlay_boundary(const GrayImage& image, const BinaryMask& mask,
                          std::array<std::uint8_t, 3> color = {255, 40, 40});

/// Grayscale preview with the boundaries of two masks in distinct colours.
RgbImage overlay_boundaries(const GrayImage& image, const BinaryMask& first,
                            const BinaryMask& second);

}  // namespace lungsynth::io
