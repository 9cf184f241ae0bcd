#pragma once

#include <filesystem>
#include <span>
#include <vector>

#include "gaborset/image.hpp"

namespace gaborset {

/// Decode PNG/JPEG (anything OpenCV's codecs understand) into 8-bit gray or RGB.
/// Alpha is dropped and 16-bit samples are scaled down. Throws IoError.
RawImage read_image(const std::filesystem::path& path);

/// Write an 8-bit image as PNG. Throws IoError.
void write_png(const std::filesystem::path& path, const RawImage& img);

/// Linearly rescale a real matrix to 0..255 for inspection dumps.
RawImage to_display(std::span<const double> values, int side);

/// Sorted list of .png/.jpg/.jpeg files directly inside `dir`.
std::vector<std::filesystem::path> list_images(const std::filesystem::path& dir);

}  // namespace gaborset
