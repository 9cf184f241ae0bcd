#pragma once

#include <span>
#include <vector>

#include "gaborset/image.hpp"

namespace gaborset {

/// Contrast-limited adaptive histogram equalization settings.
/// `clip_limit` is a fraction of the tile's pixel count; 1.0 disables clipping.
struct AheParams {
  int tiles_x = 8;
  int tiles_y = 8;
  double clip_limit = 0.01;
  int bins = 256;

  void validate() const;
  friend bool operator==(const AheParams&, const AheParams&) = default;
};

struct PreprocessParams {
  int size = 128;
  AheParams ahe;

  void validate() const;
  friend bool operator==(const PreprocessParams&, const PreprocessParams&) = default;
};

/// Luma conversion, round(0.299 R + 0.587 G + 0.114 B). Gray input is returned as is.
RawImage to_grayscale(const RawImage& img);

/// Bilinear resample of a single-channel image to side x side, pixel-center aligned
/// (source = (dst + 0.5) * scale - 0.5, clamped at the borders).
GrayImage resize(const RawImage& gray, int side);

/// Crop a fractional rectangle out of an image. Rounds to whole pixels and
/// always keeps at least one pixel in each direction.
RawImage crop_fraction(const RawImage& img, double x, double y, double w, double h);

GrayImage equalize_adaptive(const GrayImage& img, const AheParams& params);

/// Min-max map onto [-1, 1]; a constant image maps to all zeros.
GrayImage normalize(const GrayImage& img);

/// to_grayscale -> resize -> equalize_adaptive -> normalize.
GrayImage preprocess(const RawImage& img, const PreprocessParams& params);

namespace detail {

/// Histogram bin for an intensity in [0, 255].
int intensity_bin(double value, int bins);

/// Bin -> output intensity for one tile. Tiles holding a single intensity
/// are flagged `identity` and leave pixels untouched.
struct TileMapping {
  bool identity = false;
  std::vector<double> lut;  // size = bins, values in [0, 255]
};

TileMapping build_tile_mapping(std::span<const double> pixels, const AheParams& params);

}  // namespace detail

}  // namespace gaborset
