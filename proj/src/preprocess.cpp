#include "gaborset/preprocess.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "gaborset/error.hpp"

namespace gaborset {

void RawImage::validate() const {
  if (width < 1 || height < 1) {
    throw Error(ErrorCode::InvalidImage, "empty image " + std::to_string(width) + "x" + std::to_string(height));
  }
  if (channels != 1 && channels != 3) {
    throw Error(ErrorCode::InvalidImage, "unsupported channel count " + std::to_string(channels));
  }
  if (data.size() != static_cast<std::size_t>(width) * height * channels) {
    throw Error(ErrorCode::InvalidImage, "buffer length does not match dimensions");
  }
}

void AheParams::validate() const {
  if (tiles_x < 1 || tiles_y < 1) throw Error(ErrorCode::ConfigError, "AHE tiles must be >= 1");
  if (!(clip_limit > 0.0 && clip_limit <= 1.0)) throw Error(ErrorCode::ConfigError, "AHE clip_limit must be in (0, 1]");
  if (bins < 2) throw Error(ErrorCode::ConfigError, "AHE bins must be >= 2");
}

void PreprocessParams::validate() const {
  if (size < 8) throw Error(ErrorCode::ConfigError, "preprocess size must be >= 8");
  ahe.validate();
}

RawImage to_grayscale(const RawImage& img) {
  img.validate();
  if (img.channels == 1) return img;

  RawImage out(img.width, img.height, 1);
  for (int r = 0; r < img.height; ++r) {
    for (int c = 0; c < img.width; ++c) {
      const double luma = 0.299 * img.at(r, c, 0) + 0.587 * img.at(r, c, 1) + 0.114 * img.at(r, c, 2);
      out.at(r, c) = static_cast<std::uint8_t>(std::clamp(std::lround(luma), 0L, 255L));
    }
  }
  return out;
}

namespace {

struct Tap {
  int lo;
  int hi;
  double frac;
};

// Pixel-center aligned source coordinate with border clamping.
std::vector<Tap> bilinear_taps(int src, int dst) {
  std::vector<Tap> taps(static_cast<std::size_t>(dst));
  const double scale = static_cast<double>(src) / dst;
  for (int i = 0; i < dst; ++i) {
    const double pos = std::clamp((i + 0.5) * scale - 0.5, 0.0, static_cast<double>(src - 1));
    const int lo = static_cast<int>(std::floor(pos));
    const int hi = std::min(lo + 1, src - 1);
    taps[static_cast<std::size_t>(i)] = {lo, hi, pos - lo};
  }
  return taps;
}

double lerp(double a, double b, double t) { return a + t * (b - a); }

}  // namespace

GrayImage resize(const RawImage& gray, int side) {
  gray.validate();
  if (gray.channels != 1) throw Error(ErrorCode::InvalidImage, "resize expects a single-channel image");
  if (side < 1) throw Error(ErrorCode::ConfigError, "resize side must be >= 1");

  const auto row_taps = bilinear_taps(gray.height, side);
  const auto col_taps = bilinear_taps(gray.width, side);
  GrayImage out(side);
  for (int r = 0; r < side; ++r) {
    const Tap& ty = row_taps[static_cast<std::size_t>(r)];
    for (int c = 0; c < side; ++c) {
      const Tap& tx = col_taps[static_cast<std::size_t>(c)];
      const double top = lerp(gray.at(ty.lo, tx.lo), gray.at(ty.lo, tx.hi), tx.frac);
      const double bottom = lerp(gray.at(ty.hi, tx.lo), gray.at(ty.hi, tx.hi), tx.frac);
      out(r, c) = lerp(top, bottom, ty.frac);
    }
  }
  return out;
}

RawImage crop_fraction(const RawImage& img, double x, double y, double w, double h) {
  img.validate();
  auto span_of = [](double start, double extent, int total) {
    int lo = static_cast<int>(std::lround(start * total));
    int hi = static_cast<int>(std::lround((start + extent) * total));
    lo = std::clamp(lo, 0, total - 1);
    hi = std::clamp(hi, lo + 1, total);
    return std::pair{lo, hi};
  };
  const auto [x0, x1] = span_of(x, w, img.width);
  const auto [y0, y1] = span_of(y, h, img.height);

  RawImage out(x1 - x0, y1 - y0, img.channels);
  for (int r = y0; r < y1; ++r) {
    for (int c = x0; c < x1; ++c) {
      for (int ch = 0; ch < img.channels; ++ch) out.at(r - y0, c - x0, ch) = img.at(r, c, ch);
    }
  }
  return out;
}

namespace detail {

int intensity_bin(double value, int bins) {
  const int b = static_cast<int>(std::floor(value * bins / 256.0));
  return std::clamp(b, 0, bins - 1);
}

TileMapping build_tile_mapping(std::span<const double> pixels, const AheParams& params) {
  const auto bins = static_cast<std::size_t>(params.bins);
  std::vector<double> hist(bins, 0.0);
  for (double v : pixels) hist[static_cast<std::size_t>(intensity_bin(v, params.bins))] += 1.0;

  TileMapping mapping;
  const auto occupied = std::count_if(hist.begin(), hist.end(), [](double h) { return h > 0.0; });
  if (occupied <= 1) {
    mapping.identity = true;
    return mapping;
  }

  const double total = static_cast<double>(pixels.size());
  if (params.clip_limit < 1.0) {
    const double limit = params.clip_limit * total;
    double excess = 0.0;
    for (double& h : hist) {
      if (h > limit) {
        excess += h - limit;
        h = limit;
      }
    }
    const double share = excess / static_cast<double>(bins);
    for (double& h : hist) h += share;
  }

  mapping.lut.resize(bins);
  double cdf = 0.0;
  for (std::size_t b = 0; b < bins; ++b) {
    cdf += hist[b];
    mapping.lut[b] = std::clamp(255.0 * cdf / total, 0.0, 255.0);
  }
  return mapping;
}

}  // namespace detail

namespace {

struct TileAxis {
  std::vector<int> starts;  // size tiles + 1
  std::vector<double> centers;
};

TileAxis tile_axis(int side, int tiles) {
  tiles = std::min(tiles, side);
  TileAxis axis;
  for (int i = 0; i <= tiles; ++i) axis.starts.push_back(static_cast<int>(static_cast<long>(i) * side / tiles));
  for (int i = 0; i < tiles; ++i) axis.centers.push_back((axis.starts[i] + axis.starts[i + 1] - 1) / 2.0);
  return axis;
}

// Neighbouring tile pair and blend weight for a pixel coordinate.
Tap blend_taps(const TileAxis& axis, int pos) {
  const auto& centers = axis.centers;
  const int last = static_cast<int>(centers.size()) - 1;
  if (pos <= centers.front()) return {0, 0, 0.0};
  if (pos >= centers.back()) return {last, last, 0.0};
  const auto it = std::upper_bound(centers.begin(), centers.end(), static_cast<double>(pos));
  const int hi = static_cast<int>(it - centers.begin());
  const int lo = hi - 1;
  return {lo, hi, (pos - centers[lo]) / (centers[hi] - centers[lo])};
}

}  // namespace

GrayImage equalize_adaptive(const GrayImage& img, const AheParams& params) {
  params.validate();
  const int side = img.side;
  const TileAxis xs = tile_axis(side, params.tiles_x);
  const TileAxis ys = tile_axis(side, params.tiles_y);
  const int ntx = static_cast<int>(xs.centers.size());
  const int nty = static_cast<int>(ys.centers.size());

  std::vector<detail::TileMapping> maps;
  maps.reserve(static_cast<std::size_t>(ntx) * nty);
  std::vector<double> tile;
  for (int ty = 0; ty < nty; ++ty) {
    for (int tx = 0; tx < ntx; ++tx) {
      tile.clear();
      for (int r = ys.starts[ty]; r < ys.starts[ty + 1]; ++r) {
        for (int c = xs.starts[tx]; c < xs.starts[tx + 1]; ++c) tile.push_back(img(r, c));
      }
      maps.push_back(detail::build_tile_mapping(tile, params));
    }
  }

  auto apply = [&](int ty, int tx, double v) {
    const auto& m = maps[static_cast<std::size_t>(ty) * ntx + tx];
    if (m.identity) return v;
    return m.lut[static_cast<std::size_t>(detail::intensity_bin(v, params.bins))];
  };

  GrayImage out(side);
  for (int r = 0; r < side; ++r) {
    const Tap by = blend_taps(ys, r);
    for (int c = 0; c < side; ++c) {
      const Tap bx = blend_taps(xs, c);
      const double v = img(r, c);
      const double top = lerp(apply(by.lo, bx.lo, v), apply(by.lo, bx.hi, v), bx.frac);
      const double bottom = lerp(apply(by.hi, bx.lo, v), apply(by.hi, bx.hi, v), bx.frac);
      out(r, c) = std::clamp(lerp(top, bottom, by.frac), 0.0, 255.0);
    }
  }
  return out;
}

GrayImage normalize(const GrayImage& img) {
  GrayImage out(img.side, 0.0);
  if (img.data.empty()) return out;
  const auto [lo_it, hi_it] = std::minmax_element(img.data.begin(), img.data.end());
  const double lo = *lo_it;
  const double range = *hi_it - lo;
  if (range == 0.0) return out;
  for (std::size_t i = 0; i < img.size(); ++i) out.data[i] = 2.0 * (img.data[i] - lo) / range - 1.0;
  return out;
}

GrayImage preprocess(const RawImage& img, const PreprocessParams& params) {
  params.validate();
  return normalize(equalize_adaptive(resize(to_grayscale(img), params.size), params.ahe));
}

}  // namespace gaborset
