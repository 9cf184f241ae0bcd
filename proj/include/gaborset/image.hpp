#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace gaborset {

/// Decoded 8-bit image, row-major, interleaved channels (1 = gray, 3 = RGB).
struct RawImage {
  int width = 0;
  int height = 0;
  int channels = 1;
  std::vector<std::uint8_t> data;

  RawImage() = default;
  RawImage(int w, int h, int c) : width(w), height(h), channels(c), data(static_cast<std::size_t>(w) * h * c) {}

  std::uint8_t& at(int row, int col, int ch = 0) { return data[(static_cast<std::size_t>(row) * width + col) * channels + ch]; }
  std::uint8_t at(int row, int col, int ch = 0) const {
    return data[(static_cast<std::size_t>(row) * width + col) * channels + ch];
  }

  /// Throws InvalidImage when dimensions or buffer length are inconsistent.
  void validate() const;
};

/// Square real-valued image at the common working size.
struct GrayImage {
  int side = 0;
  std::vector<double> data;

  GrayImage() = default;
  explicit GrayImage(int s, double fill = 0.0) : side(s), data(static_cast<std::size_t>(s) * s, fill) {}

  double& operator()(int row, int col) { return data[static_cast<std::size_t>(row) * side + col]; }
  double operator()(int row, int col) const { return data[static_cast<std::size_t>(row) * side + col]; }
  std::size_t size() const { return data.size(); }

  friend bool operator==(const GrayImage&, const GrayImage&) = default;
};

using Complex = std::complex<double>;

/// Square complex matrix; used for spectra and convolution responses.
struct ComplexGrid {
  int side = 0;
  std::vector<Complex> data;

  ComplexGrid() = default;
  explicit ComplexGrid(int s) : side(s), data(static_cast<std::size_t>(s) * s) {}

  Complex& operator()(int row, int col) { return data[static_cast<std::size_t>(row) * side + col]; }
  const Complex& operator()(int row, int col) const { return data[static_cast<std::size_t>(row) * side + col]; }
  std::size_t size() const { return data.size(); }
};

}  // namespace gaborset
