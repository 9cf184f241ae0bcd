#pragma once

#include <cstddef>
#include <vector>

#include "gaborset/gabor.hpp"
#include "gaborset/image.hpp"

namespace gaborset {

/// Complex filter response, same side as the input image.
struct ResponseMap {
  ComplexGrid values;
  std::size_t kernel_index = 0;
};

/// Network input: for kernel i, slot 2i holds mean |response| and slot 2i+1
/// its population standard deviation.
struct FeatureVector {
  std::vector<double> values;

  std::size_t size() const { return values.size(); }
  double operator[](std::size_t i) const { return values[i]; }
  friend bool operator==(const FeatureVector&, const FeatureVector&) = default;
};

/// Kernel zero-padded to side x side with its centre moved to (0, 0), wrapping
/// negative offsets. Throws SizeMismatch when the kernel does not fit.
ComplexGrid pad_kernel(const GaborKernel& kernel, int side);

/// Circular convolution out(r, c) = sum k(dy, dx) img(r - dy, c - dx), computed
/// as IFFT(FFT(img) * FFT(padded kernel)).
ResponseMap fft_convolve(const GrayImage& img, const GaborKernel& kernel);

/// Bank with kernel spectra precomputed for one image side. Shared read-only
/// between worker threads.
class FeatureExtractor {
 public:
  FeatureExtractor(GaborBank bank, int side);

  const GaborBank& bank() const { return bank_; }
  int side() const { return side_; }
  std::size_t dimension() const { return 2 * bank_.size(); }

  FeatureVector extract(const GrayImage& img) const;

  /// Magnitude maps |response| for each kernel, bank order.
  std::vector<std::vector<double>> magnitude_maps(const GrayImage& img) const;

 private:
  GaborBank bank_;
  int side_;
  std::vector<ComplexGrid> spectra_;
};

/// One-shot extraction; prefer FeatureExtractor when processing many images.
FeatureVector extract_features(const GrayImage& img, const GaborBank& bank);

}  // namespace gaborset
