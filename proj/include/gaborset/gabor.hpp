#pragma once

#include <cstddef>
#include <vector>

#include "gaborset/image.hpp"

namespace gaborset {

/// Parameters of G(x, y) = exp(-(alpha^2 xp^2 + beta^2 yp^2)) * exp(j 2 pi f0 xp)
/// with xp = x cos(theta) + y sin(theta), yp = -x sin(theta) + y cos(theta).
///
/// f0 is in cycles per pixel; alpha and beta are spatial envelope sharpness
/// (1/pixels) along the carrier axis and across it.
struct GaborParams {
  double f0 = 0.1;
  double theta = 0.0;
  double alpha = 0.1;
  double beta = 0.1;

  /// Throws InvalidBank on a non-positive frequency/sharpness or theta outside [0, pi).
  void validate() const;
  friend bool operator==(const GaborParams&, const GaborParams&) = default;
};

/// Continuous evaluation of the filter at (x, y).
Complex kernel_value(const GaborParams& p, double x, double y);

/// Gaussian envelope alone, exp(-(alpha^2 xp^2 + beta^2 yp^2)).
double envelope_value(const GaborParams& p, double x, double y);

/// K x K samples on the integer grid centred at the origin. Row index runs
/// over y, column index over x, both from -(K-1)/2 to (K-1)/2.
class GaborKernel {
 public:
  GaborKernel(const GaborParams& params, int size);

  const GaborParams& params() const { return params_; }
  int size() const { return size_; }
  int radius() const { return size_ / 2; }

  /// Sample at grid offset (x, y), |x|, |y| <= radius().
  const Complex& at(int x, int y) const {
    return data_[static_cast<std::size_t>(y + radius()) * size_ + (x + radius())];
  }
  const std::vector<Complex>& data() const { return data_; }

 private:
  GaborParams params_;
  int size_;
  std::vector<Complex> data_;
};

/// Throws InvalidKernelSize for even or < 3 sizes.
GaborKernel make_kernel(const GaborParams& p, int size);

/// Settings for a self-similar bank: alpha = beta = envelope_ratio * f0.
struct BankConfig {
  std::vector<double> frequencies{0.05, 0.08, 0.125, 0.2, 0.3};
  std::vector<double> orientations = uniform_orientations(10);
  int kernel_size = 31;
  double envelope_ratio = 1.0;

  static std::vector<double> uniform_orientations(int count);

  friend bool operator==(const BankConfig&, const BankConfig&) = default;
};

/// Kernels in frequency-major, orientation-minor order; kernel index
/// i = freq_index * |orientations| + orient_index. Feature slots depend on it.
struct GaborBank {
  std::vector<GaborKernel> kernels;
  std::vector<double> frequencies;
  std::vector<double> orientations;

  std::size_t size() const { return kernels.size(); }
  std::size_t index_of(std::size_t freq_index, std::size_t orient_index) const {
    return freq_index * orientations.size() + orient_index;
  }
};

/// Throws InvalidBank on empty lists or frequencies outside (0, 0.5].
GaborBank make_bank(const std::vector<double>& frequencies, const std::vector<double>& orientations, int size,
                    double envelope_ratio);
GaborBank make_bank(const BankConfig& cfg);

}  // namespace gaborset
