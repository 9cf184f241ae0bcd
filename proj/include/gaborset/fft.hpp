#pragma once

#include <memory>

#include "gaborset/image.hpp"

namespace gaborset::fft {

/// Unnormalized forward 2-D DFT, X(k) = sum_n x(n) exp(-2 pi j k.n / N).
ComplexGrid forward(const ComplexGrid& in);
ComplexGrid forward(const GrayImage& in);

/// Inverse 2-D DFT including the 1/(side*side) factor.
ComplexGrid inverse(const ComplexGrid& in);

/// Reusable SIMD-aligned buffers for repeated transforms of one size.
/// Not thread-safe; use one per thread.
class Workspace {
 public:
  explicit Workspace(int side);
  ~Workspace();
  Workspace(const Workspace&) = delete;
  Workspace& operator=(const Workspace&) = delete;

  int side() const { return side_; }
  std::size_t size() const { return static_cast<std::size_t>(side_) * side_; }
  Complex* input() { return in_; }
  const Complex* output() const { return out_; }

  /// input() -> output(), unnormalized.
  void forward();
  /// input() -> output(), without the 1/N scale.
  void inverse_unscaled();

 private:
  int side_;
  Complex* in_;
  Complex* out_;
};

}  // namespace gaborset::fft
