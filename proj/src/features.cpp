#include "gaborset/features.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <string>

#include "gaborset/error.hpp"
#include "gaborset/fft.hpp"

namespace gaborset {

ComplexGrid pad_kernel(const GaborKernel& kernel, int side) {
  if (kernel.size() > side) {
    throw Error(ErrorCode::SizeMismatch, "kernel size " + std::to_string(kernel.size()) + " exceeds image side " +
                                             std::to_string(side));
  }
  ComplexGrid padded(side);
  const int half = kernel.radius();
  for (int dy = -half; dy <= half; ++dy) {
    for (int dx = -half; dx <= half; ++dx) {
      padded((dy + side) % side, (dx + side) % side) = kernel.at(dx, dy);
    }
  }
  return padded;
}

namespace {

// Plain complex product; operator* routes through __muldc3's inf/nan recovery.
inline Complex product(const Complex& a, const Complex& b) {
  return {a.real() * b.real() - a.imag() * b.imag(), a.real() * b.imag() + a.imag() * b.real()};
}

// sqrt(re^2 + im^2); std::abs goes through hypot, which dominates the runtime.
inline double magnitude(const Complex& v) { return std::sqrt(v.real() * v.real() + v.imag() * v.imag()); }

ComplexGrid multiply(const ComplexGrid& a, const ComplexGrid& b) {
  ComplexGrid out(a.side);
  for (std::size_t i = 0; i < a.size(); ++i) out.data[i] = product(a.data[i], b.data[i]);
  return out;
}

}  // namespace

ResponseMap fft_convolve(const GrayImage& img, const GaborKernel& kernel) {
  const ComplexGrid kspec = fft::forward(pad_kernel(kernel, img.side));
  return {fft::inverse(multiply(fft::forward(img), kspec)), 0};
}

FeatureExtractor::FeatureExtractor(GaborBank bank, int side) : bank_(std::move(bank)), side_(side) {
  spectra_.reserve(bank_.size());
  for (const auto& k : bank_.kernels) spectra_.push_back(fft::forward(pad_kernel(k, side_)));
}

FeatureVector FeatureExtractor::extract(const GrayImage& img) const {
  if (img.side != side_) {
    throw Error(ErrorCode::SizeMismatch,
                "image side " + std::to_string(img.side) + " != extractor side " + std::to_string(side_));
  }
  thread_local std::unique_ptr<fft::Workspace> ws;
  if (!ws || ws->side() != side_) ws = std::make_unique<fft::Workspace>(side_);

  const std::size_t n = ws->size();
  std::vector<Complex> ispec(n);
  std::copy(img.data.begin(), img.data.end(), ws->input());
  ws->forward();
  std::copy(ws->output(), ws->output() + n, ispec.begin());

  const double scale = 1.0 / static_cast<double>(n);
  std::vector<double> mag(n);
  FeatureVector fv;
  fv.values.reserve(dimension());
  for (const auto& kspec : spectra_) {
    Complex* in = ws->input();
    for (std::size_t i = 0; i < n; ++i) in[i] = product(ispec[i], kspec.data[i]);
    ws->inverse_unscaled();
    const Complex* out = ws->output();
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      mag[i] = magnitude(out[i]) * scale;
      sum += mag[i];
    }
    const double mean = sum / static_cast<double>(n);
    double sq = 0.0;
    for (double m : mag) sq += (m - mean) * (m - mean);
    fv.values.push_back(mean);
    fv.values.push_back(std::sqrt(sq / static_cast<double>(n)));
  }
  return fv;
}

std::vector<std::vector<double>> FeatureExtractor::magnitude_maps(const GrayImage& img) const {
  if (img.side != side_) throw Error(ErrorCode::SizeMismatch, "image side does not match extractor");
  const ComplexGrid ispec = fft::forward(img);
  std::vector<std::vector<double>> maps;
  for (const auto& kspec : spectra_) {
    const ComplexGrid resp = fft::inverse(multiply(ispec, kspec));
    std::vector<double> mag(resp.size());
    for (std::size_t i = 0; i < resp.size(); ++i) mag[i] = magnitude(resp.data[i]);
    maps.push_back(std::move(mag));
  }
  return maps;
}

FeatureVector extract_features(const GrayImage& img, const GaborBank& bank) {
  return FeatureExtractor(bank, img.side).extract(img);
}

}  // namespace gaborset
