#include "gaborset/gabor.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "gaborset/error.hpp"

namespace gaborset {

void GaborParams::validate() const {
  if (!(f0 > 0.0) || !std::isfinite(f0)) throw Error(ErrorCode::InvalidBank, "f0 must be > 0");
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw Error(ErrorCode::InvalidBank, "alpha must be > 0");
  if (!(beta > 0.0) || !std::isfinite(beta)) throw Error(ErrorCode::InvalidBank, "beta must be > 0");
  if (!(theta >= 0.0 && theta < std::numbers::pi)) throw Error(ErrorCode::InvalidBank, "theta must lie in [0, pi)");
}

namespace {

struct Rotated {
  double xp;
  double yp;
};

Rotated rotate(const GaborParams& p, double x, double y) {
  const double c = std::cos(p.theta);
  const double s = std::sin(p.theta);
  return {x * c + y * s, -x * s + y * c};
}

double envelope_at(const GaborParams& p, Rotated r) {
  return std::exp(-(p.alpha * p.alpha * r.xp * r.xp + p.beta * p.beta * r.yp * r.yp));
}

}  // namespace

double envelope_value(const GaborParams& p, double x, double y) { return envelope_at(p, rotate(p, x, y)); }

Complex kernel_value(const GaborParams& p, double x, double y) {
  const Rotated r = rotate(p, x, y);
  const double env = envelope_at(p, r);
  // Evaluate the carrier on |phase| so G(-x,-y) == conj(G(x,y)) holds bit for bit.
  const double phase = 2.0 * std::numbers::pi * p.f0 * r.xp;
  const double mag = std::abs(phase);
  const double im = std::sin(mag);
  return {env * std::cos(mag), env * (phase < 0.0 ? -im : im)};
}

GaborKernel::GaborKernel(const GaborParams& params, int size) : params_(params), size_(size) {
  params_.validate();
  if (size < 3 || size % 2 == 0) {
    throw Error(ErrorCode::InvalidKernelSize, "kernel size must be odd and >= 3, got " + std::to_string(size));
  }
  const int half = size / 2;
  data_.resize(static_cast<std::size_t>(size) * size);
  for (int y = -half; y <= half; ++y) {
    for (int x = -half; x <= half; ++x) {
      data_[static_cast<std::size_t>(y + half) * size + (x + half)] = kernel_value(params_, x, y);
    }
  }
}

GaborKernel make_kernel(const GaborParams& p, int size) { return GaborKernel(p, size); }

std::vector<double> BankConfig::uniform_orientations(int count) {
  std::vector<double> out;
  for (int i = 0; i < count; ++i) out.push_back(i * std::numbers::pi / count);
  return out;
}

GaborBank make_bank(const std::vector<double>& frequencies, const std::vector<double>& orientations, int size,
                    double envelope_ratio) {
  if (frequencies.empty() || orientations.empty()) {
    throw Error(ErrorCode::InvalidBank, "bank needs at least one frequency and one orientation");
  }
  if (!(envelope_ratio > 0.0)) throw Error(ErrorCode::InvalidBank, "envelope_ratio must be > 0");
  for (double f : frequencies) {
    if (!(f > 0.0 && f <= 0.5)) throw Error(ErrorCode::InvalidBank, "frequency outside (0, 0.5]: " + std::to_string(f));
  }

  GaborBank bank;
  bank.frequencies = frequencies;
  bank.orientations = orientations;
  bank.kernels.reserve(frequencies.size() * orientations.size());
  for (double f : frequencies) {
    for (double theta : orientations) {
      bank.kernels.emplace_back(GaborParams{f, theta, envelope_ratio * f, envelope_ratio * f}, size);
    }
  }
  return bank;
}

GaborBank make_bank(const BankConfig& cfg) {
  return make_bank(cfg.frequencies, cfg.orientations, cfg.kernel_size, cfg.envelope_ratio);
}

}  // namespace gaborset
