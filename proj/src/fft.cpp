#include "gaborset/fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <map>
#include <mutex>
#include <new>
#include <utility>

namespace gaborset::fft {

namespace {

// FFTW planning is not thread-safe; execution through the new-array
// interface is. Plans use FFTW_ESTIMATE so the chosen algorithm, and with it
// every rounding, is identical from run to run.
class PlanCache {
 public:
  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

  fftw_plan get(int side, int sign) {
    std::lock_guard lock(mutex_);
    auto it = plans_.find({side, sign});
    if (it != plans_.end()) return it->second;
    const auto n = static_cast<std::size_t>(side) * side;
    auto* in = fftw_alloc_complex(n);
    auto* out = fftw_alloc_complex(n);
    fftw_plan plan = fftw_plan_dft_2d(side, side, in, out, sign, FFTW_ESTIMATE);
    fftw_free(in);
    fftw_free(out);
    plans_.emplace(std::pair{side, sign}, plan);
    return plan;
  }

 private:
  std::mutex mutex_;
  std::map<std::pair<int, int>, fftw_plan> plans_;
};

PlanCache& cache() {
  static PlanCache instance;
  return instance;
}

Complex* alloc(std::size_t n) {
  auto* p = fftw_alloc_complex(n);
  if (p == nullptr) throw std::bad_alloc();
  return reinterpret_cast<Complex*>(p);
}

fftw_complex* raw(Complex* p) { return reinterpret_cast<fftw_complex*>(p); }

ComplexGrid transform(const ComplexGrid& in, int sign) {
  Workspace ws(in.side);
  std::copy(in.data.begin(), in.data.end(), ws.input());
  if (sign == FFTW_FORWARD) {
    ws.forward();
  } else {
    ws.inverse_unscaled();
  }
  ComplexGrid out(in.side);
  std::copy(ws.output(), ws.output() + ws.size(), out.data.begin());
  return out;
}

}  // namespace

Workspace::Workspace(int side) : side_(side), in_(alloc(size())), out_(nullptr) {
  try {
    out_ = alloc(size());
  } catch (...) {
    fftw_free(in_);
    throw;
  }
  std::fill(in_, in_ + size(), Complex{});
}

Workspace::~Workspace() {
  fftw_free(in_);
  fftw_free(out_);
}

void Workspace::forward() { fftw_execute_dft(cache().get(side_, FFTW_FORWARD), raw(in_), raw(out_)); }

void Workspace::inverse_unscaled() { fftw_execute_dft(cache().get(side_, FFTW_BACKWARD), raw(in_), raw(out_)); }

ComplexGrid forward(const ComplexGrid& in) { return transform(in, FFTW_FORWARD); }

ComplexGrid forward(const GrayImage& in) {
  ComplexGrid grid(in.side);
  for (std::size_t i = 0; i < in.size(); ++i) grid.data[i] = in.data[i];
  return transform(grid, FFTW_FORWARD);
}

ComplexGrid inverse(const ComplexGrid& in) {
  ComplexGrid out = transform(in, FFTW_BACKWARD);
  const double scale = 1.0 / static_cast<double>(out.size());
  for (auto& v : out.data) v *= scale;
  return out;
}

}  // namespace gaborset::fft
