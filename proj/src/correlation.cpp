// Copyright 2026 The floorloc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "floorloc/correlation.hpp"

#include <cmath>
#include <cstring>
#include <mutex>

#include <fftw3.h>

#include "floorloc/error.hpp"

namespace floorloc {
namespace {

// FFTW planning is not thread safe; execution on distinct arrays is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

void check_kernel(const Kernel2D& k) {
  if (k.width <= 0 || k.height <= 0 ||
      k.values.size() != static_cast<std::size_t>(k.width) * static_cast<std::size_t>(k.height)) {
    throw InputError("correlate: malformed kernel");
  }
}

struct FftBuffers {
  int rows = 0;
  int cols = 0;
  int complex_cols = 0;
  double* real = nullptr;
  fftw_complex* freq = nullptr;
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;

  FftBuffers(int r, int c) : rows(r), cols(c), complex_cols(c / 2 + 1) {
    real = fftw_alloc_real(static_cast<std::size_t>(rows) * cols);
    freq = fftw_alloc_complex(static_cast<std::size_t>(rows) * complex_cols);
    std::lock_guard<std::mutex> lock(planner_mutex());
    forward = fftw_plan_dft_r2c_2d(rows, cols, real, freq, FFTW_ESTIMATE);
    backward = fftw_plan_dft_c2r_2d(rows, cols, freq, real, FFTW_ESTIMATE);
  }
  ~FftBuffers() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(forward);
    fftw_destroy_plan(backward);
    fftw_free(real);
    fftw_free(freq);
  }
  FftBuffers(const FftBuffers&) = delete;
  FftBuffers& operator=(const FftBuffers&) = delete;

  std::size_t real_size() const { return static_cast<std::size_t>(rows) * cols; }
  std::size_t freq_size() const { return static_cast<std::size_t>(rows) * complex_cols; }
};

void load_image(FftBuffers& buf, const Raster2D& image) {
  std::memset(buf.real, 0, sizeof(double) * buf.real_size());
  for (int r = 0; r < image.height; ++r) {
    for (int c = 0; c < image.width; ++c) buf.real[static_cast<std::size_t>(r) * buf.cols + c] = image.at(c, r);
  }
}

void load_kernel(FftBuffers& buf, const Kernel2D& kernel) {
  std::memset(buf.real, 0, sizeof(double) * buf.real_size());
  for (int r = 0; r < kernel.height; ++r) {
    const int rr = ((r - kernel.anchor_row) % buf.rows + buf.rows) % buf.rows;
    for (int c = 0; c < kernel.width; ++c) {
      const int cc = ((c - kernel.anchor_col) % buf.cols + buf.cols) % buf.cols;
      buf.real[static_cast<std::size_t>(rr) * buf.cols + cc] = kernel.at(c, r);
    }
  }
}

std::vector<double> correlate_with_spectrum(const std::vector<std::complex<double>>& image_spec,
                                            const Raster2D& image, const Kernel2D& kernel,
                                            FftBuffers& buf) {
  load_kernel(buf, kernel);
  fftw_execute(buf.forward);
  // corr = IFFT(F(image) * conj(F(kernel)))
  for (std::size_t i = 0; i < buf.freq_size(); ++i) {
    const std::complex<double> k(buf.freq[i][0], buf.freq[i][1]);
    const std::complex<double> prod = image_spec[i] * std::conj(k);
    buf.freq[i][0] = prod.real();
    buf.freq[i][1] = prod.imag();
  }
  fftw_execute(buf.backward);
  const double norm = 1.0 / static_cast<double>(buf.real_size());
  std::vector<double> out(image.size());
  for (int r = 0; r < image.height; ++r) {
    for (int c = 0; c < image.width; ++c) {
      out[image.index(c, r)] = buf.real[static_cast<std::size_t>(r) * buf.cols + c] * norm;
    }
  }
  return out;
}

}  // namespace

int fft_friendly_size(int n) {
  if (n <= 1) return 1;
  for (int m = n;; ++m) {
    int v = m;
    for (int p : {2, 3, 5, 7}) {
      while (v % p == 0) v /= p;
    }
    if (v == 1) return m;
  }
}

std::vector<double> correlate_direct(const Raster2D& image, const Kernel2D& kernel) {
  check_kernel(kernel);
  std::vector<double> out(image.size(), 0.0);
  for (int jr = 0; jr < image.height; ++jr) {
    for (int jc = 0; jc < image.width; ++jc) {
      const double v = image.at(jc, jr);
      if (v == 0.0) continue;
      // Image cell j contributes to outputs c = j - (k - anchor).
      for (int kr = 0; kr < kernel.height; ++kr) {
        const int cr = jr - (kr - kernel.anchor_row);
        if (cr < 0 || cr >= image.height) continue;
        const double* krow = &kernel.values[static_cast<std::size_t>(kr) * kernel.width];
        double* orow = &out[static_cast<std::size_t>(cr) * image.width];
        for (int kc = 0; kc < kernel.width; ++kc) {
          const int cc = jc - (kc - kernel.anchor_col);
          if (cc < 0 || cc >= image.width) continue;
          orow[cc] += v * krow[kc];
        }
      }
    }
  }
  return out;
}

struct ImageCorrelator::Spectrum {
  std::unique_ptr<FftBuffers> buffers;
  std::vector<std::complex<double>> image_spec;
};

ImageCorrelator::ImageCorrelator(const Raster2D& image) : image_(image) {
  for (double v : image_.values) {
    if (v != 0.0) ++nonzero_;
  }
}

ImageCorrelator::~ImageCorrelator() = default;

const ImageCorrelator::Spectrum& ImageCorrelator::spectrum_for(int rows, int cols) {
  auto& slot = spectra_[{rows, cols}];
  if (!slot) {
    slot = std::make_unique<Spectrum>();
    slot->buffers = std::make_unique<FftBuffers>(rows, cols);
    load_image(*slot->buffers, image_);
    fftw_execute(slot->buffers->forward);
    slot->image_spec.resize(slot->buffers->freq_size());
    for (std::size_t i = 0; i < slot->image_spec.size(); ++i) {
      slot->image_spec[i] = {slot->buffers->freq[i][0], slot->buffers->freq[i][1]};
    }
  }
  return *slot;
}

std::vector<double> ImageCorrelator::correlate(const Kernel2D& kernel) {
  check_kernel(kernel);
  if (kernel.width * kernel.height <= kFftKernelAreaThreshold || nonzero_ == 0) {
    return correlate_direct(image_, kernel);
  }
  // Round padded sizes up to multiples of 32 so kernels of similar extent
  // share a cached image spectrum.
  auto padded = [](int n) { return fft_friendly_size(((n + 31) / 32) * 32); };
  const int rows = padded(image_.height + kernel.height - 1);
  const int cols = padded(image_.width + kernel.width - 1);
  const double fft_cost = 12.0 * rows * cols * std::log2(static_cast<double>(rows) * cols);
  const double direct_cost = static_cast<double>(nonzero_) * kernel.width * kernel.height;
  if (direct_cost < fft_cost) return correlate_direct(image_, kernel);
  const Spectrum& spec = spectrum_for(rows, cols);
  return correlate_with_spectrum(spec.image_spec, image_, kernel, *spec.buffers);
}

std::vector<double> correlate_fft(const Raster2D& image, const Kernel2D& kernel) {
  check_kernel(kernel);
  const int rows = fft_friendly_size(image.height + kernel.height - 1);
  const int cols = fft_friendly_size(image.width + kernel.width - 1);
  FftBuffers buf(rows, cols);
  load_image(buf, image);
  fftw_execute(buf.forward);
  std::vector<std::complex<double>> spec(buf.freq_size());
  for (std::size_t i = 0; i < spec.size(); ++i) spec[i] = {buf.freq[i][0], buf.freq[i][1]};
  return correlate_with_spectrum(spec, image, kernel, buf);
}

std::vector<double> correlate(const Raster2D& image, const Kernel2D& kernel) {
  check_kernel(kernel);
  if (kernel.width * kernel.height > kFftKernelAreaThreshold) return correlate_fft(image, kernel);
  return correlate_direct(image, kernel);
}

}  // namespace floorloc
