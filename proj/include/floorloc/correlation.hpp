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

#pragma once

#include <complex>
#include <map>
#include <memory>
#include <utility>
#include <vector>

#include "floorloc/raster.hpp"

namespace floorloc {

/// Dense kernel whose cell (anchor_col, anchor_row) sits on the output cell.
struct Kernel2D {
  int width = 0;
  int height = 0;
  int anchor_col = 0;
  int anchor_row = 0;
  std::vector<double> values;

  double at(int col, int row) const { return values[static_cast<std::size_t>(row) * width + col]; }
};

/// Kernels with more cells than this use the FFT path.
inline constexpr int kFftKernelAreaThreshold = 64 * 64;

// All correlations compute, for every image cell c,
//   out(c) = sum_k image(c + k - anchor) * kernel(k)
// with zero padding outside the image (template matching, kernel not flipped).

/// Scatter form over the non-zero image cells.
std::vector<double> correlate_direct(const Raster2D& image, const Kernel2D& kernel);

/// FFT form via FFTW, padded to avoid circular wrap-around.
std::vector<double> correlate_fft(const Raster2D& image, const Kernel2D& kernel);

/// Chooses the direct or FFT path by kernel area.
std::vector<double> correlate(const Raster2D& image, const Kernel2D& kernel);

/// Caches image spectra across many kernels of varying size.
class ImageCorrelator {
 public:
  explicit ImageCorrelator(const Raster2D& image);
  ~ImageCorrelator();
  ImageCorrelator(const ImageCorrelator&) = delete;
  ImageCorrelator& operator=(const ImageCorrelator&) = delete;

  std::vector<double> correlate(const Kernel2D& kernel);
  const Raster2D& image() const { return image_; }

 private:
  struct Spectrum;
  const Spectrum& spectrum_for(int rows, int cols);

  Raster2D image_;
  std::size_t nonzero_ = 0;
  std::map<std::pair<int, int>, std::unique_ptr<Spectrum>> spectra_;
};

/// Smallest integer >= n whose prime factors are all in {2, 3, 5, 7}.
int fft_friendly_size(int n);

}  // namespace floorloc
