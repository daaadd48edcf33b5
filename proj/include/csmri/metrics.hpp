#pragma once

#include <cstddef>
#include <vector>

#include "csmri/grid.hpp"

namespace csmri {

/// PSNR in dB on magnitude images: 20 log10(max|ref| / rms(|ref| - |test|)).
/// Returns +infinity when the images have identical magnitudes.
/// Throws std::invalid_argument for an all-zero reference.
double psnr(const ComplexImage& reference, const ComplexImage& test);

/// RMS of the magnitude difference.
double rms_error(const ComplexImage& reference, const ComplexImage& test);

struct HistogramBin {
  double lower_edge = 0;
  std::size_t count = 0;
};

/// Magnitude histogram and sparsity measures of one image.
struct SparsityReport {
  double peak = 0;  // max magnitude; bins span [0, peak]
  double bin_width = 0;
  std::vector<HistogramBin> histogram;
  double l1_value = 0;
  double near_zero_fraction = 0;  // share of pixels below 1% of peak
};

/// `bins` must be at least 2. An all-zero image puts every pixel in bin 0
/// and reports near_zero_fraction = 1.
SparsityReport sparsity_report(const ComplexImage& img, std::size_t bins);

}  // namespace csmri
