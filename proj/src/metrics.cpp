#include "csmri/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "csmri/kernels.hpp"

namespace csmri {

double rms_error(const ComplexImage& reference, const ComplexImage& test) {
  require_same_shape("rms_error", reference.shape(), test.shape());
  kernels::CompensatedSum sum;
  for (std::size_t k = 0; k < reference.size(); ++k) {
    const double d = std::abs(reference[k]) - std::abs(test[k]);
    sum.add(d * d);
  }
  return std::sqrt(sum.value() / static_cast<double>(reference.size()));
}

double psnr(const ComplexImage& reference, const ComplexImage& test) {
  require_same_shape("psnr", reference.shape(), test.shape());
  double peak = 0;
  for (const auto& v : reference.data()) peak = std::max(peak, std::abs(v));
  if (peak == 0) throw std::invalid_argument("psnr: reference image is all zero");
  const double rms = rms_error(reference, test);
  if (rms == 0) return std::numeric_limits<double>::infinity();
  return 20.0 * std::log10(peak / rms);
}

SparsityReport sparsity_report(const ComplexImage& img, std::size_t bins) {
  if (bins < 2) throw std::invalid_argument("sparsity_report: need at least 2 bins");
  SparsityReport rep;
  for (const auto& v : img.data()) rep.peak = std::max(rep.peak, std::abs(v));
  rep.l1_value = l1_norm(img);
  rep.bin_width = rep.peak / static_cast<double>(bins);
  rep.histogram.resize(bins);
  for (std::size_t b = 0; b < bins; ++b)
    rep.histogram[b].lower_edge = rep.bin_width * static_cast<double>(b);

  const std::size_t n = img.size();
  if (rep.peak == 0) {
    rep.histogram[0].count = n;
    rep.near_zero_fraction = 1.0;
    return rep;
  }
  const double threshold = 0.01 * rep.peak;
  std::size_t near_zero = 0;
  for (const auto& v : img.data()) {
    const double mag = std::abs(v);
    auto b = static_cast<std::size_t>(mag / rep.peak * static_cast<double>(bins));
    rep.histogram[std::min(b, bins - 1)].count += 1;
    if (mag < threshold) ++near_zero;
  }
  rep.near_zero_fraction = static_cast<double>(near_zero) / static_cast<double>(n);
  return rep;
}

}  // namespace csmri
