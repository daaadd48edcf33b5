#include "csmri/grid.hpp"

#include <cmath>
#include <sstream>

#include "csmri/kernels.hpp"

namespace csmri {

std::string to_string(const Shape& s) {
  std::ostringstream os;
  os << s.rows << "x" << s.cols;
  return os.str();
}

DimensionError::DimensionError(const std::string& what, Shape a, Shape b)
    : std::invalid_argument(what + ": dimension mismatch " + to_string(a) + " vs " +
                            to_string(b)) {}

void require_same_shape(const char* what, Shape a, Shape b) {
  if (a != b) throw DimensionError(what, a, b);
}

ComplexImage::ComplexImage(std::size_t rows, std::size_t cols)
    : shape_{rows, cols}, data_(rows * cols) {}

ComplexImage::ComplexImage(std::size_t rows, std::size_t cols, std::vector<cplx> data)
    : shape_{rows, cols}, data_(std::move(data)) {
  if (data_.size() != rows * cols)
    throw std::invalid_argument("ComplexImage: data length " + std::to_string(data_.size()) +
                                " does not match " + to_string(shape_));
}

ComplexImage ComplexImage::from_real(std::size_t rows, std::size_t cols,
                                     std::span<const double> values) {
  if (values.size() != rows * cols)
    throw std::invalid_argument("ComplexImage::from_real: length mismatch");
  std::vector<cplx> data(values.begin(), values.end());
  return {rows, cols, std::move(data)};
}

bool ComplexImage::all_finite() const { return kernels::omp::all_finite(data_); }

ComplexImage operator*(cplx s, const ComplexImage& x) {
  ComplexImage out(x.shape());
  for (std::size_t k = 0; k < x.size(); ++k) out[k] = s * x[k];
  return out;
}

ComplexImage operator+(const ComplexImage& a, const ComplexImage& b) {
  require_same_shape("operator+", a.shape(), b.shape());
  ComplexImage out(a.shape());
  for (std::size_t k = 0; k < a.size(); ++k) out[k] = a[k] + b[k];
  return out;
}

ComplexImage operator-(const ComplexImage& a, const ComplexImage& b) {
  require_same_shape("operator-", a.shape(), b.shape());
  ComplexImage out(a.shape());
  for (std::size_t k = 0; k < a.size(); ++k) out[k] = a[k] - b[k];
  return out;
}

SamplingMask::SamplingMask(std::size_t rows, std::size_t cols, bool value)
    : shape_{rows, cols}, indicator_(rows * cols, value ? 1 : 0) {}

SamplingMask::SamplingMask(std::size_t rows, std::size_t cols,
                           std::vector<std::uint8_t> indicator)
    : shape_{rows, cols}, indicator_(std::move(indicator)) {
  if (indicator_.size() != rows * cols)
    throw std::invalid_argument("SamplingMask: indicator length mismatch for " +
                                to_string(shape_));
  for (auto& v : indicator_)
    if (v > 1) throw std::invalid_argument("SamplingMask: indicator entries must be 0 or 1");
}

std::size_t SamplingMask::sample_count() const {
  std::size_t n = 0;
  for (auto v : indicator_) n += v;
  return n;
}

ComplexImage mask_apply(const ComplexImage& img, const SamplingMask& mask, Exec exec) {
  require_same_shape("mask_apply", img.shape(), mask.shape());
  ComplexImage out(img.shape());
  kernels::table(exec).apply_mask(img.data(), mask.indicator(), out.data());
  return out;
}

double l1_norm(const ComplexImage& img, Exec exec) {
  return kernels::table(exec).sum_abs(img.data());
}

double masked_frobenius_distance(const ComplexImage& a, const ComplexImage& b,
                                 const SamplingMask& mask, Exec exec) {
  require_same_shape("masked_frobenius_distance", a.shape(), b.shape());
  require_same_shape("masked_frobenius_distance", a.shape(), mask.shape());
  return std::sqrt(
      kernels::table(exec).masked_sum_sq_diff(a.data(), b.data(), mask.indicator()));
}

double frobenius_distance(const ComplexImage& a, const ComplexImage& b, Exec exec) {
  require_same_shape("frobenius_distance", a.shape(), b.shape());
  return std::sqrt(kernels::table(exec).sum_sq_diff(a.data(), b.data()));
}

double frobenius_norm(const ComplexImage& a, Exec exec) {
  return frobenius_distance(a, ComplexImage(a.shape()), exec);
}

}  // namespace csmri
