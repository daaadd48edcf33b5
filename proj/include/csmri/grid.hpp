#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace csmri {

using cplx = std::complex<double>;

/// Execution policy for the elementwise kernels and FFT passes.
/// Both policies produce bit-identical results.
enum class Exec { serial, parallel };

struct Shape {
  std::size_t rows = 0;
  std::size_t cols = 0;

  std::size_t size() const { return rows * cols; }
  friend bool operator==(const Shape&, const Shape&) = default;
};

std::string to_string(const Shape& s);

class DimensionError : public std::invalid_argument {
 public:
  DimensionError(const std::string& what, Shape a, Shape b);
};

// Throws DimensionError naming both shapes if they differ.
void require_same_shape(const char* what, Shape a, Shape b);

/// Dense row-major grid of complex samples. Holds image-domain and
/// k-space data alike.
class ComplexImage {
 public:
  ComplexImage() = default;
  ComplexImage(std::size_t rows, std::size_t cols);
  ComplexImage(std::size_t rows, std::size_t cols, std::vector<cplx> data);
  explicit ComplexImage(Shape s) : ComplexImage(s.rows, s.cols) {}

  /// Real-valued image; imaginary parts are zero.
  static ComplexImage from_real(std::size_t rows, std::size_t cols,
                                std::span<const double> values);

  std::size_t rows() const { return shape_.rows; }
  std::size_t cols() const { return shape_.cols; }
  Shape shape() const { return shape_; }
  std::size_t size() const { return data_.size(); }

  cplx& operator()(std::size_t r, std::size_t c) { return data_[r * shape_.cols + c]; }
  const cplx& operator()(std::size_t r, std::size_t c) const {
    return data_[r * shape_.cols + c];
  }
  cplx& operator[](std::size_t k) { return data_[k]; }
  const cplx& operator[](std::size_t k) const { return data_[k]; }

  std::span<cplx> data() { return data_; }
  std::span<const cplx> data() const { return data_; }

  bool all_finite() const;

  friend bool operator==(const ComplexImage&, const ComplexImage&) = default;

 private:
  Shape shape_{};
  std::vector<cplx> data_;
};

ComplexImage operator*(cplx s, const ComplexImage& x);
ComplexImage operator+(const ComplexImage& a, const ComplexImage& b);
ComplexImage operator-(const ComplexImage& a, const ComplexImage& b);

/// Binary indicator of the acquired k-space index set. Stored densely,
/// DC at (0, 0).
class SamplingMask {
 public:
  SamplingMask() = default;
  SamplingMask(std::size_t rows, std::size_t cols, bool value = false);
  SamplingMask(std::size_t rows, std::size_t cols, std::vector<std::uint8_t> indicator);

  static SamplingMask full(std::size_t rows, std::size_t cols) { return {rows, cols, true}; }
  static SamplingMask empty(std::size_t rows, std::size_t cols) { return {rows, cols, false}; }

  std::size_t rows() const { return shape_.rows; }
  std::size_t cols() const { return shape_.cols; }
  Shape shape() const { return shape_; }

  bool operator()(std::size_t r, std::size_t c) const {
    return indicator_[r * shape_.cols + c] != 0;
  }
  bool operator[](std::size_t k) const { return indicator_[k] != 0; }
  void set(std::size_t r, std::size_t c, bool v) { indicator_[r * shape_.cols + c] = v ? 1 : 0; }

  std::span<const std::uint8_t> indicator() const { return indicator_; }
  std::size_t sample_count() const;

  friend bool operator==(const SamplingMask&, const SamplingMask&) = default;

 private:
  Shape shape_{};
  std::vector<std::uint8_t> indicator_;
};

/// P .* img: keeps samples on the mask, zeroes the rest.
ComplexImage mask_apply(const ComplexImage& img, const SamplingMask& mask,
                        Exec exec = Exec::parallel);

/// Sum of complex moduli. Fixed reduction tree; independent of thread count.
double l1_norm(const ComplexImage& img, Exec exec = Exec::parallel);

/// sqrt(sum over mask of |a - b|^2).
double masked_frobenius_distance(const ComplexImage& a, const ComplexImage& b,
                                 const SamplingMask& mask, Exec exec = Exec::parallel);

double frobenius_distance(const ComplexImage& a, const ComplexImage& b,
                          Exec exec = Exec::parallel);
double frobenius_norm(const ComplexImage& a, Exec exec = Exec::parallel);

}  // namespace csmri
