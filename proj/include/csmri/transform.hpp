#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "csmri/grid.hpp"

namespace csmri {

/// Unnormalized 1D DFT of fixed length, X[k] = sum_n x[n] exp(-2 pi i n k / N).
/// Radix-2 for powers of two, Bluestein's chirp-z otherwise.
class Fft1d {
 public:
  explicit Fft1d(std::size_t n);

  std::size_t size() const { return n_; }

  // In-place forward transform. `scratch` must hold scratch_size() values.
  void forward(std::span<cplx> x, std::span<cplx> scratch) const;
  // In-place unnormalized inverse (conjugate kernel).
  void backward(std::span<cplx> x, std::span<cplx> scratch) const;

  std::size_t scratch_size() const { return chirp_.empty() ? 0 : conv_len_; }

 private:
  static void radix2(std::span<cplx> x, std::span<const cplx> twiddles,
                     std::span<const std::size_t> bitrev);
  void bluestein(std::span<cplx> x, std::span<cplx> work) const;

  std::size_t n_;
  // Radix-2 state for the power-of-two length actually transformed
  // (n_ itself, or the Bluestein convolution length).
  std::vector<cplx> twiddles_;
  std::vector<std::size_t> bitrev_;
  // Bluestein state; empty when n_ is a power of two.
  std::size_t conv_len_ = 0;
  std::vector<cplx> chirp_;         // exp(-i pi k^2 / n)
  std::vector<cplx> chirp_filter_;  // FFT of the conjugate chirp, zero-padded
};

/// Unitary 2D DFT plan: forward(x) = (1/sqrt(rows*cols)) * DFT2(x).
/// Immutable after construction and safe to share between threads.
class TransformPlan {
 public:
  TransformPlan(std::size_t rows, std::size_t cols);
  explicit TransformPlan(Shape s) : TransformPlan(s.rows, s.cols) {}

  Shape shape() const { return shape_; }

  ComplexImage forward(const ComplexImage& x, Exec exec = Exec::parallel) const;
  ComplexImage inverse(const ComplexImage& y, Exec exec = Exec::parallel) const;

  // Variants writing into a preallocated output of matching shape.
  void forward(const ComplexImage& x, ComplexImage& out, Exec exec = Exec::parallel) const;
  void inverse(const ComplexImage& y, ComplexImage& out, Exec exec = Exec::parallel) const;

 private:
  void apply(const ComplexImage& in, ComplexImage& out, bool inverse, Exec exec) const;

  Shape shape_;
  Fft1d row_fft_;  // length cols
  Fft1d col_fft_;  // length rows
  double scale_;
};

}  // namespace csmri
