#include "csmri/transform.hpp"

#include <bit>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace csmri {

namespace {

bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

// exp(-2 pi i k / n), evaluated directly per entry.
cplx unit_root(std::size_t k, std::size_t n) {
  const double angle = -2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
  return {std::cos(angle), std::sin(angle)};
}

void make_radix2_tables(std::size_t n, std::vector<cplx>& tw, std::vector<std::size_t>& rev) {
  tw.resize(n / 2);
  for (std::size_t k = 0; k < n / 2; ++k) tw[k] = unit_root(k, n);
  rev.resize(n);
  const int bits = std::countr_zero(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t r = 0;
    for (int b = 0; b < bits; ++b)
      if (i & (std::size_t{1} << b)) r |= std::size_t{1} << (bits - 1 - b);
    rev[i] = r;
  }
}

}  // namespace

Fft1d::Fft1d(std::size_t n) : n_(n) {
  if (n == 0) throw std::invalid_argument("Fft1d: length must be positive");
  if (is_pow2(n)) {
    make_radix2_tables(n, twiddles_, bitrev_);
    return;
  }
  conv_len_ = std::bit_ceil(2 * n - 1);
  make_radix2_tables(conv_len_, twiddles_, bitrev_);
  chirp_.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    // k^2 mod 2n keeps the angle argument small and exact.
    const std::size_t k2 = (k * k) % (2 * n);
    const double angle = -std::numbers::pi * static_cast<double>(k2) / static_cast<double>(n);
    chirp_[k] = {std::cos(angle), std::sin(angle)};
  }
  chirp_filter_.assign(conv_len_, cplx{});
  chirp_filter_[0] = std::conj(chirp_[0]);
  for (std::size_t k = 1; k < n; ++k) {
    chirp_filter_[k] = std::conj(chirp_[k]);
    chirp_filter_[conv_len_ - k] = std::conj(chirp_[k]);
  }
  radix2(chirp_filter_, twiddles_, bitrev_);
}

void Fft1d::radix2(std::span<cplx> x, std::span<const cplx> twiddles,
                   std::span<const std::size_t> bitrev) {
  const std::size_t n = x.size();
  for (std::size_t i = 0; i < n; ++i)
    if (i < bitrev[i]) std::swap(x[i], x[bitrev[i]]);
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const std::size_t half = len / 2;
    const std::size_t stride = n / len;
    for (std::size_t start = 0; start < n; start += len) {
      for (std::size_t j = 0; j < half; ++j) {
        const cplx t = twiddles[j * stride] * x[start + j + half];
        const cplx u = x[start + j];
        x[start + j] = u + t;
        x[start + j + half] = u - t;
      }
    }
  }
}

void Fft1d::bluestein(std::span<cplx> x, std::span<cplx> work) const {
  std::fill(work.begin(), work.end(), cplx{});
  for (std::size_t k = 0; k < n_; ++k) work[k] = x[k] * chirp_[k];
  radix2(work, twiddles_, bitrev_);
  for (std::size_t k = 0; k < conv_len_; ++k) work[k] = std::conj(work[k] * chirp_filter_[k]);
  // Inverse FFT via conjugation: ifft(v) = conj(fft(conj(v))) / m.
  radix2(work, twiddles_, bitrev_);
  const double inv_m = 1.0 / static_cast<double>(conv_len_);
  for (std::size_t k = 0; k < n_; ++k) x[k] = std::conj(work[k]) * inv_m * chirp_[k];
}

void Fft1d::forward(std::span<cplx> x, std::span<cplx> scratch) const {
  if (x.size() != n_) throw std::invalid_argument("Fft1d: length mismatch");
  if (n_ == 1) return;
  if (chirp_.empty())
    radix2(x, twiddles_, bitrev_);
  else
    bluestein(x, scratch);
}

void Fft1d::backward(std::span<cplx> x, std::span<cplx> scratch) const {
  for (auto& v : x) v = std::conj(v);
  forward(x, scratch);
  for (auto& v : x) v = std::conj(v);
}

TransformPlan::TransformPlan(std::size_t rows, std::size_t cols)
    : shape_{rows, cols},
      row_fft_(cols),
      col_fft_(rows),
      scale_(1.0 / std::sqrt(static_cast<double>(rows * cols))) {}

ComplexImage TransformPlan::forward(const ComplexImage& x, Exec exec) const {
  ComplexImage out(shape_);
  apply(x, out, false, exec);
  return out;
}

ComplexImage TransformPlan::inverse(const ComplexImage& y, Exec exec) const {
  ComplexImage out(shape_);
  apply(y, out, true, exec);
  return out;
}

void TransformPlan::forward(const ComplexImage& x, ComplexImage& out, Exec exec) const {
  apply(x, out, false, exec);
}

void TransformPlan::inverse(const ComplexImage& y, ComplexImage& out, Exec exec) const {
  apply(y, out, true, exec);
}

void TransformPlan::apply(const ComplexImage& in, ComplexImage& out, bool inverse,
                          Exec exec) const {
  require_same_shape("TransformPlan", shape_, in.shape());
  require_same_shape("TransformPlan output", shape_, out.shape());
  const auto rows = static_cast<std::ptrdiff_t>(shape_.rows);
  const auto cols = static_cast<std::ptrdiff_t>(shape_.cols);
  const bool par = exec == Exec::parallel;
  if (&in != &out) std::copy(in.data().begin(), in.data().end(), out.data().begin());
  auto data = out.data();

  // Rows are contiguous: transform in place.
#pragma omp parallel if (par)
  {
    std::vector<cplx> scratch(row_fft_.scratch_size());
#pragma omp for schedule(static)
    for (std::ptrdiff_t r = 0; r < rows; ++r) {
      auto row = data.subspan(static_cast<std::size_t>(r * cols), shape_.cols);
      if (inverse)
        row_fft_.backward(row, scratch);
      else
        row_fft_.forward(row, scratch);
    }
  }

  // Columns: gather, transform, scale, scatter.
#pragma omp parallel if (par)
  {
    std::vector<cplx> column(shape_.rows);
    std::vector<cplx> scratch(col_fft_.scratch_size());
#pragma omp for schedule(static)
    for (std::ptrdiff_t c = 0; c < cols; ++c) {
      for (std::ptrdiff_t r = 0; r < rows; ++r) column[r] = data[r * cols + c];
      if (inverse)
        col_fft_.backward(column, scratch);
      else
        col_fft_.forward(column, scratch);
      for (std::ptrdiff_t r = 0; r < rows; ++r) data[r * cols + c] = column[r] * scale_;
    }
  }
}

}  // namespace csmri
