#pragma once

// Elementwise ADMM kernels. Two implementations share one interface:
// `serial` is the plain reference kept for testing, `omp` is the
// OpenMP data-parallel version used by default. Every kernel in `omp`
// must agree bit-for-bit with its `serial` counterpart.

#include <cstddef>
#include <cmath>
#include <cstdint>
#include <span>

#include "csmri/grid.hpp"

namespace csmri::kernels {

// Reductions sum fixed-size blocks with Neumaier compensation and then
// combine the block sums in index order, so the result does not depend
// on the thread count.
inline constexpr std::size_t kReduceBlock = 4096;

struct Residuals {
  double data = 0;      // sum over mask |y - y0|^2
  double coupling = 0;  // sum |z - x|^2
};

namespace serial {
// z = soft(x + l2/mu2, 1/mu2)
void shrink(std::span<const cplx> x, std::span<const cplx> l2, double mu2,
            std::span<cplx> z);
// w = z - l2/mu2
void shift_by_multiplier(std::span<const cplx> z, std::span<const cplx> l2, double mu2,
                         std::span<cplx> w);
// y = a off mask, (mu1*y0 + l1 + mu2*a) / (mu1 + mu2) on mask
void blend_kspace(std::span<const cplx> a, std::span<const cplx> y0,
                  std::span<const cplx> l1, std::span<const std::uint8_t> mask,
                  double mu1, double mu2, std::span<cplx> y);
// l1 -= mu1 (y - y0) on mask; l2 -= mu2 (z - x)
void ascend_duals(std::span<const cplx> y, std::span<const cplx> y0,
                  std::span<const std::uint8_t> mask, std::span<const cplx> z,
                  std::span<const cplx> x, double mu1, double mu2, std::span<cplx> l1,
                  std::span<cplx> l2);
void apply_mask(std::span<const cplx> in, std::span<const std::uint8_t> mask,
                std::span<cplx> out);
double sum_abs(std::span<const cplx> x);
double sum_sq_diff(std::span<const cplx> a, std::span<const cplx> b);
double masked_sum_sq_diff(std::span<const cplx> a, std::span<const cplx> b,
                          std::span<const std::uint8_t> mask);
Residuals residuals(std::span<const cplx> y, std::span<const cplx> y0,
                    std::span<const std::uint8_t> mask, std::span<const cplx> z,
                    std::span<const cplx> x);
bool all_finite(std::span<const cplx> x);
}  // namespace serial

namespace omp {
// z = soft(x + l2/mu2, 1/mu2)
void shrink(std::span<const cplx> x, std::span<const cplx> l2, double mu2,
            std::span<cplx> z);
// w = z - l2/mu2
void shift_by_multiplier(std::span<const cplx> z, std::span<const cplx> l2, double mu2,
                         std::span<cplx> w);
// y = a off mask, (mu1*y0 + l1 + mu2*a) / (mu1 + mu2) on mask
void blend_kspace(std::span<const cplx> a, std::span<const cplx> y0,
                  std::span<const cplx> l1, std::span<const std::uint8_t> mask,
                  double mu1, double mu2, std::span<cplx> y);
// l1 -= mu1 (y - y0) on mask; l2 -= mu2 (z - x)
void ascend_duals(std::span<const cplx> y, std::span<const cplx> y0,
                  std::span<const std::uint8_t> mask, std::span<const cplx> z,
                  std::span<const cplx> x, double mu1, double mu2, std::span<cplx> l1,
                  std::span<cplx> l2);
void apply_mask(std::span<const cplx> in, std::span<const std::uint8_t> mask,
                std::span<cplx> out);
double sum_abs(std::span<const cplx> x);
double sum_sq_diff(std::span<const cplx> a, std::span<const cplx> b);
double masked_sum_sq_diff(std::span<const cplx> a, std::span<const cplx> b,
                          std::span<const std::uint8_t> mask);
Residuals residuals(std::span<const cplx> y, std::span<const cplx> y0,
                    std::span<const std::uint8_t> mask, std::span<const cplx> z,
                    std::span<const cplx> x);
bool all_finite(std::span<const cplx> x);
}  // namespace omp

/// Function table over one implementation, selected by execution policy.
struct KernelTable {
  decltype(&serial::shrink) shrink;
  decltype(&serial::shift_by_multiplier) shift_by_multiplier;
  decltype(&serial::blend_kspace) blend_kspace;
  decltype(&serial::ascend_duals) ascend_duals;
  decltype(&serial::apply_mask) apply_mask;
  decltype(&serial::sum_abs) sum_abs;
  decltype(&serial::sum_sq_diff) sum_sq_diff;
  decltype(&serial::masked_sum_sq_diff) masked_sum_sq_diff;
  decltype(&serial::residuals) residuals;
  decltype(&serial::all_finite) all_finite;
};

const KernelTable& table(Exec exec);

/// Scalar complex soft-threshold: (a/|a|) * max(|a| - lambda, 0).
inline cplx soft(cplx a, double lambda) {
  const double mag = std::abs(a);
  if (mag <= lambda) return {0.0, 0.0};
  return a * ((mag - lambda) / mag);
}

/// Neumaier running sum.
struct CompensatedSum {
  double sum = 0;
  double carry = 0;

  void add(double v) {
    const double t = sum + v;
    if (std::abs(sum) >= std::abs(v))
      carry += (sum - t) + v;
    else
      carry += (v - t) + sum;
    sum = t;
  }
  double value() const { return sum + carry; }
};

}  // namespace csmri::kernels
