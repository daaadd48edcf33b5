// Reference kernels: straightforward sequential loops.

#include <cmath>

#include "csmri/kernels.hpp"

namespace csmri::kernels::serial {

void shrink(std::span<const cplx> x, std::span<const cplx> l2, double mu2,
            std::span<cplx> z) {
  const double lambda = 1.0 / mu2;
  for (std::size_t k = 0; k < z.size(); ++k) z[k] = soft(x[k] + l2[k] / mu2, lambda);
}

void shift_by_multiplier(std::span<const cplx> z, std::span<const cplx> l2, double mu2,
                         std::span<cplx> w) {
  for (std::size_t k = 0; k < w.size(); ++k) w[k] = z[k] - l2[k] / mu2;
}

void blend_kspace(std::span<const cplx> a, std::span<const cplx> y0,
                  std::span<const cplx> l1, std::span<const std::uint8_t> mask,
                  double mu1, double mu2, std::span<cplx> y) {
  const double denom = mu1 + mu2;
  for (std::size_t k = 0; k < y.size(); ++k) {
    if (mask[k])
      y[k] = (mu1 * (y0[k] + l1[k] / mu1) + mu2 * a[k]) / denom;
    else
      y[k] = a[k];
  }
}

void ascend_duals(std::span<const cplx> y, std::span<const cplx> y0,
                  std::span<const std::uint8_t> mask, std::span<const cplx> z,
                  std::span<const cplx> x, double mu1, double mu2, std::span<cplx> l1,
                  std::span<cplx> l2) {
  for (std::size_t k = 0; k < l1.size(); ++k) {
    if (mask[k]) l1[k] -= mu1 * (y[k] - y0[k]);
    l2[k] -= mu2 * (z[k] - x[k]);
  }
}

void apply_mask(std::span<const cplx> in, std::span<const std::uint8_t> mask,
                std::span<cplx> out) {
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = mask[k] ? in[k] : cplx{};
}

namespace {

// Blocked compensated reduction of term(k) over [0, n).
template <typename Term>
double blocked_sum(std::size_t n, Term term) {
  CompensatedSum total;
  for (std::size_t lo = 0; lo < n; lo += kReduceBlock) {
    const std::size_t hi = std::min(n, lo + kReduceBlock);
    CompensatedSum block;
    for (std::size_t k = lo; k < hi; ++k) block.add(term(k));
    total.add(block.value());
  }
  return total.value();
}

}  // namespace

double sum_abs(std::span<const cplx> x) {
  return blocked_sum(x.size(), [&](std::size_t k) { return std::abs(x[k]); });
}

double sum_sq_diff(std::span<const cplx> a, std::span<const cplx> b) {
  return blocked_sum(a.size(), [&](std::size_t k) { return std::norm(a[k] - b[k]); });
}

double masked_sum_sq_diff(std::span<const cplx> a, std::span<const cplx> b,
                          std::span<const std::uint8_t> mask) {
  return blocked_sum(a.size(), [&](std::size_t k) {
    return mask[k] ? std::norm(a[k] - b[k]) : 0.0;
  });
}

Residuals residuals(std::span<const cplx> y, std::span<const cplx> y0,
                    std::span<const std::uint8_t> mask, std::span<const cplx> z,
                    std::span<const cplx> x) {
  return {masked_sum_sq_diff(y, y0, mask), sum_sq_diff(z, x)};
}

bool all_finite(std::span<const cplx> x) {
  for (const auto& v : x)
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
  return true;
}

}  // namespace csmri::kernels::serial
