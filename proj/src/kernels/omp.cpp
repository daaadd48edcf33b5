// OpenMP kernels. Elementwise loops are split statically; reductions
// parallelize over the same fixed blocks the serial reference uses and
// combine block sums in order.

#include <omp.h>

#include <cmath>
#include <vector>

#include "csmri/kernels.hpp"

namespace csmri::kernels::omp {

namespace {

using index_t = std::ptrdiff_t;

index_t ssize(std::span<const cplx> s) { return static_cast<index_t>(s.size()); }

template <typename Term>
double blocked_sum(std::size_t n, Term term) {
  const index_t blocks = static_cast<index_t>((n + kReduceBlock - 1) / kReduceBlock);
  std::vector<double> partial(static_cast<std::size_t>(blocks));
#pragma omp parallel for schedule(static)
  for (index_t b = 0; b < blocks; ++b) {
    const std::size_t lo = static_cast<std::size_t>(b) * kReduceBlock;
    const std::size_t hi = std::min(n, lo + kReduceBlock);
    CompensatedSum block;
    for (std::size_t k = lo; k < hi; ++k) block.add(term(k));
    partial[static_cast<std::size_t>(b)] = block.value();
  }
  CompensatedSum total;
  for (double p : partial) total.add(p);
  return total.value();
}

}  // namespace

void shrink(std::span<const cplx> x, std::span<const cplx> l2, double mu2,
            std::span<cplx> z) {
  const double lambda = 1.0 / mu2;
  const index_t n = ssize(z);
#pragma omp parallel for schedule(static)
  for (index_t k = 0; k < n; ++k) z[k] = soft(x[k] + l2[k] / mu2, lambda);
}

void shift_by_multiplier(std::span<const cplx> z, std::span<const cplx> l2, double mu2,
                         std::span<cplx> w) {
  const index_t n = ssize(w);
#pragma omp parallel for schedule(static)
  for (index_t k = 0; k < n; ++k) w[k] = z[k] - l2[k] / mu2;
}

void blend_kspace(std::span<const cplx> a, std::span<const cplx> y0,
                  std::span<const cplx> l1, std::span<const std::uint8_t> mask,
                  double mu1, double mu2, std::span<cplx> y) {
  const double denom = mu1 + mu2;
  const index_t n = ssize(y);
#pragma omp parallel for schedule(static)
  for (index_t k = 0; k < n; ++k)
    y[k] = mask[k] ? (mu1 * (y0[k] + l1[k] / mu1) + mu2 * a[k]) / denom : a[k];
}

void ascend_duals(std::span<const cplx> y, std::span<const cplx> y0,
                  std::span<const std::uint8_t> mask, std::span<const cplx> z,
                  std::span<const cplx> x, double mu1, double mu2, std::span<cplx> l1,
                  std::span<cplx> l2) {
  const index_t n = ssize(l1);
#pragma omp parallel for schedule(static)
  for (index_t k = 0; k < n; ++k) {
    if (mask[k]) l1[k] -= mu1 * (y[k] - y0[k]);
    l2[k] -= mu2 * (z[k] - x[k]);
  }
}

void apply_mask(std::span<const cplx> in, std::span<const std::uint8_t> mask,
                std::span<cplx> out) {
  const index_t n = ssize(out);
#pragma omp parallel for schedule(static)
  for (index_t k = 0; k < n; ++k) out[k] = mask[k] ? in[k] : cplx{};
}

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
  const index_t n = ssize(x);
  bool ok = true;
#pragma omp parallel for schedule(static) reduction(&& : ok)
  for (index_t k = 0; k < n; ++k)
    ok = ok && std::isfinite(x[k].real()) && std::isfinite(x[k].imag());
  return ok;
}

}  // namespace csmri::kernels::omp

namespace csmri::kernels {

const KernelTable& table(Exec exec) {
  static constexpr KernelTable serial_table{
      serial::shrink,       serial::shift_by_multiplier, serial::blend_kspace,
      serial::ascend_duals, serial::apply_mask,          serial::sum_abs,
      serial::sum_sq_diff,  serial::masked_sum_sq_diff,  serial::residuals,
      serial::all_finite};
  static constexpr KernelTable omp_table{
      omp::shrink,       omp::shift_by_multiplier, omp::blend_kspace,
      omp::ascend_duals, omp::apply_mask,          omp::sum_abs,
      omp::sum_sq_diff,  omp::masked_sum_sq_diff,  omp::residuals,
      omp::all_finite};
  return exec == Exec::serial ? serial_table : omp_table;
}

}  // namespace csmri::kernels
