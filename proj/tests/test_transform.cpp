#include <doctest.h>

#include <random>

#include "csmri/transform.hpp"
#include "oracles.hpp"

using namespace csmri;

TEST_CASE("delta at the origin transforms to a constant") {
  TransformPlan plan(4, 4);
  ComplexImage delta(4, 4);
  delta(0, 0) = 1.0;
  const auto y = plan.forward(delta);
  for (const auto& v : y.data()) CHECK(std::abs(v - cplx{0.25, 0}) < 1e-15);

  ComplexImage constant(4, 4);
  for (auto& v : constant.data()) v = 0.25;
  CHECK(oracle::max_abs_diff(plan.inverse(constant), delta) < 1e-15);

  CHECK(plan.forward(ComplexImage(4, 4)) == ComplexImage(4, 4));
}

TEST_CASE("forward and inverse match the brute-force DFT for every size up to 32") {
  std::mt19937_64 rng(1234);
  for (std::size_t rows = 1; rows <= 32; rows += (rows < 12 ? 1 : 5)) {
    for (std::size_t cols : {std::size_t{1}, std::size_t{2}, std::size_t{7}, rows}) {
      const TransformPlan plan(rows, cols);
      const auto x = oracle::random_image(rows, cols, rng);
      CHECK_MESSAGE(oracle::max_abs_diff(plan.forward(x), oracle::brute_dft2(x, -1)) < 1e-12,
                    rows, "x", cols);
      CHECK_MESSAGE(oracle::max_abs_diff(plan.inverse(x), oracle::brute_dft2(x, +1)) < 1e-12,
                    rows, "x", cols);
    }
  }
}

TEST_CASE("round trip, Parseval, linearity, adjoint") {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> u(-2, 2);
  for (auto [rows, cols] : {std::pair{8, 8}, std::pair{30, 45}, std::pair{128, 96}}) {
    const TransformPlan plan(rows, cols);
    const auto x = oracle::random_image(rows, cols, rng);
    const auto y = oracle::random_image(rows, cols, rng);
    const auto fx = plan.forward(x);
    CHECK(oracle::max_abs_diff(plan.inverse(fx), x) < 1e-12);
    const double nx = frobenius_norm(x);
    CHECK(std::abs(frobenius_norm(fx) - nx) <= 1e-10 * nx);

    const cplx a{u(rng), u(rng)}, b{u(rng), u(rng)};
    const auto lhs = plan.forward(a * x + b * y);
    const auto rhs = a * fx + b * plan.forward(y);
    CHECK(oracle::max_abs_diff(lhs, rhs) <= 1e-10 * oracle::max_abs(rhs));

    // <F x, y> = <x, F^H y>
    cplx ip1 = 0, ip2 = 0;
    const auto iy = plan.inverse(y);
    for (std::size_t k = 0; k < x.size(); ++k) {
      ip1 += fx[k] * std::conj(y[k]);
      ip2 += x[k] * std::conj(iy[k]);
    }
    CHECK(std::abs(ip1 - ip2) <= 1e-10 * std::abs(ip1));
  }
}

TEST_CASE("serial and parallel transforms are bit-identical") {
  std::mt19937_64 rng(8);
  for (auto [rows, cols] : {std::pair{64, 64}, std::pair{31, 50}}) {
    const TransformPlan plan(rows, cols);
    const auto x = oracle::random_image(rows, cols, rng);
    CHECK(plan.forward(x, Exec::serial) == plan.forward(x, Exec::parallel));
    CHECK(plan.inverse(x, Exec::serial) == plan.inverse(x, Exec::parallel));
  }
}

TEST_CASE("plan rejects images of another shape") {
  TransformPlan plan(8, 8);
  CHECK_THROWS_AS(plan.forward(ComplexImage(8, 9)), DimensionError);
  CHECK_THROWS_AS(plan.inverse(ComplexImage(7, 8)), DimensionError);
}
