#include <doctest.h>

#include <random>

#include "csmri/grid.hpp"
#include "oracles.hpp"

using namespace csmri;

TEST_CASE("mask_apply keeps sampled entries and zeroes the rest") {
  ComplexImage img(2, 2, {{1, 1}, {2, 0}, {3, 0}, {4, 0}});
  SamplingMask diag(2, 2, std::vector<std::uint8_t>{1, 0, 0, 1});
  const ComplexImage out = mask_apply(img, diag);
  CHECK(out == ComplexImage(2, 2, {{1, 1}, {0, 0}, {0, 0}, {4, 0}}));

  CHECK(mask_apply(img, SamplingMask::full(2, 2)) == img);
  CHECK(mask_apply(img, SamplingMask::empty(2, 2)) == ComplexImage(2, 2));
}

TEST_CASE("mask_apply rejects mismatched shapes and names both") {
  ComplexImage img(3, 4);
  try {
    (void)mask_apply(img, SamplingMask::full(4, 3));
    FAIL("expected DimensionError");
  } catch (const DimensionError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("3x4") != std::string::npos);
    CHECK(msg.find("4x3") != std::string::npos);
  }
}

TEST_CASE("mask_apply is idempotent") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 10; ++trial) {
    const auto x = oracle::random_image(17, 23, rng);
    const auto m = oracle::random_mask(17, 23, 0.4, rng);
    const auto once = mask_apply(x, m);
    CHECK(mask_apply(once, m) == once);
  }
}

TEST_CASE("l1_norm") {
  CHECK(l1_norm(ComplexImage(5, 5)) == 0.0);
  CHECK(l1_norm(ComplexImage(1, 2, {{3, 0}, {3, 4}})) == doctest::Approx(8.0).epsilon(1e-15));

  // Compensated long-double re-summation as the oracle.
  std::mt19937_64 rng(3);
  const auto x = oracle::random_image(64, 64, rng);
  long double acc = 0;
  for (const auto& v : x.data()) acc += std::hypot(static_cast<long double>(v.real()), v.imag());
  const double ref = static_cast<double>(acc);
  CHECK(std::abs(l1_norm(x) - ref) <= 1e-12 * ref);
}

TEST_CASE("l1_norm is absolutely homogeneous and obeys the triangle inequality") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-3, 3);
  for (int trial = 0; trial < 20; ++trial) {
    const auto x = oracle::random_image(16, 9, rng);
    const auto y = oracle::random_image(16, 9, rng);
    const cplx c{u(rng), u(rng)};
    const double lhs = l1_norm(c * x);
    const double rhs = std::abs(c) * l1_norm(x);
    CHECK(std::abs(lhs - rhs) <= 1e-12 * rhs);
    CHECK(l1_norm(x + y) <= l1_norm(x) + l1_norm(y) + 1e-12);
  }
}

TEST_CASE("masked_frobenius_distance") {
  std::mt19937_64 rng(9);
  const auto a = oracle::random_image(6, 6, rng);
  CHECK(masked_frobenius_distance(a, a, SamplingMask::full(6, 6)) == 0.0);

  const auto b = oracle::random_image(6, 6, rng);
  CHECK(masked_frobenius_distance(a, b, SamplingMask::empty(6, 6)) == 0.0);
  CHECK(masked_frobenius_distance(a, b, SamplingMask::full(6, 6)) ==
        doctest::Approx(frobenius_distance(a, b)).epsilon(1e-15));

  ComplexImage p(2, 2, {{3, 0}, {4, 0}, {0, 0}, {0, 0}});
  CHECK(masked_frobenius_distance(p, ComplexImage(2, 2), SamplingMask::full(2, 2)) ==
        doctest::Approx(5.0).epsilon(1e-15));

  CHECK_THROWS_AS(masked_frobenius_distance(a, ComplexImage(6, 5), SamplingMask::full(6, 6)),
                  DimensionError);
}

TEST_CASE("reductions do not depend on the execution policy") {
  std::mt19937_64 rng(21);
  const auto a = oracle::random_image(129, 67, rng);
  const auto b = oracle::random_image(129, 67, rng);
  const auto m = oracle::random_mask(129, 67, 0.3, rng);
  CHECK(l1_norm(a, Exec::serial) == l1_norm(a, Exec::parallel));
  CHECK(masked_frobenius_distance(a, b, m, Exec::serial) ==
        masked_frobenius_distance(a, b, m, Exec::parallel));
}

TEST_CASE("constructors validate their invariants") {
  CHECK_THROWS_AS(ComplexImage(2, 2, std::vector<cplx>(3)), std::invalid_argument);
  CHECK_THROWS_AS(SamplingMask(2, 2, std::vector<std::uint8_t>{0, 1, 2, 0}),
                  std::invalid_argument);
  SamplingMask m(3, 3, std::vector<std::uint8_t>{1, 0, 1, 0, 0, 0, 1, 1, 0});
  CHECK(m.sample_count() == 4);
  ComplexImage bad(1, 2, {{1, 0}, {std::nan(""), 0}});
  CHECK_FALSE(bad.all_finite());
}
