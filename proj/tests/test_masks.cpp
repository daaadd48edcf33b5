#include <doctest.h>

#include <set>

#include "csmri/masks.hpp"

using namespace csmri;

namespace {

MaskSpec spec(MaskKind kind, std::size_t rows, std::size_t cols, std::optional<double> fraction,
              std::optional<int> lines = std::nullopt, std::uint64_t seed = 0) {
  return {kind, rows, cols, fraction, lines, seed, true};
}

}  // namespace

TEST_CASE("random_mask hits the requested count exactly") {
  CHECK(random_mask(spec(MaskKind::random, 16, 16, 1.0)) == SamplingMask::full(16, 16));
  const auto m = random_mask(spec(MaskKind::random, 256, 256, 0.25, {}, 7));
  CHECK(m.sample_count() == 16384);
  CHECK(m(0, 0));
  CHECK(achieved_fraction(m) == 0.25);

  for (double f : {0.01, 0.05, 0.3, 0.77})
    CHECK(random_mask(spec(MaskKind::random, 33, 47, f)).sample_count() ==
          static_cast<std::size_t>(std::llround(f * 33 * 47)));

  auto no_dc = spec(MaskKind::random, 64, 64, 0.1, {}, 3);
  no_dc.include_dc = false;
  CHECK(random_mask(no_dc).sample_count() == 410);
}

TEST_CASE("random_mask is deterministic under a seed") {
  const auto a = random_mask(spec(MaskKind::random, 64, 64, 0.2, {}, 5));
  const auto b = random_mask(spec(MaskKind::random, 64, 64, 0.2, {}, 5));
  const auto c = random_mask(spec(MaskKind::random, 64, 64, 0.2, {}, 6));
  CHECK(a == b);
  CHECK_FALSE(a == c);
}

TEST_CASE("random_mask rejects out-of-range fractions") {
  CHECK_THROWS_AS(random_mask(spec(MaskKind::random, 8, 8, 1.5)), std::out_of_range);
  CHECK_THROWS_AS(random_mask(spec(MaskKind::random, 8, 8, 0.0)), std::out_of_range);
  CHECK_THROWS_AS(random_mask(spec(MaskKind::random, 8, 8, -0.2)), std::out_of_range);
  CHECK_THROWS_AS(random_mask(spec(MaskKind::random, 8, 8, 0.001)), std::out_of_range);
  CHECK_THROWS_AS(random_mask(spec(MaskKind::random, 8, 8, std::nullopt)), std::invalid_argument);
}

TEST_CASE("cartesian_mask selects whole rows") {
  CHECK(cartesian_mask(spec(MaskKind::cartesian, 16, 16, 1.0)) == SamplingMask::full(16, 16));
  const auto m = cartesian_mask(spec(MaskKind::cartesian, 128, 128, 0.25, {}, 11));
  CHECK(m.sample_count() == 4096);
  std::size_t full_rows = 0;
  for (std::size_t r = 0; r < 128; ++r) {
    std::size_t n = 0;
    for (std::size_t c = 0; c < 128; ++c) n += m(r, c);
    CHECK((n == 0 || n == 128));
    full_rows += n == 128;
  }
  CHECK(full_rows == 32);
  CHECK(m(0, 5));

  CHECK(m == cartesian_mask(spec(MaskKind::cartesian, 128, 128, 0.25, {}, 11)));
  CHECK_FALSE(m == cartesian_mask(spec(MaskKind::cartesian, 128, 128, 0.25, {}, 12)));
  CHECK_THROWS_AS(cartesian_mask(spec(MaskKind::cartesian, 16, 16, 0.01)), std::out_of_range);
}

TEST_CASE("radial_mask with one line is a single row through the centre") {
  const auto m = radial_mask(spec(MaskKind::radial, 8, 8, std::nullopt, 1));
  // Oracle by hand: angle 0 snaps to row 4 (centre) of the centred grid,
  // all 8 columns; after unshifting, centred row 4 becomes row 0.
  const auto centred = fftshift(m);
  CHECK(centred.sample_count() == 8);
  for (std::size_t c = 0; c < 8; ++c) CHECK(centred(4, c));
  for (std::size_t c = 0; c < 8; ++c) CHECK(m(0, c));
  CHECK(m(0, 0));
}

TEST_CASE("radial_mask with two lines is a centred cross") {
  const auto centred = fftshift(radial_mask(spec(MaskKind::radial, 9, 9, std::nullopt, 2)));
  std::set<std::pair<std::size_t, std::size_t>> expected;
  for (std::size_t i = 0; i < 9; ++i) {
    expected.insert({4, i});
    expected.insert({i, 4});
  }
  CHECK(centred.sample_count() == expected.size());
  for (auto [r, c] : expected) CHECK(centred(r, c));
}

TEST_CASE("radial coverage grows with nested angle sets and approaches full") {
  double prev = 0;
  for (int lines = 1; lines <= 2048; lines *= 2) {
    const double f = achieved_fraction(radial_mask(spec(MaskKind::radial, 128, 128, {}, lines)));
    CHECK(f >= prev);
    prev = f;
  }
  CHECK(prev >= 0.99);
}

TEST_CASE("radial mask is point-symmetric about the centre") {
  const auto centred = fftshift(radial_mask(spec(MaskKind::radial, 512, 512, {}, 60)));
  std::size_t total = 0, mirrored = 0;
  for (std::size_t r = 0; r < 512; ++r)
    for (std::size_t c = 0; c < 512; ++c) {
      if (!centred(r, c)) continue;
      ++total;
      const long long rr = 2 * 256 - static_cast<long long>(r);
      const long long cc = 2 * 256 - static_cast<long long>(c);
      if (rr < 512 && cc < 512 && centred(rr, cc)) ++mirrored;
    }
  CHECK(static_cast<double>(mirrored) >= 0.99 * static_cast<double>(total));
}

TEST_CASE("radial fit lands near the requested fraction") {
  const auto fit = radial_mask_for_fraction(512, 512, 0.16);
  CHECK(std::abs(fit.fraction - 0.16) <= 0.01);
  CHECK(fit.fraction == achieved_fraction(fit.mask));
  CHECK(fit.mask == radial_mask(spec(MaskKind::radial, 512, 512, {}, fit.lines)));
  MESSAGE("512x512 radial: ", fit.lines, " lines -> ", fit.fraction);
}

TEST_CASE("make_mask dispatches and fftshift round-trips") {
  const auto r = make_mask(spec(MaskKind::radial, 64, 64, 0.3));
  CHECK(std::abs(achieved_fraction(r) - 0.3) < 0.02);
  const auto m = random_mask(spec(MaskKind::random, 13, 10, 0.4, {}, 2));
  CHECK(ifftshift(fftshift(m)) == m);
  CHECK(achieved_fraction(SamplingMask::empty(4, 4)) == 0.0);
  CHECK(achieved_fraction(SamplingMask::full(4, 4)) == 1.0);
  CHECK(parse_mask_kind("cartesian") == MaskKind::cartesian);
  CHECK_THROWS(parse_mask_kind("spiral"));
}
