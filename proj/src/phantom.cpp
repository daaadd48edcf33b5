#include <algorithm>
#include <cmath>
#include <numbers>

#include "csmri/io.hpp"
#include "csmri/random.hpp"

namespace csmri {

std::string to_string(PhantomKind k) {
  return k == PhantomKind::shepp_logan ? "shepp_logan" : "blocks";
}

PhantomKind parse_phantom_kind(const std::string& s) {
  if (s == "shepp_logan" || s == "shepp-logan") return PhantomKind::shepp_logan;
  if (s == "blocks") return PhantomKind::blocks;
  throw std::invalid_argument("unknown phantom kind '" + s + "'");
}

const std::vector<Ellipse>& shepp_logan_ellipses() {
  static const std::vector<Ellipse> table = {
      {1.0, 0.69, 0.92, 0.0, 0.0, 0},
      {-0.8, 0.6624, 0.8740, 0.0, -0.0184, 0},
      {-0.2, 0.1100, 0.3100, 0.22, 0.0, -18},
      {-0.2, 0.1600, 0.4100, -0.22, 0.0, 18},
      {0.1, 0.2100, 0.2500, 0.0, 0.35, 0},
      {0.1, 0.0460, 0.0460, 0.0, 0.1, 0},
      {0.1, 0.0460, 0.0460, 0.0, -0.1, 0},
      {0.1, 0.0460, 0.0230, -0.08, -0.605, 0},
      {0.1, 0.0230, 0.0230, 0.0, -0.606, 0},
      {0.1, 0.0230, 0.0460, 0.06, -0.605, 0},
  };
  return table;
}

namespace {

// Pixel-centre coordinate in [-1, 1]; symmetric under i -> n-1-i.
double axis(std::size_t i, std::size_t n) {
  const double half = (static_cast<double>(n) - 1.0) / 2.0;
  return (static_cast<double>(i) - half) / half;
}

ComplexImage shepp_logan(const PhantomSpec& spec) {
  ComplexImage img(spec.rows, spec.cols);
  const auto& ellipses = shepp_logan_ellipses();
  for (std::size_t r = 0; r < spec.rows; ++r) {
    const double y = -axis(r, spec.rows);
    for (std::size_t c = 0; c < spec.cols; ++c) {
      const double x = axis(c, spec.cols);
      double v = 0;
      for (const auto& e : ellipses) {
        const double phi = e.angle_deg * std::numbers::pi / 180.0;
        const double dx = x - e.centre_x;
        const double dy = y - e.centre_y;
        const double u = dx * std::cos(phi) + dy * std::sin(phi);
        const double w = -dx * std::sin(phi) + dy * std::cos(phi);
        if ((u * u) / (e.semi_x * e.semi_x) + (w * w) / (e.semi_y * e.semi_y) <= 1.0)
          v += e.intensity;
      }
      img(r, c) = std::max(0.0, v) * spec.contrast;
    }
  }
  return img;
}

ComplexImage blocks(const PhantomSpec& spec) {
  ComplexImage img(spec.rows, spec.cols);
  PortableRng rng(spec.seed);
  const std::uint64_t count = 6 + rng.below(6);
  for (std::uint64_t b = 0; b < count; ++b) {
    const auto r0 = static_cast<std::size_t>(rng.below(spec.rows));
    const auto c0 = static_cast<std::size_t>(rng.below(spec.cols));
    const auto h = static_cast<std::size_t>(1 + rng.below(spec.rows / 3));
    const auto w = static_cast<std::size_t>(1 + rng.below(spec.cols / 3));
    const double value = static_cast<double>(1 + rng.below(8)) / 8.0;
    for (std::size_t r = r0; r < std::min(spec.rows, r0 + h); ++r)
      for (std::size_t c = c0; c < std::min(spec.cols, c0 + w); ++c)
        img(r, c) = value * spec.contrast;
  }
  return img;
}

}  // namespace

ComplexImage make_phantom(const PhantomSpec& spec) {
  if (spec.rows < 16 || spec.cols < 16)
    throw std::invalid_argument("make_phantom: rows and cols must be at least 16");
  return spec.kind == PhantomKind::shepp_logan ? shepp_logan(spec) : blocks(spec);
}

}  // namespace csmri
