#include "csmri/masks.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "csmri/random.hpp"

namespace csmri {

std::string to_string(MaskKind k) {
  switch (k) {
    case MaskKind::random: return "random";
    case MaskKind::cartesian: return "cartesian";
    case MaskKind::radial: return "radial";
  }
  return "unknown";
}

MaskKind parse_mask_kind(const std::string& s) {
  if (s == "random") return MaskKind::random;
  if (s == "cartesian") return MaskKind::cartesian;
  if (s == "radial") return MaskKind::radial;
  throw std::invalid_argument("unknown mask kind '" + s + "'");
}

namespace {

void require_dims(const MaskSpec& spec) {
  if (spec.rows == 0 || spec.cols == 0)
    throw std::invalid_argument("mask: rows and cols must be positive");
}

double require_fraction(const MaskSpec& spec) {
  if (!spec.fraction) throw std::invalid_argument("mask: fraction is required");
  const double f = *spec.fraction;
  if (!(f > 0.0 && f <= 1.0))
    throw std::out_of_range("mask: fraction " + std::to_string(f) + " outside (0, 1]");
  return f;
}

// Picks `need` distinct entries of `pool` (partial Fisher-Yates); they end
// up in pool[0, need).
void choose(std::vector<std::size_t>& pool, std::size_t need, PortableRng& rng) {
  for (std::size_t i = 0; i < need; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.below(pool.size() - i));
    std::swap(pool[i], pool[j]);
  }
}

}  // namespace

SamplingMask random_mask(const MaskSpec& spec) {
  require_dims(spec);
  const double f = require_fraction(spec);
  const std::size_t total = spec.rows * spec.cols;
  const auto count = static_cast<std::size_t>(std::llround(f * static_cast<double>(total)));
  if (count == 0) throw std::out_of_range("mask: fraction yields zero samples");

  std::vector<std::uint8_t> ind(total, 0);
  std::vector<std::size_t> pool;
  std::size_t need = count;
  if (spec.include_dc) {
    ind[0] = 1;
    pool.resize(total - 1);
    std::iota(pool.begin(), pool.end(), std::size_t{1});
    need -= 1;
  } else {
    pool.resize(total);
    std::iota(pool.begin(), pool.end(), std::size_t{0});
  }
  PortableRng rng(spec.seed);
  choose(pool, need, rng);
  for (std::size_t i = 0; i < need; ++i) ind[pool[i]] = 1;
  return {spec.rows, spec.cols, std::move(ind)};
}

SamplingMask cartesian_mask(const MaskSpec& spec) {
  require_dims(spec);
  const double f = require_fraction(spec);
  const auto count =
      static_cast<std::size_t>(std::llround(f * static_cast<double>(spec.rows)));
  if (count == 0) throw std::out_of_range("mask: fraction yields zero rows");

  std::vector<std::size_t> pool;
  std::size_t need = count;
  std::vector<std::size_t> chosen;
  if (spec.include_dc) {
    chosen.push_back(0);
    pool.resize(spec.rows - 1);
    std::iota(pool.begin(), pool.end(), std::size_t{1});
    need -= 1;
  } else {
    pool.resize(spec.rows);
    std::iota(pool.begin(), pool.end(), std::size_t{0});
  }
  PortableRng rng(spec.seed);
  choose(pool, need, rng);
  chosen.insert(chosen.end(), pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(need));

  SamplingMask mask(spec.rows, spec.cols);
  for (std::size_t r : chosen)
    for (std::size_t c = 0; c < spec.cols; ++c) mask.set(r, c, true);
  return mask;
}

SamplingMask radial_mask(const MaskSpec& spec) {
  require_dims(spec);
  if (!spec.lines || *spec.lines < 1)
    throw std::invalid_argument("mask: radial masks need lines >= 1");
  const int lines = *spec.lines;
  const auto rows = static_cast<long long>(spec.rows);
  const auto cols = static_cast<long long>(spec.cols);
  const long long cr = rows / 2;
  const long long cc = cols / 2;
  // Half-pixel steps out to max(rows, cols) reach every grid boundary.
  const long long steps = 2 * std::max(rows, cols);

  SamplingMask centred(spec.rows, spec.cols);
  for (int k = 0; k < lines; ++k) {
    const double theta = std::numbers::pi * static_cast<double>(k) / static_cast<double>(lines);
    const double dy = std::sin(theta);
    const double dx = std::cos(theta);
    for (long long s = -steps; s <= steps; ++s) {
      const double t = 0.5 * static_cast<double>(s);
      // llround is odd-symmetric, so spokes stay point-symmetric about the centre.
      const long long r = cr + std::llround(t * dy);
      const long long c = cc + std::llround(t * dx);
      if (r < 0 || r >= rows || c < 0 || c >= cols) continue;
      centred.set(static_cast<std::size_t>(r), static_cast<std::size_t>(c), true);
    }
  }
  centred.set(static_cast<std::size_t>(cr), static_cast<std::size_t>(cc), true);
  return ifftshift(centred);
}

RadialFit radial_mask_for_fraction(std::size_t rows, std::size_t cols, double target) {
  if (!(target > 0.0 && target <= 1.0))
    throw std::out_of_range("mask: fraction " + std::to_string(target) + " outside (0, 1]");
  MaskSpec spec{MaskKind::radial, rows, cols, std::nullopt, 1, 0, true};
  auto eval = [&](int lines) {
    spec.lines = lines;
    SamplingMask m = radial_mask(spec);
    const double f = achieved_fraction(m);
    return RadialFit{lines, std::move(m), f};
  };

  // Grow an upper bracket, then bisect for the smallest count reaching target.
  const int cap = static_cast<int>(4 * std::max(rows, cols));
  int lo = 1;
  RadialFit best = eval(lo);
  if (best.fraction >= target) return best;
  int hi = 2;
  RadialFit upper = eval(hi);
  while (upper.fraction < target && hi < cap) {
    lo = hi;
    hi = std::min(cap, hi * 2);
    upper = eval(hi);
  }
  if (upper.fraction < target) return upper;
  while (hi - lo > 1) {
    const int mid = lo + (hi - lo) / 2;
    RadialFit m = eval(mid);
    if (m.fraction >= target) {
      hi = mid;
      upper = std::move(m);
    } else {
      lo = mid;
    }
  }
  RadialFit lower = eval(lo);
  return std::abs(lower.fraction - target) < std::abs(upper.fraction - target) ? lower
                                                                                  : upper;
}

SamplingMask make_mask(const MaskSpec& spec) {
  switch (spec.kind) {
    case MaskKind::random: return random_mask(spec);
    case MaskKind::cartesian: return cartesian_mask(spec);
    case MaskKind::radial:
      if (spec.lines) return radial_mask(spec);
      return radial_mask_for_fraction(spec.rows, spec.cols, require_fraction(spec)).mask;
  }
  throw std::invalid_argument("mask: unknown kind");
}

double achieved_fraction(const SamplingMask& mask) {
  const std::size_t total = mask.rows() * mask.cols();
  if (total == 0) return 0.0;
  return static_cast<double>(mask.sample_count()) / static_cast<double>(total);
}

namespace {

SamplingMask roll(const SamplingMask& m, std::size_t dr, std::size_t dc) {
  SamplingMask out(m.rows(), m.cols());
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c)
      out.set((r + dr) % m.rows(), (c + dc) % m.cols(), m(r, c));
  return out;
}

}  // namespace

SamplingMask fftshift(const SamplingMask& mask) {
  return roll(mask, mask.rows() / 2, mask.cols() / 2);
}

SamplingMask ifftshift(const SamplingMask& mask) {
  return roll(mask, mask.rows() - mask.rows() / 2, mask.cols() - mask.cols() / 2);
}

}  // namespace csmri
