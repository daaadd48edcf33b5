#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>

#include "csmri/grid.hpp"

namespace csmri {

enum class MaskKind { random, cartesian, radial };

std::string to_string(MaskKind k);
MaskKind parse_mask_kind(const std::string& s);

/// Parameters for one generated mask. `fraction` drives random and
/// cartesian masks, `lines` drives radial ones.
struct MaskSpec {
  MaskKind kind = MaskKind::random;
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::optional<double> fraction;
  std::optional<int> lines;
  std::uint64_t seed = 0;
  bool include_dc = true;
};

/// Exactly round(fraction * rows * cols) samples drawn uniformly without
/// replacement. With include_dc the DC sample is one of them.
SamplingMask random_mask(const MaskSpec& spec);

/// round(fraction * rows) complete k-space rows; row 0 forced with include_dc.
SamplingMask cartesian_mask(const MaskSpec& spec);

/// Pseudo-radial mask: `lines` spokes at angles k*pi/lines through the
/// centred origin, sampled every half pixel and snapped to the nearest
/// grid point. Returned in DC-at-origin layout.
SamplingMask radial_mask(const MaskSpec& spec);

struct RadialFit {
  int lines = 0;
  SamplingMask mask;
  double fraction = 0;
};

/// Bisects the spoke count so the achieved fraction is as close as
/// possible to `target`.
RadialFit radial_mask_for_fraction(std::size_t rows, std::size_t cols, double target);

/// Dispatches on spec.kind. Radial specs with only a fraction are fitted.
SamplingMask make_mask(const MaskSpec& spec);

double achieved_fraction(const SamplingMask& mask);

/// Centred (fftshift) layout <-> DC-at-origin layout.
SamplingMask fftshift(const SamplingMask& mask);
SamplingMask ifftshift(const SamplingMask& mask);

}  // namespace csmri
