#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "csmri/grid.hpp"
#include "csmri/metrics.hpp"
#include "csmri/solver.hpp"

namespace csmri {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Replaces `path` with `bytes` via a temporary file and rename, so a
/// crash never leaves a truncated output behind.
void write_file_atomic(const std::filesystem::path& path, std::string_view bytes);
std::string read_file(const std::filesystem::path& path);

/// Grayscale PNG (1-16 bit) or PGM (P2/P5). Intensities are scaled to
/// [0, 1] by the format maximum; imaginary parts are zero.
ComplexImage load_image(const std::filesystem::path& path);

/// Writes |img| clipped to [0, 1] and quantized to `bit_depth` (8 or 16).
/// The extension picks the format: ".pgm" writes binary PGM, anything
/// else PNG.
void save_image(const ComplexImage& img, const std::filesystem::path& path, int bit_depth = 8);

/// Mask files are 8-bit PNG, 255 = sampled, stored in centred (fftshift)
/// layout for viewing. The loader converts back to DC-at-origin.
void save_mask(const SamplingMask& mask, const std::filesystem::path& path);
SamplingMask load_mask(const std::filesystem::path& path);

/// CSV with header `iter,objective,r1,r2,psnr,seconds`. The psnr field is
/// empty when no reference was supplied.
void save_trace(const ReconReport& report, const std::filesystem::path& path);
std::vector<IterationRecord> load_trace(const std::filesystem::path& path);

/// Raw k-space, little endian throughout:
///   bytes 0-7   magic "CSMRIKSP"
///   bytes 8-11  rows (uint32)
///   bytes 12-15 cols (uint32)
///   then rows*cols (re, im) float64 pairs, row-major, DC at (0, 0),
///   unitary DFT scaling.
inline constexpr std::string_view kKspaceMagic = "CSMRIKSP";
void save_kspace(const ComplexImage& kspace, const std::filesystem::path& path);
ComplexImage load_kspace(const std::filesystem::path& path);

/// Side-by-side histogram CSV of two sparsity reports:
/// `bin,original_edge,original_count,zero_filled_edge,zero_filled_count`.
void save_sparsity_csv(const SparsityReport& original, const SparsityReport& zero_filled,
                       const std::filesystem::path& path);

enum class PhantomKind { shepp_logan, blocks };
std::string to_string(PhantomKind k);
PhantomKind parse_phantom_kind(const std::string& s);

struct PhantomSpec {
  PhantomKind kind = PhantomKind::shepp_logan;
  std::size_t rows = 128;
  std::size_t cols = 128;
  double contrast = 1.0;   // multiplies every intensity
  std::uint64_t seed = 0;  // blocks only
};

/// One ellipse of the analytic Shepp-Logan head, in [-1, 1]^2 with y up.
struct Ellipse {
  double intensity;
  double semi_x;
  double semi_y;
  double centre_x;
  double centre_y;
  double angle_deg;
};

/// Modified (higher-contrast) 10-ellipse Shepp-Logan table.
const std::vector<Ellipse>& shepp_logan_ellipses();

/// Real-valued synthetic test image. Throws if rows or cols < 16.
ComplexImage make_phantom(const PhantomSpec& spec);

}  // namespace csmri
