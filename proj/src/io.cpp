#include "csmri/io.hpp"

#include <png.h>
#include <unistd.h>

#include <algorithm>
#include <array>
#include <bit>
#include <cctype>
#include <cmath>
#include <csetjmp>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

#include "csmri/masks.hpp"

namespace csmri {

namespace fs = std::filesystem;

void write_file_atomic(const fs::path& path, std::string_view bytes) {
  fs::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + tmp.string() + " for writing");
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    out.flush();
    if (!out) {
      std::error_code ec;
      fs::remove(tmp, ec);
      throw IoError("write failed for " + path.string());
    }
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw IoError("cannot move output into place at " + path.string());
  }
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// ---------------------------------------------------------------- PNG

namespace {

struct PngPixels {
  std::size_t rows = 0;
  std::size_t cols = 0;
  int bit_depth = 8;  // 8 or 16 after expansion
  std::vector<std::uint8_t> bytes;
};

struct MemoryReader {
  const std::string* data;
  std::size_t offset;
};

void png_read_from_memory(png_structp png, png_bytep out, png_size_t len) {
  auto* src = static_cast<MemoryReader*>(png_get_io_ptr(png));
  if (src->offset + len > src->data->size()) png_error(png, "truncated PNG data");
  std::memcpy(out, src->data->data() + src->offset, len);
  src->offset += len;
}

void png_write_to_memory(png_structp png, png_bytep in, png_size_t len) {
  auto* dst = static_cast<std::string*>(png_get_io_ptr(png));
  dst->append(reinterpret_cast<const char*>(in), len);
}

void png_flush_noop(png_structp) {}

[[noreturn]] void png_quiet_error(png_structp png, png_const_charp) { png_longjmp(png, 1); }
void png_quiet_warning(png_structp, png_const_charp) {}

// Only trivially destructible locals live between setjmp and the reads.
// Returns an error message, or nullptr on success.
const char* decode_png(const std::string& data, PngPixels& px) {
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, png_quiet_error,
                                             png_quiet_warning);
  if (!png) return "cannot allocate PNG reader";
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    return "cannot allocate PNG reader";
  }
  MemoryReader reader{&data, 0};
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    return "corrupt PNG file";
  }
  png_set_read_fn(png, &reader, png_read_from_memory);
  png_read_info(png, info);
  const int color = png_get_color_type(png, info);
  const int depth = png_get_bit_depth(png, info);
  if (color != PNG_COLOR_TYPE_GRAY) {
    png_destroy_read_struct(&png, &info, nullptr);
    return "PNG is not single-channel grayscale";
  }
  if (depth < 8) png_set_expand_gray_1_2_4_to_8(png);
  png_read_update_info(png, info);
  const png_uint_32 width = png_get_image_width(png, info);
  const png_uint_32 height = png_get_image_height(png, info);
  const std::size_t stride = png_get_rowbytes(png, info);
  px.rows = height;
  px.cols = width;
  px.bit_depth = depth == 16 ? 16 : 8;
  if (stride != width * static_cast<std::size_t>(px.bit_depth / 8)) {
    png_destroy_read_struct(&png, &info, nullptr);
    return "unexpected PNG row layout";
  }
  px.bytes.resize(stride * height);
  for (png_uint_32 r = 0; r < height; ++r)
    png_read_row(png, px.bytes.data() + r * stride, nullptr);
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);
  return nullptr;
}

const char* encode_png(const PngPixels& px, std::string& out) {
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, png_quiet_error,
                                               png_quiet_warning);
  if (!png) return "cannot allocate PNG writer";
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_write_struct(&png, nullptr);
    return "cannot allocate PNG writer";
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    return "PNG encoding failed";
  }
  png_set_write_fn(png, &out, png_write_to_memory, png_flush_noop);
  png_set_IHDR(png, info, static_cast<png_uint_32>(px.cols), static_cast<png_uint_32>(px.rows),
               px.bit_depth, PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE,
               PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  const std::size_t stride = px.cols * static_cast<std::size_t>(px.bit_depth / 8);
  for (std::size_t r = 0; r < px.rows; ++r)
    png_write_row(png, const_cast<png_bytep>(px.bytes.data() + r * stride));
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  return nullptr;
}

// ---------------------------------------------------------------- PGM

void skip_pgm_space(std::istream& in) {
  while (true) {
    const int ch = in.peek();
    if (ch == '#') {
      std::string line;
      std::getline(in, line);
    } else if (std::isspace(ch)) {
      in.get();
    } else {
      return;
    }
  }
}

std::size_t read_pgm_number(std::istream& in, const fs::path& path) {
  skip_pgm_space(in);
  long long v = -1;
  if (!(in >> v) || v < 0) throw IoError("corrupt PGM header in " + path.string());
  return static_cast<std::size_t>(v);
}

ComplexImage decode_pgm(const std::string& data, const fs::path& path) {
  std::istringstream in(data);
  std::string magic(2, '\0');
  in.read(magic.data(), 2);
  const bool binary = magic == "P5";
  const std::size_t cols = read_pgm_number(in, path);
  const std::size_t rows = read_pgm_number(in, path);
  const std::size_t maxval = read_pgm_number(in, path);
  if (rows == 0 || cols == 0 || maxval == 0 || maxval > 65535)
    throw IoError("unsupported PGM header in " + path.string());

  std::vector<double> values(rows * cols);
  const auto divisor = static_cast<double>(maxval);
  if (binary) {
    in.get();  // single whitespace before the raster
    const std::size_t bytes_per = maxval > 255 ? 2 : 1;
    std::string raster(rows * cols * bytes_per, '\0');
    in.read(raster.data(), static_cast<std::streamsize>(raster.size()));
    if (static_cast<std::size_t>(in.gcount()) != raster.size())
      throw IoError("truncated PGM raster in " + path.string());
    for (std::size_t k = 0; k < rows * cols; ++k) {
      std::size_t v = static_cast<std::uint8_t>(raster[k * bytes_per]);
      if (bytes_per == 2) v = (v << 8) | static_cast<std::uint8_t>(raster[k * 2 + 1]);
      values[k] = static_cast<double>(std::min(v, maxval)) / divisor;
    }
  } else {
    for (auto& v : values)
      v = static_cast<double>(std::min(read_pgm_number(in, path), maxval)) / divisor;
  }
  return ComplexImage::from_real(rows, cols, values);
}

std::string encode_pgm(const PngPixels& px) {
  std::string out = "P5\n" + std::to_string(px.cols) + " " + std::to_string(px.rows) + "\n" +
                    (px.bit_depth == 16 ? "65535" : "255") + "\n";
  // PGM and PNG both store 16-bit samples big-endian.
  out.append(reinterpret_cast<const char*>(px.bytes.data()), px.bytes.size());
  return out;
}

bool has_extension(const fs::path& path, std::string_view ext) {
  std::string e = path.extension().string();
  std::transform(e.begin(), e.end(), e.begin(), [](unsigned char c) { return std::tolower(c); });
  return e == ext;
}

PngPixels quantize(const ComplexImage& img, int bit_depth) {
  if (bit_depth != 8 && bit_depth != 16)
    throw std::invalid_argument("save_image: bit depth must be 8 or 16");
  PngPixels px{img.rows(), img.cols(), bit_depth, {}};
  const double maxval = bit_depth == 16 ? 65535.0 : 255.0;
  const std::size_t bytes_per = static_cast<std::size_t>(bit_depth / 8);
  px.bytes.resize(img.size() * bytes_per);
  for (std::size_t k = 0; k < img.size(); ++k) {
    double m = std::abs(img[k]);
    if (!(m >= 0)) m = 0;  // NaN
    const auto q = static_cast<std::uint32_t>(std::lround(std::clamp(m, 0.0, 1.0) * maxval));
    if (bytes_per == 1) {
      px.bytes[k] = static_cast<std::uint8_t>(q);
    } else {
      px.bytes[2 * k] = static_cast<std::uint8_t>(q >> 8);
      px.bytes[2 * k + 1] = static_cast<std::uint8_t>(q & 0xff);
    }
  }
  return px;
}

}  // namespace

ComplexImage load_image(const fs::path& path) {
  if (!fs::exists(path)) throw IoError("no such file: " + path.string());
  const std::string data = read_file(path);
  if (data.size() >= 8 && png_sig_cmp(reinterpret_cast<png_const_bytep>(data.data()), 0, 8) == 0) {
    PngPixels px;
    if (const char* err = decode_png(data, px)) throw IoError(path.string() + ": " + err);
    std::vector<double> values(px.rows * px.cols);
    if (px.bit_depth == 16) {
      for (std::size_t k = 0; k < values.size(); ++k)
        values[k] = static_cast<double>((px.bytes[2 * k] << 8) | px.bytes[2 * k + 1]) / 65535.0;
    } else {
      for (std::size_t k = 0; k < values.size(); ++k)
        values[k] = static_cast<double>(px.bytes[k]) / 255.0;
    }
    return ComplexImage::from_real(px.rows, px.cols, values);
  }
  if (data.size() >= 2 && data[0] == 'P' && (data[1] == '5' || data[1] == '2'))
    return decode_pgm(data, path);
  throw IoError(path.string() + ": unsupported image format (expected grayscale PNG or PGM)");
}

void save_image(const ComplexImage& img, const fs::path& path, int bit_depth) {
  const PngPixels px = quantize(img, bit_depth);
  if (has_extension(path, ".pgm")) {
    write_file_atomic(path, encode_pgm(px));
    return;
  }
  std::string bytes;
  if (const char* err = encode_png(px, bytes)) throw IoError(path.string() + ": " + err);
  write_file_atomic(path, bytes);
}

void save_mask(const SamplingMask& mask, const fs::path& path) {
  const SamplingMask centred = fftshift(mask);
  PngPixels px{mask.rows(), mask.cols(), 8, {}};
  px.bytes.reserve(mask.rows() * mask.cols());
  for (auto v : centred.indicator()) px.bytes.push_back(v ? 255 : 0);
  std::string bytes;
  if (const char* err = encode_png(px, bytes)) throw IoError(path.string() + ": " + err);
  write_file_atomic(path, bytes);
}

SamplingMask load_mask(const fs::path& path) {
  const ComplexImage img = load_image(path);
  std::vector<std::uint8_t> ind(img.size());
  for (std::size_t k = 0; k < img.size(); ++k) ind[k] = img[k].real() >= 0.5 ? 1 : 0;
  return ifftshift(SamplingMask(img.rows(), img.cols(), std::move(ind)));
}

// ---------------------------------------------------------------- trace CSV

namespace {

std::string format_double(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  std::ostringstream os;
  os << std::setprecision(std::numeric_limits<double>::max_digits10) << v;
  return os.str();
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace

void save_trace(const ReconReport& report, const fs::path& path) {
  std::string out = "iter,objective,r1,r2,psnr,seconds\n";
  for (const auto& rec : report.records) {
    out += std::to_string(rec.iter) + "," + format_double(rec.objective) + "," +
           format_double(rec.r1) + "," + format_double(rec.r2) + "," +
           (rec.psnr ? format_double(*rec.psnr) : std::string{}) + "," +
           format_double(rec.seconds) + "\n";
  }
  write_file_atomic(path, out);
}

std::vector<IterationRecord> load_trace(const fs::path& path) {
  std::istringstream in(read_file(path));
  std::string line;
  if (!std::getline(in, line) || line != "iter,objective,r1,r2,psnr,seconds")
    throw IoError(path.string() + ": missing trace header");
  std::vector<IterationRecord> records;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split_csv(line);
    if (f.size() != 6) throw IoError(path.string() + ": malformed trace row '" + line + "'");
    IterationRecord rec;
    try {
      rec.iter = std::stoi(f[0]);
      rec.objective = std::stod(f[1]);
      rec.r1 = std::stod(f[2]);
      rec.r2 = std::stod(f[3]);
      if (!f[4].empty()) rec.psnr = std::stod(f[4]);
      rec.seconds = std::stod(f[5]);
    } catch (const std::exception&) {
      throw IoError(path.string() + ": malformed trace row '" + line + "'");
    }
    records.push_back(rec);
  }
  return records;
}

// ---------------------------------------------------------------- raw k-space

namespace {

template <typename T>
void put_le(std::string& out, T v) {
  auto bits = std::bit_cast<std::array<unsigned char, sizeof(T)>>(v);
  if constexpr (std::endian::native == std::endian::big) std::reverse(bits.begin(), bits.end());
  out.append(reinterpret_cast<const char*>(bits.data()), bits.size());
}

template <typename T>
T get_le(const std::string& in, std::size_t offset) {
  std::array<unsigned char, sizeof(T)> bits;
  std::memcpy(bits.data(), in.data() + offset, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(bits.begin(), bits.end());
  return std::bit_cast<T>(bits);
}

}  // namespace

void save_kspace(const ComplexImage& kspace, const fs::path& path) {
  std::string out(kKspaceMagic);
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(kspace.rows()));
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(kspace.cols()));
  out.reserve(16 + kspace.size() * 16);
  for (const auto& v : kspace.data()) {
    put_le<double>(out, v.real());
    put_le<double>(out, v.imag());
  }
  write_file_atomic(path, out);
}

ComplexImage load_kspace(const fs::path& path) {
  if (!fs::exists(path)) throw IoError("no such file: " + path.string());
  const std::string in = read_file(path);
  if (in.size() < 16 || std::string_view(in.data(), 8) != kKspaceMagic)
    throw IoError(path.string() + ": not a raw k-space file");
  const auto rows = get_le<std::uint32_t>(in, 8);
  const auto cols = get_le<std::uint32_t>(in, 12);
  const std::size_t n = std::size_t{rows} * cols;
  if (rows == 0 || cols == 0 || in.size() != 16 + n * 16)
    throw IoError(path.string() + ": k-space payload size does not match header");
  std::vector<cplx> data(n);
  for (std::size_t k = 0; k < n; ++k)
    data[k] = {get_le<double>(in, 16 + 16 * k), get_le<double>(in, 24 + 16 * k)};
  ComplexImage img(rows, cols, std::move(data));
  if (!img.all_finite()) throw IoError(path.string() + ": k-space contains non-finite values");
  return img;
}

void save_sparsity_csv(const SparsityReport& original, const SparsityReport& zero_filled,
                       const fs::path& path) {
  if (original.histogram.size() != zero_filled.histogram.size())
    throw std::invalid_argument("save_sparsity_csv: bin counts differ");
  std::string out = "bin,original_edge,original_count,zero_filled_edge,zero_filled_count\n";
  for (std::size_t b = 0; b < original.histogram.size(); ++b) {
    out += std::to_string(b) + "," + format_double(original.histogram[b].lower_edge) + "," +
           std::to_string(original.histogram[b].count) + "," +
           format_double(zero_filled.histogram[b].lower_edge) + "," +
           std::to_string(zero_filled.histogram[b].count) + "\n";
  }
  write_file_atomic(path, out);
}

}  // namespace csmri
