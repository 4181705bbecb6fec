#include "lungsynth/image_io.hpp"

#include <png.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <csetjmp>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <memory>
#include <sstream>
#include <string>

#include "lungsynth/errors.hpp"

namespace lungsynth::io {

namespace fs = std::filesystem;

namespace {

struct RawImage {
  int width = 0;
  int height = 0;
  int bit_depth = 8;
  int max_code = 255;  // code value that maps to intensity 1
  std::vector<std::uint16_t> codes;
};

struct FileCloser {
  void operator()(std::FILE* f) const {
    if (f) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

FilePtr open_file(const fs::path& path, const char* mode) {
  FilePtr f(std::fopen(path.c_str(), mode));
  if (!f) {
    throw IoError(std::string("cannot open ") + path.string() + ": " +
                  std::strerror(errno));
  }
  return f;
}

std::string lower_extension(const fs::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return ext;
}

struct PngErrorContext {
  char message[256] = {0};
};

void png_error_handler(png_structp png, png_const_charp msg) {
  auto* ctx = static_cast<PngErrorContext*>(png_get_error_ptr(png));
  std::snprintf(ctx->message, sizeof(ctx->message), "%s", msg);
  png_longjmp(png, 1);
}

void png_warning_handler(png_structp, png_const_charp) {}

// Everything with a destructor is declared before setjmp so a longjmp out of
// libpng never skips one.
bool decode_png(std::FILE* fp, RawImage& out, PngErrorContext& ctx) {
  std::vector<png_byte> buffer;
  std::vector<png_bytep> rows;
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, &ctx,
                                           png_error_handler, png_warning_handler);
  if (!png) return false;
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    return false;
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    return false;
  }

  png_init_io(png, fp);
  png_read_info(png, info);
  const png_byte color_type = png_get_color_type(png, info);
  if (color_type & PNG_COLOR_MASK_COLOR) {
    std::snprintf(ctx.message, sizeof(ctx.message),
                  "colour PNG not supported (grayscale only)");
    png_destroy_read_struct(&png, &info, nullptr);
    return false;
  }
  if (png_get_bit_depth(png, info) < 8) png_set_expand_gray_1_2_4_to_8(png);
  if (color_type & PNG_COLOR_MASK_ALPHA) png_set_strip_alpha(png);
  png_read_update_info(png, info);

  out.width = static_cast<int>(png_get_image_width(png, info));
  out.height = static_cast<int>(png_get_image_height(png, info));
  out.bit_depth = png_get_bit_depth(png, info);
  out.max_code = out.bit_depth == 16 ? 65535 : 255;
  const std::size_t rowbytes = png_get_rowbytes(png, info);
  buffer.resize(rowbytes * static_cast<std::size_t>(out.height));
  rows.resize(static_cast<std::size_t>(out.height));
  for (int y = 0; y < out.height; ++y) {
    rows[static_cast<std::size_t>(y)] = buffer.data() + rowbytes * static_cast<std::size_t>(y);
  }
  png_read_image(png, rows.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);

  const std::size_t n = static_cast<std::size_t>(out.width) * static_cast<std::size_t>(out.height);
  out.codes.resize(n);
  for (int y = 0; y < out.height; ++y) {
    const png_byte* row = rows[static_cast<std::size_t>(y)];
    for (int x = 0; x < out.width; ++x) {
      const std::size_t i = static_cast<std::size_t>(y) * static_cast<std::size_t>(out.width) +
                            static_cast<std::size_t>(x);
      if (out.bit_depth == 16) {
        out.codes[i] = static_cast<std::uint16_t>((row[2 * x] << 8) | row[2 * x + 1]);
      } else {
        out.codes[i] = row[x];
      }
    }
  }
  return true;
}

bool encode_png(std::FILE* fp, int width, int height, int bit_depth,
                int color_type, const std::vector<png_byte>& buffer,
                PngErrorContext& ctx) {
  std::vector<png_bytep> rows(static_cast<std::size_t>(height));
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, &ctx,
                                            png_error_handler, png_warning_handler);
  if (!png) return false;
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_write_struct(&png, nullptr);
    return false;
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    return false;
  }
  png_init_io(png, fp);
  png_set_compression_level(png, 6);
  png_set_IHDR(png, info, static_cast<png_uint_32>(width),
               static_cast<png_uint_32>(height), bit_depth, color_type,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  const std::size_t rowbytes = buffer.size() / static_cast<std::size_t>(height);
  for (int y = 0; y < height; ++y) {
    rows[static_cast<std::size_t>(y)] =
        const_cast<png_bytep>(buffer.data()) + rowbytes * static_cast<std::size_t>(y);
  }
  png_write_image(png, rows.data());
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  return true;
}

RawImage read_png(const fs::path& path) {
  FilePtr fp = open_file(path, "rb");
  png_byte sig[8];
  if (std::fread(sig, 1, 8, fp.get()) != 8 || png_sig_cmp(sig, 0, 8) != 0) {
    throw IoError("not a PNG file: " + path.string());
  }
  std::rewind(fp.get());
  RawImage raw;
  PngErrorContext ctx;
  if (!decode_png(fp.get(), raw, ctx)) {
    throw IoError("failed to decode " + path.string() + ": " + ctx.message);
  }
  return raw;
}

void write_png(const fs::path& path, int width, int height, int bit_depth,
               int color_type, const std::vector<png_byte>& buffer) {
  FilePtr fp = open_file(path, "wb");
  PngErrorContext ctx;
  if (!encode_png(fp.get(), width, height, bit_depth, color_type, buffer, ctx)) {
    throw IoError("failed to encode " + path.string() + ": " + ctx.message);
  }
  if (std::fflush(fp.get()) != 0) throw IoError("write failed: " + path.string());
}

// PGM header tokens may be separated by whitespace and '#' comments.
std::string next_pgm_token(std::istream& in) {
  std::string token;
  char c;
  while (in.get(c)) {
    if (c == '#') {
      std::string ignored;
      std::getline(in, ignored);
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      if (!token.empty()) return token;
      continue;
    }
    token.push_back(c);
  }
  return token;
}

RawImage read_pgm(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  const std::string magic = next_pgm_token(in);
  if (magic != "P5" && magic != "P2") {
    throw IoError("not a PGM file (P2/P5): " + path.string());
  }
  RawImage raw;
  int maxval = 0;
  try {
    raw.width = std::stoi(next_pgm_token(in));
    raw.height = std::stoi(next_pgm_token(in));
    maxval = std::stoi(next_pgm_token(in));
  } catch (const std::exception&) {
    throw IoError("malformed PGM header: " + path.string());
  }
  if (raw.width < 1 || raw.height < 1 || maxval < 1 || maxval > 65535) {
    throw IoError("unsupported PGM geometry or maxval: " + path.string());
  }
  raw.bit_depth = maxval > 255 ? 16 : 8;
  const std::size_t n = static_cast<std::size_t>(raw.width) * static_cast<std::size_t>(raw.height);
  raw.codes.resize(n);
  if (magic == "P5") {
    const std::size_t bytes_per = maxval > 255 ? 2 : 1;
    std::vector<unsigned char> data(n * bytes_per);
    in.read(reinterpret_cast<char*>(data.data()), static_cast<std::streamsize>(data.size()));
    if (static_cast<std::size_t>(in.gcount()) != data.size()) {
      throw IoError("truncated PGM data: " + path.string());
    }
    for (std::size_t i = 0; i < n; ++i) {
      raw.codes[i] = bytes_per == 2
                         ? static_cast<std::uint16_t>((data[2 * i] << 8) | data[2 * i + 1])
                         : data[i];
    }
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      const std::string tok = next_pgm_token(in);
      if (tok.empty()) throw IoError("truncated PGM data: " + path.string());
      raw.codes[i] = static_cast<std::uint16_t>(std::stoi(tok));
    }
  }
  for (auto& c : raw.codes) c = std::min<std::uint16_t>(c, static_cast<std::uint16_t>(maxval));
  raw.max_code = maxval;
  return raw;
}

void write_pgm(const fs::path& path, int width, int height, int bit_depth,
               const std::vector<std::uint16_t>& codes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << "P5\n" << width << ' ' << height << '\n'
      << (bit_depth == 16 ? 65535 : 255) << '\n';
  for (std::uint16_t c : codes) {
    if (bit_depth == 16) {
      out.put(static_cast<char>(c >> 8));
      out.put(static_cast<char>(c & 0xFF));
    } else {
      out.put(static_cast<char>(c));
    }
  }
  if (!out) throw IoError("write failed: " + path.string());
}

RawImage read_raw(const fs::path& path) {
  const std::string ext = lower_extension(path);
  if (ext == ".png") return read_png(path);
  if (ext == ".pgm" || ext == ".pnm") return read_pgm(path);
  throw IoError("unsupported image extension: " + path.string());
}

void write_raw(const fs::path& path, int width, int height, int bit_depth,
               const std::vector<std::uint16_t>& codes) {
  const std::string ext = lower_extension(path);
  if (ext == ".pgm" || ext == ".pnm") {
    write_pgm(path, width, height, bit_depth, codes);
    return;
  }
  if (ext != ".png") throw IoError("unsupported image extension: " + path.string());
  std::vector<png_byte> buffer;
  buffer.reserve(codes.size() * (bit_depth == 16 ? 2 : 1));
  for (std::uint16_t c : codes) {
    if (bit_depth == 16) {
      buffer.push_back(static_cast<png_byte>(c >> 8));
      buffer.push_back(static_cast<png_byte>(c & 0xFF));
    } else {
      buffer.push_back(static_cast<png_byte>(c));
    }
  }
  write_png(path, width, height, bit_depth, PNG_COLOR_TYPE_GRAY, buffer);
}

}  // namespace

GrayImage load_image(const fs::path& path) {
  const RawImage raw = read_raw(path);
  const double full = raw.max_code;
  std::vector<double> pixels(raw.codes.size());
  for (std::size_t i = 0; i < pixels.size(); ++i) {
    pixels[i] = std::min(1.0, raw.codes[i] / full);
  }
  return GrayImage(raw.width, raw.height, std::move(pixels));
}

BinaryMask load_mask(const fs::path& path) {
  const RawImage raw = read_raw(path);
  // code / max_code >= 0.5 without rounding
  std::vector<std::uint8_t> bits(raw.codes.size());
  for (std::size_t i = 0; i < bits.size(); ++i) {
    bits[i] = 2 * static_cast<int>(raw.codes[i]) >= raw.max_code ? 1 : 0;
  }
  return BinaryMask(raw.width, raw.height, std::move(bits));
}

void save_image(const fs::path& path, const GrayImage& image, BitDepth depth) {
  const double full = depth == BitDepth::Sixteen ? 65535.0 : 255.0;
  std::vector<std::uint16_t> codes(image.pixel_count());
  for (std::size_t i = 0; i < codes.size(); ++i) {
    codes[i] = static_cast<std::uint16_t>(
        std::lround(std::clamp(image[i], 0.0, 1.0) * full));
  }
  write_raw(path, image.width(), image.height(), static_cast<int>(depth), codes);
}

void save_mask(const fs::path& path, const BinaryMask& mask) {
  std::vector<std::uint16_t> codes(mask.pixel_count());
  for (std::size_t i = 0; i < codes.size(); ++i) codes[i] = mask[i] ? 255 : 0;
  write_raw(path, mask.width(), mask.height(), 8, codes);
}

void save_png_rgb(const fs::path& path, const RgbImage& image) {
  if (image.data.size() != static_cast<std::size_t>(image.width) *
                               static_cast<std::size_t>(image.height) * 3) {
    throw IoError("RGB buffer size does not match dimensions");
  }
  write_png(path, image.width, image.height, 8, PNG_COLOR_TYPE_RGB, image.data);
}

namespace {

bool is_boundary(const BinaryMask& mask, int x, int y) {
  if (!mask(x, y)) return false;
  if (x == 0 || y == 0 || x == mask.width() - 1 || y == mask.height() - 1) return true;
  return !mask(x - 1, y) || !mask(x + 1, y) || !mask(x, y - 1) || !mask(x, y + 1);
}

RgbImage grayscale_rgb(const GrayImage& image) {
  RgbImage out{image.width(), image.height(), {}};
  out.data.reserve(image.pixel_count() * 3);
  for (std::size_t i = 0; i < image.pixel_count(); ++i) {
    const auto v = static_cast<std::uint8_t>(std::lround(std::clamp(image[i], 0.0, 1.0) * 255.0));
    out.data.insert(out.data.end(), {v, v, v});
  }
  return out;
}

void draw_boundary(RgbImage& out, const BinaryMask& mask,
                   std::array<std::uint8_t, 3> color) {
  for (int y = 0; y < mask.height(); ++y) {
    for (int x = 0; x < mask.width(); ++x) {
      if (!is_boundary(mask, x, y)) continue;
      const std::size_t o = mask.index(x, y) * 3;
      out.data[o] = color[0];
      out.data[o + 1] = color[1];
      out.data[o + 2] = color[2];
    }
  }
}

}  // namespace

RgbImage overlay_boundary(const GrayImage& image, const BinaryMask& mask,
                          std::array<std::uint8_t, 3> color) {
  require_same_size("overlay_boundary", image.size(), mask.size());
  RgbImage out = grayscale_rgb(image);
  draw_boundary(out, mask, color);
  return out;
}

RgbImage overlay_boundaries(const GrayImage& image, const BinaryMask& first,
                            const BinaryMask& second) {
  require_same_size("overlay_boundaries", image.size(), first.size());
  require_same_size("overlay_boundaries", image.size(), second.size());
  RgbImage out = grayscale_rgb(image);
  draw_boundary(out, first, {255, 40, 40});
  draw_boundary(out, second, {40, 160, 255});
  return out;
}

}  // namespace lungsynth::io
