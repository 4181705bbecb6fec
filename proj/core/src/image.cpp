#include "lungsynth/image.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "lungsynth/errors.hpp"

namespace lungsynth {

namespace {

void check_dims(int width, int height) {
  if (width < 1 || height < 1) {
    throw std::invalid_argument("image dimensions must be positive, got " +
                                std::to_string(width) + "x" +
                                std::to_string(height));
  }
}

}  // namespace

GrayImage::GrayImage(int width, int height, double fill)
    : width_(width), height_(height) {
  check_dims(width, height);
  pixels_.assign(size().area(), fill);
}

GrayImage::GrayImage(int width, int height, std::vector<double> pixels)
    : width_(width), height_(height), pixels_(std::move(pixels)) {
  check_dims(width, height);
  if (pixels_.size() != size().area()) {
    throw std::invalid_argument("pixel buffer length does not match " +
                                std::to_string(width) + "x" +
                                std::to_string(height));
  }
  if (!in_unit_range()) {
    throw std::invalid_argument("pixel values must be finite and in [0,1]");
  }
}

bool GrayImage::in_unit_range() const {
  return std::all_of(pixels_.begin(), pixels_.end(), [](double v) {
    return std::isfinite(v) && v >= 0.0 && v <= 1.0;
  });
}

BinaryMask::BinaryMask(int width, int height, bool fill)
    : width_(width), height_(height) {
  check_dims(width, height);
  bits_.assign(size().area(), fill ? 1 : 0);
}

BinaryMask::BinaryMask(int width, int height, std::vector<std::uint8_t> bits)
    : width_(width), height_(height), bits_(std::move(bits)) {
  check_dims(width, height);
  if (bits_.size() != size().area()) {
    throw std::invalid_argument("mask buffer length does not match " +
                                std::to_string(width) + "x" +
                                std::to_string(height));
  }
  if (std::any_of(bits_.begin(), bits_.end(),
                  [](std::uint8_t b) { return b > 1; })) {
    throw std::invalid_argument("mask values must be 0 or 1");
  }
}

std::size_t BinaryMask::count() const {
  return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), 1));
}

bool BinaryMask::any() const {
  return std::find(bits_.begin(), bits_.end(), 1) != bits_.end();
}

void require_same_size(const char* op, ImageSize a, ImageSize b) {
  if (a != b) throw DimensionMismatch(op, a.width, a.height, b.width, b.height);
}

namespace {

template <typename Fn>
BinaryMask combine(const char* op, const BinaryMask& a, const BinaryMask& b,
                   Fn fn) {
  require_same_size(op, a.size(), b.size());
  BinaryMask out(a.width(), a.height());
  for (std::size_t i = 0; i < a.pixel_count(); ++i) out.set(i, fn(a[i], b[i]));
  return out;
}

}  // namespace

BinaryMask mask_union(const BinaryMask& a, const BinaryMask& b) {
  return combine("mask_union", a, b, [](bool x, bool y) { return x || y; });
}

BinaryMask mask_intersection(const BinaryMask& a, const BinaryMask& b) {
  return combine("mask_intersection", a, b,
                 [](bool x, bool y) { return x && y; });
}

BinaryMask mask_difference(const BinaryMask& a, const BinaryMask& b) {
  return combine("mask_difference", a, b,
                 [](bool x, bool y) { return x && !y; });
}

std::size_t overlap_count(const BinaryMask& a, const BinaryMask& b) {
  require_same_size("overlap_count", a.size(), b.size());
  std::size_t n = 0;
  for (std::size_t i = 0; i < a.pixel_count(); ++i) n += (a[i] && b[i]) ? 1 : 0;
  return n;
}

}  // namespace lungsynth
