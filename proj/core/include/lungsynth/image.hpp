#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace lungsynth {

struct ImageSize {
  int width = 0;
  int height = 0;

  std::size_t area() const {
    return static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  }
  bool operator==(const ImageSize&) const = default;
};

struct Point {
  double x = 0.0;
  double y = 0.0;
  bool operator==(const Point&) const = default;
};

/// Row-major grayscale field. Intensity images live in [0,1]; anomaly layers
/// reuse the type for additive opacity magnitudes in the same range.
class GrayImage {
 public:
  GrayImage() = default;
  GrayImage(int width, int height, double fill = 0.0);
  /// Throws std::invalid_argument if the length is wrong or a value is not
  /// finite or falls outside [0,1].
  GrayImage(int width, int height, std::vector<double> pixels);

  int width() const { return width_; }
  int height() const { return height_; }
  ImageSize size() const { return {width_, height_}; }
  std::size_t pixel_count() const { return pixels_.size(); }
  bool empty() const { return pixels_.empty(); }

  double operator()(int x, int y) const { return pixels_[index(x, y)]; }
  double& operator()(int x, int y) { return pixels_[index(x, y)]; }
  double operator[](std::size_t i) const { return pixels_[i]; }
  double& operator[](std::size_t i) { return pixels_[i]; }

  std::span<const double> pixels() const { return pixels_; }
  std::span<double> pixels() { return pixels_; }

  std::size_t index(int x, int y) const {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(x);
  }

  /// True when every pixel is finite and within [0,1].
  bool in_unit_range() const;

  bool operator==(const GrayImage&) const = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<double> pixels_;
};

/// Row-major {0,1} field.
class BinaryMask {
 public:
  BinaryMask() = default;
  BinaryMask(int width, int height, bool fill = false);
  /// Throws std::invalid_argument if the length is wrong or a value is not
  /// 0 or 1.
  BinaryMask(int width, int height, std::vector<std::uint8_t> bits);

  int width() const { return width_; }
  int height() const { return height_; }
  ImageSize size() const { return {width_, height_}; }
  std::size_t pixel_count() const { return bits_.size(); }

  bool operator()(int x, int y) const { return bits_[index(x, y)] != 0; }
  void set(int x, int y, bool v) { bits_[index(x, y)] = v ? 1 : 0; }
  bool operator[](std::size_t i) const { return bits_[i] != 0; }
  void set(std::size_t i, bool v) { bits_[i] = v ? 1 : 0; }

  std::span<const std::uint8_t> bits() const { return bits_; }

  std::size_t index(int x, int y) const {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(x);
  }

  std::size_t count() const;
  bool any() const;

  bool operator==(const BinaryMask&) const = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> bits_;
};

BinaryMask mask_union(const BinaryMask& a, const BinaryMask& b);
BinaryMask mask_intersection(const BinaryMask& a, const BinaryMask& b);
/// a AND NOT b
BinaryMask mask_difference(const BinaryMask& a, const BinaryMask& b);
std::size_t overlap_count(const BinaryMask& a, const BinaryMask& b);

/// Throws DimensionMismatch naming `op` when the sizes differ.
void require_same_size(const char* op, ImageSize a, ImageSize b);

}  // namespace lungsynth
