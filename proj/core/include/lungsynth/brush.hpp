#pragma once

#include <cmath>
#include <numbers>
#include <vector>

#include "lungsynth/image.hpp"
#include "lungsynth/random.hpp"

namespace lungsynth::brush {

struct IntRange {
  int min = 1;
  int max = 1;
  bool operator==(const IntRange&) const = default;
};

/// Lengths (base_radius, walk_step) are given at reference_width and scale
/// with the width of the painted image.
struct Config {
  IntRange anchor_count{2, 5};
  IntRange stamps_per_anchor{20, 60};
  double base_radius = 6.0;
  double size_jitter = 0.5;     // fraction of base_radius
  double angle_jitter = 45.0;   // degrees, per walk step
  double opacity_base = 0.25;
  double opacity_jitter = 0.6;  // fraction of opacity_base
  double stamp_aspect = 0.4;    // minor / major axis
  double walk_step = 3.0;
  int reference_width = 256;

  void validate() const;
  double scale_for(int image_width) const {
    return static_cast<double>(image_width) / static_cast<double>(reference_width);
  }
};

struct StampRecord {
  int anchor = 0;
  Point center;
  double radius = 0.0;
  double angle = 0.0;           // degrees
  double heading_change = 0.0;  // degrees relative to the previous stamp
  double opacity = 0.0;
};

/// `count` foreground pixels, uniform without replacement; with replacement
/// once count exceeds the foreground size. Throws EmptyLungMask.
std::vector<Point> sample_anchors(const BinaryMask& lung, int count,
                                  RandomStream& rng);

/// Raised-cosine value of a unit stamp at normalized elliptical radius rho:
/// 1 at the centre, 0 at and beyond the ellipse boundary.
inline double stamp_profile(double rho) {
  if (rho >= 1.0) return 0.0;
  return 0.5 * (1.0 + std::cos(std::numbers::pi * rho));
}

/// Adds a rotated elliptical raised-cosine stamp (major axis `radius` along
/// `angle` degrees, minor axis radius*aspect) with saturating addition.
/// Parts falling outside the layer are clipped.
void stamp(GrayImage& layer, Point center, double radius, double angle,
           double opacity, double aspect);

/// A_base: random-walk strokes from each anchor, masked to the lung.
/// `trace`, when given, receives every realized stamp.
GrayImage paint_base(const BinaryMask& lung, const Config& config,
                     RandomStream& rng, std::vector<Point>* anchors = nullptr,
                     std::vector<StampRecord>* trace = nullptr);

}  // namespace lungsynth::brush

