#pragma once

#include "lungsynth/image.hpp"
#include "lungsynth/random.hpp"

namespace lungsynth::phantom {

struct Ellipse {
  double cx = 0.0;
  double cy = 0.0;
  double rx = 0.0;
  double ry = 0.0;

  bool contains(double x, double y) const {
    const double u = (x - cx) / rx;
    const double v = (y - cy) / ry;
    return u * u + v * v <= 1.0;
  }
};

/// Synthetic chest-like image with known lung masks.
struct Phantom {
  GrayImage image;
  BinaryMask left;
  BinaryMask right;
  BinaryMask combined;
  Ellipse left_lung;
  Ellipse right_lung;
};

BinaryMask ellipse_mask(ImageSize size, const Ellipse& e);

/// Bright body (0.8) inside a dark air margin, two dark (0.2) upright
/// ellipses jittered within each half, a brighter mediastinum strip, light
/// rib bands, Gaussian noise and a mild blur.
Phantom two_ellipse(int size, RandomStream& rng);

/// Lungs with a top-to-bottom intensity gradient (0.22 -> 0.42), a
/// full-width shadow bar (0.32) below them, and faint bridges (0.47) joining
/// each lung to the bar. Any single threshold either truncates the lungs or
/// swallows the bar.
Phantom merge_inducing(int size, RandomStream& rng);

}  // namespace lungsynth::phantom
