#include "lungsynth/phantom.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "lungsynth/filters.hpp"

namespace lungsynth::phantom {

namespace {

double gaussian(RandomStream& rng) {
  // Box-Muller; u1 kept away from 0.
  const double u1 = 1.0 - rng.uniform();
  const double u2 = rng.uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

void add_noise(GrayImage& image, double sigma, RandomStream& rng) {
  for (std::size_t i = 0; i < image.pixel_count(); ++i) {
    image[i] = std::clamp(image[i] + sigma * gaussian(rng), 0.0, 1.0);
  }
}

Phantom finish(GrayImage image, const Ellipse& left, const Ellipse& right) {
  Phantom p;
  const ImageSize size = image.size();
  p.image = std::move(image);
  p.left = ellipse_mask(size, left);
  p.right = ellipse_mask(size, right);
  p.combined = mask_union(p.left, p.right);
  p.left_lung = left;
  p.right_lung = right;
  return p;
}

}  // namespace

BinaryMask ellipse_mask(ImageSize size, const Ellipse& e) {
  BinaryMask m(size.width, size.height);
  for (int y = 0; y < size.height; ++y) {
    for (int x = 0; x < size.width; ++x) m.set(x, y, e.contains(x, y));
  }
  return m;
}

Phantom two_ellipse(int size, RandomStream& rng) {
  const double s = size;
  auto lung = [&](double cx) {
    return Ellipse{s * (cx + rng.uniform(-0.03, 0.03)), s * (0.5 + rng.uniform(-0.04, 0.04)),
                   s * rng.uniform(0.09, 0.13), s * rng.uniform(0.20, 0.29)};
  };
  const Ellipse left = lung(0.25);
  const Ellipse right = lung(0.75);
  const Ellipse body{0.5 * s, 0.5 * s, 0.5 * s, 0.6 * s};
  const double rib_spacing = s * rng.uniform(0.07, 0.09);
  const double rib_phase = rng.uniform(0.0, rib_spacing);
  const double rib_half = 0.012 * s;

  GrayImage image(size, size, 0.0);
  for (int y = 0; y < size; ++y) {
    for (int x = 0; x < size; ++x) {
      double v = body.contains(x, y) ? 0.8 : 0.08;
      if (std::abs(x - 0.5 * s) < 0.05 * s && body.contains(x, y)) v = 0.9;
      for (const Ellipse* e : {&left, &right}) {
        if (!e->contains(x, y)) continue;
        // Ribs arc downward away from the midline.
        const double bend = 0.04 * s * std::pow((x - e->cx) / e->rx, 2);
        const double offset = std::fmod(y - bend - rib_phase + 10.0 * rib_spacing, rib_spacing);
        v = (offset < 2.0 * rib_half) ? 0.32 : 0.2;
      }
      image(x, y) = v;
    }
  }
  add_noise(image, 0.02, rng);
  return finish(gaussian_blur(image, 1.0), left, right);
}

Phantom merge_inducing(int size, RandomStream& rng) {
  const double s = size;
  auto lung = [&](double cx) {
    return Ellipse{s * (cx + rng.uniform(-0.02, 0.02)), s * (0.42 + rng.uniform(-0.02, 0.02)),
                   s * rng.uniform(0.10, 0.12), s * rng.uniform(0.26, 0.28)};
  };
  const Ellipse left = lung(0.25);
  const Ellipse right = lung(0.75);
  const double bar_top = 0.84 * s;
  const double bar_bottom = 0.92 * s;
  const double bridge_half = 0.02 * s;

  GrayImage image(size, size, 0.8);
  for (int y = 0; y < size; ++y) {
    for (int x = 0; x < size; ++x) {
      double v = std::abs(x - 0.5 * s) < 0.05 * s ? 0.9 : 0.8;
      if (y >= bar_top && y <= bar_bottom) v = 0.32;
      for (const Ellipse* e : {&left, &right}) {
        if (std::abs(x - e->cx) <= bridge_half && y > e->cy && y < bar_top) v = 0.47;
        if (e->contains(x, y)) {
          const double t = (y - (e->cy - e->ry)) / (2.0 * e->ry);
          v = 0.22 + 0.20 * std::clamp(t, 0.0, 1.0);
        }
      }
      image(x, y) = v;
    }
  }
  add_noise(image, 0.004, rng);
  return finish(std::move(image), left, right);
}

}  // namespace lungsynth::phantom
