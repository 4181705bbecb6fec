#include "lungsynth/brush.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "lungsynth/errors.hpp"

namespace lungsynth::brush {

namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;

bool in_unit(double v) { return v >= 0.0 && v <= 1.0; }

}  // namespace

void Config::validate() const {
  auto range_ok = [](IntRange r) { return r.min >= 1 && r.min <= r.max; };
  if (!range_ok(anchor_count)) throw ConfigError("brush.anchor_count: need 1 <= min <= max");
  if (!range_ok(stamps_per_anchor)) {
    throw ConfigError("brush.stamps_per_anchor: need 1 <= min <= max");
  }
  if (!(base_radius >= 1.0)) throw ConfigError("brush.base_radius must be >= 1");
  if (!in_unit(size_jitter) || !in_unit(opacity_jitter)) {
    throw ConfigError("brush jitter fractions must lie in [0,1]");
  }
  if (!(angle_jitter >= 0.0 && angle_jitter <= 180.0)) {
    throw ConfigError("brush.angle_jitter must lie in [0,180] degrees");
  }
  if (!(opacity_base > 0.0 && opacity_base <= 1.0)) {
    throw ConfigError("brush.opacity_base must lie in (0,1]");
  }
  if (!(stamp_aspect > 0.0 && stamp_aspect <= 1.0)) {
    throw ConfigError("brush.stamp_aspect must lie in (0,1]");
  }
  if (!(walk_step >= 0.0)) throw ConfigError("brush.walk_step must be >= 0");
  if (reference_width < 1) throw ConfigError("brush.reference_width must be >= 1");
}

std::vector<Point> sample_anchors(const BinaryMask& lung, int count,
                                  RandomStream& rng) {
  if (count < 1) throw std::invalid_argument("sample_anchors: count must be >= 1");
  std::vector<std::uint32_t> foreground;
  for (std::size_t i = 0; i < lung.pixel_count(); ++i) {
    if (lung[i]) foreground.push_back(static_cast<std::uint32_t>(i));
  }
  if (foreground.empty()) throw EmptyLungMask();

  const auto n = foreground.size();
  const auto want = static_cast<std::size_t>(count);
  std::vector<std::uint32_t> picked;
  picked.reserve(want);
  if (want <= n) {
    // Partial Fisher-Yates.
    for (std::size_t i = 0; i < want; ++i) {
      const auto j = static_cast<std::size_t>(
          rng.uniform_int(static_cast<std::int64_t>(i), static_cast<std::int64_t>(n - 1)));
      std::swap(foreground[i], foreground[j]);
      picked.push_back(foreground[i]);
    }
  } else {
    for (std::size_t i = 0; i < want; ++i) {
      const auto j = static_cast<std::size_t>(
          rng.uniform_int(0, static_cast<std::int64_t>(n - 1)));
      picked.push_back(foreground[j]);
    }
  }

  std::vector<Point> anchors;
  anchors.reserve(want);
  const auto w = static_cast<std::uint32_t>(lung.width());
  for (std::uint32_t p : picked) {
    anchors.push_back({static_cast<double>(p % w), static_cast<double>(p / w)});
  }
  return anchors;
}

void stamp(GrayImage& layer, Point center, double radius, double angle,
           double opacity, double aspect) {
  if (!(radius >= 1.0)) throw std::invalid_argument("stamp: radius must be >= 1");
  if (!(aspect > 0.0)) throw std::invalid_argument("stamp: aspect must be > 0");
  if (opacity <= 0.0) return;

  const double major = radius;
  const double minor = radius * aspect;
  const double reach = std::max(major, minor);
  const double c = std::cos(angle * kDegToRad);
  const double s = std::sin(angle * kDegToRad);

  const int x0 = std::max(0, static_cast<int>(std::floor(center.x - reach)));
  const int x1 = std::min(layer.width() - 1, static_cast<int>(std::ceil(center.x + reach)));
  const int y0 = std::max(0, static_cast<int>(std::floor(center.y - reach)));
  const int y1 = std::min(layer.height() - 1, static_cast<int>(std::ceil(center.y + reach)));

  for (int y = y0; y <= y1; ++y) {
    for (int x = x0; x <= x1; ++x) {
      const double dx = x - center.x;
      const double dy = y - center.y;
      const double u = (dx * c + dy * s) / major;
      const double v = (-dx * s + dy * c) / minor;
      const double value = opacity * stamp_profile(std::sqrt(u * u + v * v));
      if (value <= 0.0) continue;
      double& px = layer(x, y);
      px = std::min(1.0, px + value);
    }
  }
}

GrayImage paint_base(const BinaryMask& lung, const Config& config,
                     RandomStream& rng, std::vector<Point>* anchors_out,
                     std::vector<StampRecord>* trace) {
  config.validate();
  const int anchor_count = static_cast<int>(
      rng.uniform_int(config.anchor_count.min, config.anchor_count.max));
  const std::vector<Point> anchors = sample_anchors(lung, anchor_count, rng);

  const double scale = config.scale_for(lung.width());
  const double radius = config.base_radius * scale;
  const double step = config.walk_step * scale;

  GrayImage layer(lung.width(), lung.height(), 0.0);
  for (std::size_t a = 0; a < anchors.size(); ++a) {
    const int stamps = static_cast<int>(
        rng.uniform_int(config.stamps_per_anchor.min, config.stamps_per_anchor.max));
    double heading = rng.uniform(0.0, 360.0);
    Point pos = anchors[a];
    for (int k = 0; k < stamps; ++k) {
      double turn = 0.0;
      if (k > 0) {
        turn = config.angle_jitter * rng.symmetric();
        heading += turn;
        pos.x += step * std::cos(heading * kDegToRad);
        pos.y += step * std::sin(heading * kDegToRad);
      }
      const double r = std::max(1.0, radius * (1.0 + config.size_jitter * rng.symmetric()));
      const double opacity = std::clamp(
          config.opacity_base * (1.0 + config.opacity_jitter * rng.symmetric()), 0.0, 1.0);
      stamp(layer, pos, r, heading, opacity, config.stamp_aspect);
      if (trace) trace->push_back({static_cast<int>(a), pos, r, heading, turn, opacity});
    }
  }

  for (std::size_t i = 0; i < layer.pixel_count(); ++i) {
    if (!lung[i]) layer[i] = 0.0;
  }
  if (anchors_out) *anchors_out = anchors;
  return layer;
}

}  // namespace lungsynth::brush
